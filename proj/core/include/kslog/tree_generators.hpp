#pragma once

#include <cstddef>
#include <functional>
#include <random>

#include "kslog/tree.hpp"

namespace kslog {

using LengthLaw = std::function<double(std::mt19937_64&)>;

// Uniform draw over the multiples of delta lying in [f, g].
double draw_grid_length(double f, double g, double delta, std::mt19937_64& rng);
LengthLaw grid_length_law(double f, double g, double delta);
LengthLaw constant_length_law(double length);

// Homogeneous tree of height h with i.i.d. edge lengths.
Phylogeny random_homogeneous(int h, const LengthLaw& law, std::mt19937_64& rng);

// Yule-process topology on n leaves (repeatedly split a uniformly chosen
// leaf), leaf labels assigned by a uniform random permutation.
Phylogeny random_yule(std::size_t n, const LengthLaw& law, std::mt19937_64& rng);

// Caterpillar ((((0,1),2),3),...) with lengths from the law.
Phylogeny caterpillar(std::size_t n, const LengthLaw& law, std::mt19937_64& rng);

}  // namespace kslog
