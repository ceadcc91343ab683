#pragma once

#include <random>
#include <span>
#include <vector>

#include "kslog/tree.hpp"

namespace kslog {

// Tree with the given shape whose node heights (distance to every leaf
// below) are heights[v]; leaves must have height 0. Throws ValidationError
// unless every edge gets positive length height[parent] - height[v].
Phylogeny ultrametric_from_heights(std::span<const NodeId> parents, std::span<const int> labels,
                                   std::span<const double> heights);

// Largest spread, over internal v, of tau(v, leaf) across leaves below v.
double ultrametric_spread(const Phylogeny& tree);
bool is_ultrametric(const Phylogeny& tree, double tolerance = 1e-9);
// Throws ValidationError unless is_ultrametric.
void validate_ultrametric(const Phylogeny& tree, double tolerance = 1e-9);

// Random ultrametric tree on n leaves with every edge length in [f, g],
// drawn continuously. Built bottom-up: the lowest cluster merges with a
// uniformly chosen cluster at most g - f higher, at a height uniform over the
// window that keeps both new edges in [f, g]. With balanced set the shape is
// the complete binary tree (n must be a power of two) and heights are drawn
// top-down. Leaf labels are a uniform random permutation. Throws
// ValidationError if 1000 attempts all leave a cluster without a partner.
Phylogeny random_ultrametric(std::size_t n, double f, double g, std::mt19937_64& rng, bool balanced = false);

}  // namespace kslog
