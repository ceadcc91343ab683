#pragma once

#include <array>
#include <cstdint>

#include "kslog/simulator.hpp"

namespace kslog {

// Four leaves a, b, c, d (rows) by eight sites (columns).
using QuartetData = std::array<std::array<std::uint8_t, 8>, 4>;

// Two datasets with identical, all-1/4 pairwise correlation matrices.
const QuartetData& sufficiency_data1();
const QuartetData& sufficiency_data2();

Alignment to_alignment(const QuartetData& data);
// True when every pairwise correlation matrix equals 1/4 in each entry.
bool uniform_correlations(const QuartetData& data);

// Likelihood of the dataset on the quartet ab|cd under the two-state
// symmetric model where every one of the five edges flips with probability
// p; sums over the four internal-state pairs at each site.
double quartet_likelihood(const QuartetData& data, double p);

struct SufficiencyRow {
  double p = 0.0;
  double likelihood1 = 0.0;
  double likelihood2 = 0.0;
  double ratio = 0.0;  // likelihood2 / likelihood1
};

struct SufficiencyDemo {
  double eps = 0.0;
  bool uniform1 = false;
  bool uniform2 = false;
  SufficiencyRow small;      // p = eps
  SufficiencyRow near_half;  // p = 1/2 - eps
};

// Throws ValidationError unless 0 < eps < 0.1.
SufficiencyDemo sufficiency_demo(double eps);

}  // namespace kslog
