#pragma once

#include <cstdint>
#include <functional>

#include "kslog/deep_metric.hpp"
#include "kslog/distance_table.hpp"
#include "kslog/reconstruction.hpp"

namespace kslog {

// A reconstructed rooted subtree as the distance routine sees it: the clade
// at its root x, the clades at the two children y, z, and the grid lengths
// (in units of delta) of the edges x-y and x-z. For a leaf, y = z = x and
// both lengths are 0.
struct SubtreeHandle {
  Clade root;
  Clade y;
  Clade z;
  std::int64_t y_length = 0;
  std::int64_t z_length = 0;

  static SubtreeHandle leaf(int label);
  // New root above a and b; len_a, len_b in grid units.
  static SubtreeHandle join(const SubtreeHandle& a, std::int64_t len_a, const SubtreeHandle& b, std::int64_t len_b,
                            double delta);
};

using DistortedOracle = std::function<DistortedValue(const Clade&, const Clade&)>;

// d(a, b) = distorted_metric(table, a, b, params). Holds its own copy of the
// table.
DistortedOracle table_oracle(const DistanceTable& table, const DeepParams& params);

// Distance between the roots x1, x2 of two subtrees. For every pair
// (a, b) in {y1, z1} x {y2, z2}: Dist(a, b) = d(a, b) - tau(a, x1) - tau(b, x2),
// on the integer grid. Returns Dist(z1, z2) when all four agree exactly and
// are finite, +inf otherwise. A negative agreed value is also returned as
// +inf since no tree realizes it. Throws ValidationError when the subtrees
// share a leaf.
DistortedValue distorted_metric_routine(const SubtreeHandle& t1, const SubtreeHandle& t2, const DistortedOracle& dbar,
                                        double delta);

// Greedy forest growth from the leaves:
//  - distances between current roots via distorted_metric_routine;
//  - deep four-point test on every quadruple of roots with six finite
//    distances; roots are linked when they share a side in some passing
//    split and never sit on opposite sides; candidates are mutually nearest
//    linked pairs;
//  - each round takes the candidates whose merged subtree is lowest and
//    merges a disjoint set of them, greedily by distance then leaf labels;
//  - merged edge lengths come from the three-point estimate with the
//    nearest witness (ties by leaf label), rounded to the grid;
//  - with three roots left, they are joined.
// Throws ReconstructionFailure, with the surviving forest in the diagnostics,
// when no candidate or witness exists.
ReconstructionResult forest_reconstruct(const DistanceTable& table, const DeepParams& params);

}  // namespace kslog
