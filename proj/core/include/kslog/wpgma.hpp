#pragma once

#include <vector>

#include "kslog/distance_table.hpp"
#include "kslog/reconstruction.hpp"

namespace kslog {

// Agglomerative clustering state for WPGMA on uncorrected distances.
//
// Each cluster keeps its leaves with weights 2^{-|a|_A}, |a|_A the number of
// merges above a inside A, so that the reduced distance
//   d(C, A u B) = (d(C, A) + d(C, B)) / 2
// equals sum_{a, c} w(a) w(c) d(a, c) at every step.
class ClusterForest {
 public:
  struct Cluster {
    std::vector<int> leaves;
    std::vector<double> weights;
    int min_label = 0;
    NodeId node = kNoNode;
    double height = 0.0;  // half the distance at which it was formed
  };
  struct Merge {
    int a_min = 0;
    int b_min = 0;
    double distance = 0.0;
  };

  // Reads table values; throws ValidationError on non-finite entries.
  explicit ClusterForest(const DistanceTable& table);

  bool done() const { return clusters_.size() <= 1; }
  // Merges the closest pair; ties go to the smallest (min A, min B).
  Merge step();

  const std::vector<Cluster>& clusters() const { return clusters_; }
  // Current reduced distance between clusters i and j.
  double distance(std::size_t i, std::size_t j) const { return d_[i][j]; }
  const ShapeBuilder& shape() const { return shape_; }

 private:
  std::vector<Cluster> clusters_;  // sorted by min_label
  std::vector<std::vector<double>> d_;
  ShapeBuilder shape_;
};

// sum_{a in A} sum_{b in B} w(a) w(b) table(a, b)
double leaf_weighted_distance(const DistanceTable& table, const ClusterForest::Cluster& a,
                              const ClusterForest::Cluster& b);

// Runs n-1 merges. Branch lengths in the result are differences of merge
// heights (diagnostic only); merge distances are listed in the diagnostics.
ReconstructionResult wpgma(const DistanceTable& table);

}  // namespace kslog
