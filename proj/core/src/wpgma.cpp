#include "kslog/wpgma.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "kslog/errors.hpp"

namespace kslog {

ClusterForest::ClusterForest(const DistanceTable& table) {
  const std::size_t n = table.num_leaves();
  if (n == 0) throw ValidationError("wpgma needs at least one leaf");
  d_.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    Cluster c;
    c.leaves = {static_cast<int>(a)};
    c.weights = {1.0};
    c.min_label = static_cast<int>(a);
    c.node = shape_.add_leaf(static_cast<int>(a));
    clusters_.push_back(std::move(c));
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double v = table.value(a, b);
      if (!std::isfinite(v)) throw ValidationError("wpgma: distance table has non-finite entries");
      d_[a][b] = v;
    }
  }
}

ClusterForest::Merge ClusterForest::step() {
  if (done()) throw ValidationError("ClusterForest::step: nothing left to merge");
  const std::size_t m = clusters_.size();
  std::size_t bi = 0, bj = 1;
  // Clusters are sorted by min label, so (i, j) with i < j is already the
  // lexicographic order on (min A, min B).
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (d_[i][j] < d_[bi][bj]) bi = i, bj = j;

  const double dist = d_[bi][bj];
  Merge record{clusters_[bi].min_label, clusters_[bj].min_label, dist};

  Cluster& a = clusters_[bi];
  Cluster& b = clusters_[bj];
  Cluster merged;
  merged.height = 0.5 * dist;
  merged.min_label = std::min(a.min_label, b.min_label);
  merged.node = shape_.join(a.node, merged.height - a.height, b.node, merged.height - b.height);
  for (std::size_t k = 0; k < a.leaves.size(); ++k) {
    merged.leaves.push_back(a.leaves[k]);
    merged.weights.push_back(0.5 * a.weights[k]);
  }
  for (std::size_t k = 0; k < b.leaves.size(); ++k) {
    merged.leaves.push_back(b.leaves[k]);
    merged.weights.push_back(0.5 * b.weights[k]);
  }

  std::vector<double> reduced(m);
  for (std::size_t k = 0; k < m; ++k) reduced[k] = 0.5 * (d_[bi][k] + d_[bj][k]);

  // Slot bi keeps the merged cluster (min label of A u B is A's), bj goes.
  clusters_[bi] = std::move(merged);
  for (std::size_t k = 0; k < m; ++k) {
    if (k == bi || k == bj) continue;
    d_[bi][k] = d_[k][bi] = reduced[k];
  }
  d_[bi][bi] = 0.0;
  clusters_.erase(clusters_.begin() + static_cast<std::ptrdiff_t>(bj));
  d_.erase(d_.begin() + static_cast<std::ptrdiff_t>(bj));
  for (auto& row : d_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
  return record;
}

double leaf_weighted_distance(const DistanceTable& table, const ClusterForest::Cluster& a,
                              const ClusterForest::Cluster& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.leaves.size(); ++i)
    for (std::size_t j = 0; j < b.leaves.size(); ++j)
      acc += a.weights[i] * b.weights[j] *
             table.value(static_cast<std::size_t>(a.leaves[i]), static_cast<std::size_t>(b.leaves[j]));
  return acc;
}

ReconstructionResult wpgma(const DistanceTable& table) {
  ClusterForest forest(table);
  nlohmann::json merges = nlohmann::json::array();
  while (!forest.done()) {
    const auto m = forest.step();
    merges.push_back({{"a", m.a_min}, {"b", m.b_min}, {"distance", m.distance}});
  }
  return finish_shape(forest.shape(), {{"algorithm", "wpgma"}, {"status", "ok"}, {"merges", merges}});
}

}  // namespace kslog
