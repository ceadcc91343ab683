#include "kslog/tree_generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kslog/errors.hpp"

namespace kslog {

double draw_grid_length(double f, double g, double delta, std::mt19937_64& rng) {
  const auto lo = static_cast<long>(std::ceil(f / delta - 1e-9));
  const auto hi = static_cast<long>(std::floor(g / delta + 1e-9));
  if (lo > hi || lo <= 0) throw ValidationError("no grid point inside [f, g]");
  std::uniform_int_distribution<long> pick(lo, hi);
  return static_cast<double>(pick(rng)) * delta;
}

LengthLaw grid_length_law(double f, double g, double delta) {
  return [=](std::mt19937_64& rng) { return draw_grid_length(f, g, delta, rng); };
}

LengthLaw constant_length_law(double length) {
  return [length](std::mt19937_64&) { return length; };
}

Phylogeny random_homogeneous(int h, const LengthLaw& law, std::mt19937_64& rng) {
  const std::size_t n_nodes = (std::size_t{1} << (h + 1)) - 1;
  std::vector<double> lengths(n_nodes, 0.0);
  for (std::size_t v = 1; v < n_nodes; ++v) lengths[v] = law(rng);
  return Phylogeny::homogeneous(h, [&](NodeId v) { return lengths[v]; });
}

Phylogeny random_yule(std::size_t n, const LengthLaw& law, std::mt19937_64& rng) {
  if (n == 0) throw ValidationError("random_yule: need at least one leaf");
  std::vector<NodeId> parents{kNoNode};
  std::vector<NodeId> leaves{0};
  while (leaves.size() < n) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    const std::size_t slot = pick(rng);
    const NodeId split = leaves[slot];
    const auto left = static_cast<NodeId>(parents.size());
    parents.push_back(split);
    parents.push_back(split);
    leaves[slot] = left;
    leaves.push_back(left + 1);
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> labels(parents.size(), -1);
  for (std::size_t i = 0; i < leaves.size(); ++i) labels[leaves[i]] = perm[i];
  std::vector<double> lengths(parents.size(), 0.0);
  for (std::size_t v = 1; v < parents.size(); ++v) lengths[v] = law(rng);
  return Phylogeny(std::move(parents), std::move(lengths), std::move(labels));
}

Phylogeny caterpillar(std::size_t n, const LengthLaw& law, std::mt19937_64& rng) {
  if (n < 2) throw ValidationError("caterpillar: need at least two leaves");
  // Build bottom-up: node ids assigned top-down afterwards for a valid parent array.
  std::vector<NodeId> parents;
  std::vector<int> labels;
  // Root is the topmost spine node; spine node i (0 = root) has children
  // spine i+1 (or leaf 0 at the bottom) and leaf n-1-i.
  const std::size_t spine = n - 1;
  for (std::size_t i = 0; i < spine; ++i) {
    parents.push_back(i == 0 ? kNoNode : static_cast<NodeId>(i - 1));
    labels.push_back(-1);
  }
  for (std::size_t i = 0; i < spine; ++i) {
    parents.push_back(static_cast<NodeId>(i));
    labels.push_back(static_cast<int>(n - 1 - i));
  }
  parents.push_back(static_cast<NodeId>(spine - 1));
  labels.push_back(0);
  std::vector<double> lengths(parents.size(), 0.0);
  for (std::size_t v = 1; v < parents.size(); ++v) lengths[v] = law(rng);
  return Phylogeny(std::move(parents), std::move(lengths), std::move(labels));
}

}  // namespace kslog
