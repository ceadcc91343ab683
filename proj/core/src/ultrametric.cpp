#include "kslog/ultrametric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kslog/errors.hpp"

namespace kslog {

Phylogeny ultrametric_from_heights(std::span<const NodeId> parents, std::span<const int> labels,
                                   std::span<const double> heights) {
  const std::size_t n = parents.size();
  if (labels.size() != n || heights.size() != n) throw ValidationError("ultrametric: size mismatch");
  std::vector<double> lengths(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (labels[v] >= 0 && heights[v] != 0.0) throw ValidationError("ultrametric: leaves must have height 0");
    if (parents[v] == kNoNode) continue;
    const double len = heights[static_cast<std::size_t>(parents[v])] - heights[v];
    if (!(len > 0.0)) throw ValidationError("ultrametric: heights must decrease toward the leaves");
    lengths[v] = len;
  }
  return Phylogeny(std::vector<NodeId>(parents.begin(), parents.end()), std::move(lengths),
                   std::vector<int>(labels.begin(), labels.end()));
}

double ultrametric_spread(const Phylogeny& tree) {
  double worst = 0.0;
  for (NodeId v : tree.preorder()) {
    if (tree.is_leaf(v)) continue;
    double lo = INFINITY, hi = -INFINITY;
    for (NodeId u : tree.subtree_nodes(v)) {
      if (!tree.is_leaf(u)) continue;
      const double d = tree.root_distance(u) - tree.root_distance(v);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

bool is_ultrametric(const Phylogeny& tree, double tolerance) { return ultrametric_spread(tree) <= tolerance; }

void validate_ultrametric(const Phylogeny& tree, double tolerance) {
  if (!is_ultrametric(tree, tolerance)) throw ValidationError("tree is not ultrametric");
}

namespace {

auto uniform_in(std::mt19937_64& rng) {
  return [&rng](double a, double b) { return a >= b ? a : std::uniform_real_distribution<double>(a, b)(rng); };
}

// Halving shape; every leaf at the same depth, so any heights with edges in
// [f, g] work level by level.
Phylogeny balanced_ultrametric(std::size_t n, double f, double g, std::mt19937_64& rng) {
  auto uniform = uniform_in(rng);
  std::vector<NodeId> parents{kNoNode};
  std::vector<std::size_t> sizes{n};
  std::vector<int> depth{0};
  for (std::size_t v = 0; v < parents.size(); ++v) {
    if (sizes[v] == 1) continue;
    for (std::size_t part : {sizes[v] / 2, sizes[v] - sizes[v] / 2}) {
      parents.push_back(static_cast<NodeId>(v));
      sizes.push_back(part);
      depth.push_back(depth[v] + 1);
    }
  }
  const std::size_t m = parents.size();
  int max_depth = 0;
  for (std::size_t v = 0; v < m; ++v)
    if (sizes[v] == 1) max_depth = std::max(max_depth, depth[v]);
  for (std::size_t v = 0; v < m; ++v)
    if (sizes[v] == 1 && depth[v] != max_depth)
      throw ValidationError("random_ultrametric: balanced shape needs n a power of two");
  std::vector<double> height(m, 0.0);
  height[0] = uniform(max_depth * f, max_depth * g);
  for (std::size_t v = 1; v < m; ++v) {
    if (sizes[v] == 1) continue;
    const double h = height[static_cast<std::size_t>(parents[v])];
    const int below = max_depth - depth[v];
    height[v] = uniform(std::max(below * f, h - g), std::min(below * g, h - f));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> labels(m, -1);
  std::size_t next = 0;
  for (std::size_t v = 0; v < m; ++v)
    if (sizes[v] == 1) labels[v] = perm[next++];
  return ultrametric_from_heights(parents, labels, height);
}

}  // namespace

Phylogeny random_ultrametric(std::size_t n, double f, double g, std::mt19937_64& rng, bool balanced) {
  if (n == 0) throw ValidationError("random_ultrametric: n must be >= 1");
  if (!(f > 0.0) || g < f) throw ValidationError("random_ultrametric: need 0 < f <= g");
  if (balanced) return balanced_ultrametric(n, f, g, rng);
  auto uniform = uniform_in(rng);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Leaves are nodes 0..n-1; each merge appends a parent.
    std::vector<NodeId> parents(n, kNoNode);
    std::vector<double> height(n, 0.0);
    std::vector<NodeId> active(n);
    std::iota(active.begin(), active.end(), 0);
    bool stuck = false;
    while (active.size() > 1) {
      const auto lowest = std::min_element(active.begin(), active.end(), [&](NodeId a, NodeId b) {
        return height[a] < height[b] || (height[a] == height[b] && a < b);
      });
      const NodeId a = *lowest;
      active.erase(lowest);
      std::vector<std::size_t> partners;
      for (std::size_t i = 0; i < active.size(); ++i)
        if (height[active[i]] <= height[a] + (g - f) + 1e-12) partners.push_back(i);
      if (partners.empty()) {
        stuck = true;
        break;
      }
      const std::size_t pick = partners[std::uniform_int_distribution<std::size_t>(0, partners.size() - 1)(rng)];
      const NodeId b = active[pick];
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
      const auto parent = static_cast<NodeId>(parents.size());
      parents.push_back(kNoNode);
      height.push_back(uniform(height[b] + f, height[a] + g));
      parents[a] = parent;
      parents[b] = parent;
      active.push_back(parent);
    }
    if (stuck) continue;
    std::vector<int> labels(parents.size(), -1);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t v = 0; v < n; ++v) labels[v] = perm[v];
    return ultrametric_from_heights(parents, labels, height);
  }
  throw ValidationError("random_ultrametric: no feasible tree found");
}

}  // namespace kslog
