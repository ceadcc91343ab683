#include "kslog/tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kslog/errors.hpp"

namespace kslog {

namespace {

std::string node_str(NodeId v) { return "node " + std::to_string(v); }

}  // namespace

Phylogeny::Phylogeny(std::vector<NodeId> parents, std::vector<double> lengths,
                     std::vector<int> labels)
    : parent_(std::move(parents)), length_(std::move(lengths)), label_(std::move(labels)) {
  const std::size_t n_nodes = parent_.size();
  if (n_nodes == 0) throw ValidationError("Phylogeny: empty tree");
  if (length_.size() != n_nodes || label_.size() != n_nodes)
    throw ValidationError("Phylogeny: parents/lengths/labels size mismatch");

  children_.assign(n_nodes, {});
  for (std::size_t v = 0; v < n_nodes; ++v) {
    const NodeId p = parent_[v];
    if (p == kNoNode) {
      if (root_ != kNoNode) throw ValidationError("Phylogeny: more than one root");
      root_ = static_cast<NodeId>(v);
      continue;
    }
    if (p < 0 || static_cast<std::size_t>(p) >= n_nodes || p == static_cast<NodeId>(v))
      throw ValidationError("Phylogeny: invalid parent for " + node_str(static_cast<NodeId>(v)));
    children_[p].push_back(static_cast<NodeId>(v));
  }
  if (root_ == kNoNode) throw ValidationError("Phylogeny: no root");

  // Preorder walk from the root; detects cycles / unreachable nodes.
  depth_.assign(n_nodes, 0);
  root_distance_.assign(n_nodes, 0.0);
  preorder_.reserve(n_nodes);
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    preorder_.push_back(v);
    for (auto it = children_[v].rbegin(); it != children_[v].rend(); ++it) {
      depth_[*it] = depth_[v] + 1;
      root_distance_[*it] = root_distance_[v] + length_[*it];
      stack.push_back(*it);
    }
  }
  if (preorder_.size() != n_nodes) throw ValidationError("Phylogeny: not connected (cycle or orphan)");

  std::size_t n_leaves = 0;
  for (std::size_t v = 0; v < n_nodes; ++v) {
    const auto kids = children_[v].size();
    if (kids == 0) {
      ++n_leaves;
    } else if (kids != 2) {
      throw ValidationError("Phylogeny: " + node_str(static_cast<NodeId>(v)) + " has " +
                            std::to_string(kids) + " children; trees must be binary");
    }
  }
  leaf_node_.assign(n_leaves, kNoNode);
  for (std::size_t v = 0; v < n_nodes; ++v) {
    const bool leaf = children_[v].empty();
    const int lab = label_[v];
    if (!leaf) {
      if (lab != -1) throw ValidationError("Phylogeny: internal " + node_str(static_cast<NodeId>(v)) + " has a label");
      continue;
    }
    if (lab < 0 || static_cast<std::size_t>(lab) >= n_leaves)
      throw ValidationError("Phylogeny: leaf labels must be 0..n-1");
    if (leaf_node_[lab] != kNoNode) throw ValidationError("Phylogeny: duplicate leaf label " + std::to_string(lab));
    leaf_node_[lab] = static_cast<NodeId>(v);
  }
  for (std::size_t v = 0; v < n_nodes; ++v) {
    if (static_cast<NodeId>(v) == root_) continue;
    if (!std::isfinite(length_[v]) || length_[v] <= 0.0)
      throw ValidationError("Phylogeny: edge above " + node_str(static_cast<NodeId>(v)) +
                            " must have positive finite length");
  }
}

Phylogeny Phylogeny::homogeneous(int h, const std::function<double(NodeId)>& length) {
  if (h < 0 || h > 24) throw ValidationError("Phylogeny::homogeneous: height out of range");
  const std::size_t n_nodes = (std::size_t{1} << (h + 1)) - 1;
  const std::size_t first_leaf = (std::size_t{1} << h) - 1;
  std::vector<NodeId> parents(n_nodes, kNoNode);
  std::vector<double> lengths(n_nodes, 0.0);
  std::vector<int> labels(n_nodes, -1);
  for (std::size_t v = 1; v < n_nodes; ++v) {
    parents[v] = static_cast<NodeId>((v - 1) / 2);
    lengths[v] = length(static_cast<NodeId>(v));
  }
  for (std::size_t v = first_leaf; v < n_nodes; ++v) labels[v] = static_cast<int>(v - first_leaf);
  return Phylogeny(std::move(parents), std::move(lengths), std::move(labels));
}

Phylogeny Phylogeny::homogeneous(int h, double length) {
  return homogeneous(h, [length](NodeId) { return length; });
}

std::vector<NodeId> Phylogeny::postorder() const {
  std::vector<NodeId> order(preorder_.rbegin(), preorder_.rend());
  return order;
}

std::vector<int> Phylogeny::leaves_below(NodeId v) const {
  std::vector<int> out;
  for (NodeId u : subtree_nodes(v))
    if (is_leaf(u)) out.push_back(label_[u]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> Phylogeny::subtree_nodes(NodeId v) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (auto it = children_[u].rbegin(); it != children_[u].rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<NodeId> Phylogeny::nodes_at_depth(int d) const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < num_nodes(); ++v)
    if (depth_[v] == d) out.push_back(static_cast<NodeId>(v));
  return out;
}

int Phylogeny::height() const { return *std::max_element(depth_.begin(), depth_.end()); }

bool Phylogeny::is_ancestor(NodeId ancestor, NodeId v) const {
  while (v != kNoNode && depth_[v] > depth_[ancestor]) v = parent_[v];
  return v == ancestor;
}

NodeId Phylogeny::lca(NodeId u, NodeId v) const {
  while (depth_[u] > depth_[v]) u = parent_[u];
  while (depth_[v] > depth_[u]) v = parent_[v];
  while (u != v) {
    u = parent_[u];
    v = parent_[v];
  }
  return u;
}

double Phylogeny::distance(NodeId u, NodeId v) const {
  const NodeId m = lca(u, v);
  return (root_distance_[u] - root_distance_[m]) + (root_distance_[v] - root_distance_[m]);
}

Phylogeny Phylogeny::with_lengths(std::vector<double> lengths) const {
  return Phylogeny(parent_, std::move(lengths), label_);
}

void Phylogeny::check_delta_branch_model(double delta, double f, double g) const {
  if (!(delta > 0.0) || f < delta - 1e-12 || g < f)
    throw ValidationError("Delta-branch model requires 0 < delta <= f <= g");
  for (std::size_t v = 0; v < num_nodes(); ++v) {
    if (static_cast<NodeId>(v) == root_) continue;
    const double t = length_[v];
    const double m = std::round(t / delta);
    if (std::abs(t - m * delta) > 1e-9)
      throw ValidationError("edge above " + node_str(static_cast<NodeId>(v)) + " is off the delta grid");
    if (t < f - 1e-9 || t > g + 1e-9)
      throw ValidationError("edge above " + node_str(static_cast<NodeId>(v)) + " outside [f, g]");
  }
}

Matrix vertex_distances(const Phylogeny& tree) {
  const std::size_t n = tree.num_nodes();
  Matrix d(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const double x = tree.distance(static_cast<NodeId>(u), static_cast<NodeId>(v));
      d(u, v) = x;
      d(v, u) = x;
    }
  return d;
}

Matrix leaf_distances(const Phylogeny& tree) {
  const std::size_t n = tree.num_leaves();
  Matrix d(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double x = tree.distance(tree.leaf(static_cast<int>(a)), tree.leaf(static_cast<int>(b)));
      d(a, b) = x;
      d(b, a) = x;
    }
  return d;
}

}  // namespace kslog
