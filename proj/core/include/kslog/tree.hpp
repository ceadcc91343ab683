#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kslog/matrix.hpp"

namespace kslog {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

// Rooted, edge-weighted, leaf-labeled full binary tree.
//
// Every internal node has exactly two children (degree 3, except the root
// which has degree 2). Leaf labels are a bijection with {0, ..., n-1}. The
// length stored at node v is the length of the edge joining v to its parent;
// the root carries no edge. A single-node tree (the root is leaf 0) is
// allowed as a degenerate case.
//
// Immutable after construction.
class Phylogeny {
 public:
  // parents[v] is the parent of v or kNoNode for the root; lengths[v] is the
  // length of the edge above v (ignored at the root); labels[v] is the leaf
  // label of v or -1 for internal nodes. Throws ValidationError.
  Phylogeny(std::vector<NodeId> parents, std::vector<double> lengths, std::vector<int> labels);

  // Complete binary tree of height h in heap order: root 0, children of v are
  // 2v+1 and 2v+2, leaves labeled 0..2^h-1 from left to right.
  static Phylogeny homogeneous(int h, const std::function<double(NodeId)>& length);
  static Phylogeny homogeneous(int h, double length);

  std::size_t num_nodes() const { return parent_.size(); }
  std::size_t num_leaves() const { return leaf_node_.size(); }
  NodeId root() const { return root_; }

  NodeId parent(NodeId v) const { return parent_[v]; }
  std::span<const NodeId> children(NodeId v) const { return children_[v]; }
  bool is_leaf(NodeId v) const { return children_[v].empty(); }
  double length(NodeId v) const { return length_[v]; }
  int label(NodeId v) const { return label_[v]; }
  NodeId leaf(int label) const { return leaf_node_[label]; }
  int depth(NodeId v) const { return depth_[v]; }
  // Sum of edge lengths from the root down to v.
  double root_distance(NodeId v) const { return root_distance_[v]; }

  std::span<const NodeId> preorder() const { return preorder_; }
  std::vector<NodeId> postorder() const;

  // Leaf labels below v, sorted ascending.
  std::vector<int> leaves_below(NodeId v) const;
  // Nodes below v (v included) in preorder.
  std::vector<NodeId> subtree_nodes(NodeId v) const;
  // Nodes at topological depth d from the root, in id order.
  std::vector<NodeId> nodes_at_depth(int d) const;
  int height() const;

  bool is_ancestor(NodeId ancestor, NodeId v) const;
  NodeId lca(NodeId u, NodeId v) const;
  double distance(NodeId u, NodeId v) const;

  // Replaces all edge lengths (validated again).
  Phylogeny with_lengths(std::vector<double> lengths) const;

  // Throws ValidationError unless every edge length is an integer multiple of
  // delta (to within 1e-9 of the grid) inside [f, g].
  void check_delta_branch_model(double delta, double f, double g) const;

  std::span<const NodeId> parents() const { return parent_; }
  std::span<const double> lengths() const { return length_; }
  std::span<const int> labels() const { return label_; }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<double> length_;
  std::vector<int> label_;
  std::vector<NodeId> leaf_node_;
  std::vector<NodeId> preorder_;
  std::vector<int> depth_;
  std::vector<double> root_distance_;
  NodeId root_ = kNoNode;
};

// Pairwise path lengths over all vertex pairs, indexed by NodeId.
Matrix vertex_distances(const Phylogeny& tree);

// Pairwise path lengths between leaves, indexed by leaf label.
Matrix leaf_distances(const Phylogeny& tree);

}  // namespace kslog
