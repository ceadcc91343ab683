#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kslog/tree.hpp"

namespace kslog {

// Bipartition of the leaf set, stored as a bitset over leaf labels and
// normalized so that leaf 0 is on the unset side.
using Split = std::vector<std::uint64_t>;

// Unrooted leaf-labeled tree without edge lengths. Leaves are nodes
// 0..n-1 (node id = leaf label), internal nodes are n, n+1, ...; every
// internal node has degree exactly 3.
class UnrootedTopology {
 public:
  UnrootedTopology() = default;
  // Throws ValidationError unless the edges form a tree with the degree
  // constraints above.
  UnrootedTopology(std::size_t num_leaves, std::vector<std::pair<int, int>> edges);

  // Rooted tree given as parent array (kNoNode at the root) and leaf labels
  // (-1 for internal nodes); the degree-2 root is suppressed by joining its
  // two incident edges. Internal nodes must have two children.
  static UnrootedTopology from_rooted(std::span<const NodeId> parents, std::span<const int> labels);
  // T_-[T]: the phylogeny with its root removed.
  static UnrootedTopology from_phylogeny(const Phylogeny& tree);

  std::size_t num_leaves() const { return num_leaves_; }
  std::size_t num_nodes() const { return adjacency_.size(); }
  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  std::span<const std::pair<int, int>> edges() const { return edges_; }

  // Nontrivial splits (both sides have at least two leaves), sorted.
  std::vector<Split> splits() const;

  // Canonical Newick: rooted at the internal neighbor of leaf 0, children
  // ordered by smallest descendant leaf label, no branch lengths.
  std::string to_newick() const;

  friend bool operator==(const UnrootedTopology& a, const UnrootedTopology& b);

 private:
  std::size_t num_leaves_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
};

// Split containing exactly the given leaf labels (normalized).
Split make_split(std::span<const int> leaves, std::size_t num_leaves);

// Symmetric difference of nontrivial split sets. Throws ValidationError when
// the leaf sets differ.
int rf_distance(const UnrootedTopology& a, const UnrootedTopology& b);

}  // namespace kslog
