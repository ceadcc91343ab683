#pragma once

#include <span>
#include <utility>
#include <vector>

#include "kslog/tree.hpp"

namespace kslog {

// T|_{V'}: keep the vertices and edges on paths between members of V', then
// contract every path through degree-2 vertices that are not in V'.
struct RestrictedTree {
  std::vector<NodeId> vertices;                     // kept vertices of T, ascending
  std::vector<std::pair<NodeId, NodeId>> edges;     // contracted edges, endpoints in T ids
  std::vector<NodeId> span_edges;                   // T edges covered, by lower endpoint, ascending

  std::size_t degree(NodeId v) const;
  bool contains(NodeId v) const;
  // T vertices touched by the span (endpoints of covered edges, or the single
  // kept vertex when the span has no edges).
  std::vector<NodeId> span_vertices(const Phylogeny& tree) const;
};

// Throws ValidationError if keep is empty or contains an invalid id.
RestrictedTree restrict_to(const Phylogeny& tree, std::span<const NodeId> keep);

// True iff no T edge lies on a leaf-to-leaf path of both subtrees.
bool edge_disjoint(const RestrictedTree& t1, const RestrictedTree& t2);

// A rooted subtree of T described by its root vertex and its leaf labels.
struct RootedSubtree {
  NodeId root = kNoNode;
  std::vector<int> leaves;
};

RestrictedTree restrict_rooted(const Phylogeny& tree, const RootedSubtree& sub);

// T|_{leaves + root} is a rooted full binary tree at root.
bool is_legal(const Phylogeny& tree, const RootedSubtree& sub);

// True iff t1, t2 are edge-disjoint and some placement of the root of T on
// the path between them, outside both subtrees, is consistent with both
// rootings. Candidate positions are the vertices and edge interiors of that
// path. Off-path placements are excluded: they also accept a subtree hanging
// below a child of the other, where the path between the two does not leave
// through the roots.
bool dangling(const Phylogeny& tree, const RootedSubtree& t1, const RootedSubtree& t2);

}  // namespace kslog
