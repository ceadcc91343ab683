#include "kslog/oracle_setup.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "kslog/errors.hpp"

namespace kslog {

namespace {

std::map<NodeId, std::vector<NodeId>> adjacency(const RestrictedTree& r) {
  std::map<NodeId, std::vector<NodeId>> adj;
  for (NodeId v : r.vertices) adj[v];
  for (auto [a, b] : r.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

}  // namespace

Clade clade_from_tree(const Phylogeny& tree, const RestrictedTree& restricted, NodeId top, NodeId parent_in_restricted) {
  const auto adj = adjacency(restricted);
  Clade c;
  c.min_label = std::numeric_limits<int>::max();
  // (vertex, came_from, hops)
  std::vector<std::tuple<NodeId, NodeId, int>> stack{{top, parent_in_restricted, 0}};
  while (!stack.empty()) {
    auto [v, from, hops] = stack.back();
    stack.pop_back();
    bool below = false;
    for (NodeId w : adj.at(v)) {
      if (w == from) continue;
      below = true;
      stack.emplace_back(w, v, hops + 1);
    }
    if (!below) {
      if (!tree.is_leaf(v)) throw ValidationError("clade_from_tree: restricted tree ends at an internal vertex");
      c.leaves.push_back(tree.label(v));
      c.theta.push_back(std::exp(-tree.distance(top, v)));
      c.weight.push_back(std::ldexp(1.0, -hops));
      c.min_label = std::min(c.min_label, tree.label(v));
    }
  }
  return c;
}

SubtreeHandle handle_from_tree(const Phylogeny& tree, const RootedSubtree& sub, double delta) {
  if (!is_legal(tree, sub)) throw ValidationError("handle_from_tree: subtree is not legal");
  const RestrictedTree r = restrict_rooted(tree, sub);
  SubtreeHandle h;
  h.root = clade_from_tree(tree, r, sub.root, kNoNode);
  if (sub.leaves.size() == 1) {
    h.y = h.root;
    h.z = h.root;
    return h;
  }
  const auto adj = adjacency(r);
  const auto& kids = adj.at(sub.root);
  if (kids.size() != 2) throw ValidationError("handle_from_tree: root must have two children");
  Clade a = clade_from_tree(tree, r, kids[0], sub.root);
  Clade b = clade_from_tree(tree, r, kids[1], sub.root);
  std::int64_t la = grid_index(tree.distance(sub.root, kids[0]), delta);
  std::int64_t lb = grid_index(tree.distance(sub.root, kids[1]), delta);
  if (b.min_label < a.min_label) {
    std::swap(a, b);
    std::swap(la, lb);
  }
  h.y = std::move(a);
  h.z = std::move(b);
  h.y_length = la;
  h.z_length = lb;
  return h;
}

}  // namespace kslog
