#include "kslog/subtree.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "kslog/errors.hpp"

namespace kslog {

std::size_t RestrictedTree::degree(NodeId v) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [v](const auto& e) {
    return e.first == v || e.second == v;
  }));
}

bool RestrictedTree::contains(NodeId v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::vector<NodeId> RestrictedTree::span_vertices(const Phylogeny& tree) const {
  std::vector<NodeId> out;
  for (NodeId v : span_edges) {
    out.push_back(v);
    out.push_back(tree.parent(v));
  }
  if (out.empty()) out = vertices;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RestrictedTree restrict_to(const Phylogeny& tree, std::span<const NodeId> keep) {
  if (keep.empty()) throw ValidationError("restrict_to: empty vertex set");
  const std::size_t n = tree.num_nodes();
  std::vector<char> in_keep(n, 0);
  for (NodeId v : keep) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) throw ValidationError("restrict_to: invalid vertex id");
    in_keep[v] = 1;
  }
  std::size_t total = 0;
  for (char c : in_keep) total += static_cast<std::size_t>(c);

  // Edge above v is on some path between kept vertices iff the subtree below
  // v holds some but not all of them.
  std::vector<std::size_t> below(n, 0);
  for (NodeId v : tree.postorder()) {
    below[v] += static_cast<std::size_t>(in_keep[v]);
    if (tree.parent(v) != kNoNode) below[tree.parent(v)] += below[v];
  }
  RestrictedTree out;
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (tree.parent(static_cast<NodeId>(v)) == kNoNode) continue;
    if (below[v] > 0 && below[v] < total) {
      out.span_edges.push_back(static_cast<NodeId>(v));
      adj[v].push_back(tree.parent(static_cast<NodeId>(v)));
      adj[tree.parent(static_cast<NodeId>(v))].push_back(static_cast<NodeId>(v));
    }
  }
  std::vector<char> kept(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (in_keep[v] || (!adj[v].empty() && adj[v].size() != 2)) kept[v] = 1;
  for (std::size_t v = 0; v < n; ++v)
    if (kept[v]) out.vertices.push_back(static_cast<NodeId>(v));

  // Contract: walk from each kept vertex along span edges until the next kept vertex.
  for (NodeId start : out.vertices) {
    for (NodeId first : adj[start]) {
      NodeId prev = start;
      NodeId cur = first;
      while (!kept[cur]) {
        const NodeId next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
      }
      if (start < cur) out.edges.emplace_back(start, cur);
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

bool edge_disjoint(const RestrictedTree& t1, const RestrictedTree& t2) {
  auto i = t1.span_edges.begin();
  auto j = t2.span_edges.begin();
  while (i != t1.span_edges.end() && j != t2.span_edges.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

RestrictedTree restrict_rooted(const Phylogeny& tree, const RootedSubtree& sub) {
  std::vector<NodeId> keep;
  keep.reserve(sub.leaves.size() + 1);
  for (int lab : sub.leaves) {
    if (lab < 0 || static_cast<std::size_t>(lab) >= tree.num_leaves())
      throw ValidationError("rooted subtree: invalid leaf label");
    keep.push_back(tree.leaf(lab));
  }
  keep.push_back(sub.root);
  return restrict_to(tree, keep);
}

bool is_legal(const Phylogeny& tree, const RootedSubtree& sub) {
  const RestrictedTree r = restrict_rooted(tree, sub);
  if (r.vertices.size() == 1) return tree.is_leaf(sub.root);
  if (r.degree(sub.root) != 2) return false;
  for (NodeId v : r.vertices) {
    if (v == sub.root) continue;
    const std::size_t d = r.degree(v);
    if (d == 1) {
      if (!tree.is_leaf(v)) return false;
    } else if (d != 3) {
      return false;
    }
  }
  // Every degree-1 vertex must be one of the listed leaves.
  for (NodeId v : r.vertices)
    if (v != sub.root && r.degree(v) == 1 &&
        !std::binary_search(sub.leaves.begin(), sub.leaves.end(), tree.label(v)))
      return false;
  return true;
}

namespace {

// Hop distances between all vertex pairs of T viewed as an unrooted graph.
std::vector<std::vector<int>> hop_distances(const Phylogeny& tree) {
  const std::size_t n = tree.num_nodes();
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    const NodeId p = tree.parent(static_cast<NodeId>(v));
    if (p == kNoNode) continue;
    adj[v].push_back(p);
    adj[p].push_back(static_cast<NodeId>(v));
  }
  std::vector<std::vector<int>> hops(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<NodeId> queue{static_cast<NodeId>(s)};
    hops[s][s] = 0;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (NodeId w : adj[u])
        if (hops[s][w] < 0) {
          hops[s][w] = hops[s][u] + 1;
          queue.push_back(w);
        }
    }
  }
  return hops;
}

// Vertex of span closest to a root placed at (a, b): a vertex when a == b,
// otherwise the interior of the edge {a, b}.
NodeId projection(const std::vector<std::vector<int>>& hops, NodeId a, NodeId b,
                  const std::vector<NodeId>& span) {
  NodeId best = kNoNode;
  int best_hops = std::numeric_limits<int>::max();
  for (NodeId s : span) {
    const int h = std::min(hops[a][s], hops[b][s]);
    if (h < best_hops) {
      best_hops = h;
      best = s;
    }
  }
  return best;
}

}  // namespace

bool dangling(const Phylogeny& tree, const RootedSubtree& t1, const RootedSubtree& t2) {
  const RestrictedTree r1 = restrict_rooted(tree, t1);
  const RestrictedTree r2 = restrict_rooted(tree, t2);
  if (!edge_disjoint(r1, r2)) return false;
  const std::vector<NodeId> s1 = r1.span_vertices(tree);
  const std::vector<NodeId> s2 = r2.span_vertices(tree);
  const auto in = [](const std::vector<NodeId>& s, NodeId v) {
    return std::binary_search(s.begin(), s.end(), v);
  };
  const auto hops = hop_distances(tree);
  const auto consistent = [&](NodeId a, NodeId b) {
    return projection(hops, a, b, s1) == t1.root && projection(hops, a, b, s2) == t2.root;
  };
  // Candidate roots lie on the path joining the two subtree roots.
  const auto on_path = [&](NodeId u) {
    return hops[t1.root][u] + hops[u][t2.root] == hops[t1.root][t2.root];
  };
  for (std::size_t v = 0; v < tree.num_nodes(); ++v) {
    const auto u = static_cast<NodeId>(v);
    if (!on_path(u)) continue;
    if (!in(s1, u) && !in(s2, u) && consistent(u, u)) return true;
    const NodeId p = tree.parent(u);
    if (p == kNoNode || !on_path(p)) continue;
    const bool edge_used = std::binary_search(r1.span_edges.begin(), r1.span_edges.end(), u) ||
                           std::binary_search(r2.span_edges.begin(), r2.span_edges.end(), u);
    if (!edge_used && consistent(u, p)) return true;
  }
  return false;
}

}  // namespace kslog
