#include "kslog/topology.hpp"

#include <algorithm>
#include <functional>
#include <iterator>

#include "kslog/errors.hpp"

namespace kslog {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void set_bit(Split& s, int i) { s[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64); }
bool get_bit(const Split& s, int i) { return (s[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1U; }

void normalize(Split& s, std::size_t n) {
  if (!get_bit(s, 0)) return;
  for (auto& w : s) w = ~w;
  const std::size_t tail = n % 64;
  if (tail != 0) s.back() &= (std::uint64_t{1} << tail) - 1;
}

std::size_t popcount(const Split& s) {
  std::size_t c = 0;
  for (auto w : s) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

}  // namespace

Split make_split(std::span<const int> leaves, std::size_t num_leaves) {
  Split s(words_for(num_leaves), 0);
  for (int l : leaves) set_bit(s, l);
  normalize(s, num_leaves);
  return s;
}

UnrootedTopology::UnrootedTopology(std::size_t num_leaves, std::vector<std::pair<int, int>> edges)
    : num_leaves_(num_leaves), edges_(std::move(edges)) {
  if (num_leaves_ == 0) throw ValidationError("UnrootedTopology: no leaves");
  int max_id = static_cast<int>(num_leaves_) - 1;
  for (auto [a, b] : edges_) {
    if (a < 0 || b < 0 || a == b) throw ValidationError("UnrootedTopology: invalid edge");
    max_id = std::max({max_id, a, b});
  }
  const auto n_nodes = static_cast<std::size_t>(max_id) + 1;
  if (edges_.size() + 1 != n_nodes) throw ValidationError("UnrootedTopology: edge count is not nodes-1");
  adjacency_.assign(n_nodes, {});
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
  for (std::size_t v = 0; v < n_nodes; ++v) {
    const std::size_t d = adjacency_[v].size();
    if (v < num_leaves_) {
      if (num_leaves_ > 1 && d != 1) throw ValidationError("UnrootedTopology: leaf with degree != 1");
    } else if (d != 3) {
      throw ValidationError("UnrootedTopology: internal node with degree != 3");
    }
  }
  // Connectivity.
  std::vector<char> seen(n_nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w : adjacency_[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != n_nodes) throw ValidationError("UnrootedTopology: not connected");
}

UnrootedTopology UnrootedTopology::from_rooted(std::span<const NodeId> parents, std::span<const int> labels) {
  const std::size_t n_nodes = parents.size();
  std::size_t n_leaves = 0;
  for (int lab : labels) n_leaves += lab >= 0 ? 1 : 0;
  NodeId root = kNoNode;
  std::vector<std::vector<NodeId>> children(n_nodes);
  for (std::size_t v = 0; v < n_nodes; ++v) {
    if (parents[v] == kNoNode) root = static_cast<NodeId>(v);
    else children[parents[v]].push_back(static_cast<NodeId>(v));
  }
  if (root == kNoNode) throw ValidationError("from_rooted: no root");
  // Map internal nodes to ids n, n+1, ...; the root is dropped when it has
  // two children.
  std::vector<int> id(n_nodes, -1);
  int next = static_cast<int>(n_leaves);
  for (std::size_t v = 0; v < n_nodes; ++v) {
    if (labels[v] >= 0) id[v] = labels[v];
    else if (static_cast<NodeId>(v) != root || children[v].size() != 2) id[v] = next++;
  }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t v = 0; v < n_nodes; ++v) {
    const NodeId p = parents[v];
    if (p == kNoNode || p == root) continue;
    edges.emplace_back(id[p], id[v]);
  }
  if (id[root] < 0) {
    const auto& kids = children[root];
    edges.emplace_back(id[kids[0]], id[kids[1]]);
  } else {
    for (NodeId c : children[root]) edges.emplace_back(id[root], id[c]);
  }
  return UnrootedTopology(n_leaves, std::move(edges));
}

UnrootedTopology UnrootedTopology::from_phylogeny(const Phylogeny& tree) {
  return from_rooted(tree.parents(), tree.labels());
}

std::vector<Split> UnrootedTopology::splits() const {
  std::vector<Split> out;
  if (num_leaves_ < 4) return out;
  // Root at leaf 0; each edge (parent -> child) yields the leaves below child.
  const std::size_t n_nodes = adjacency_.size();
  std::vector<int> parent(n_nodes, -1);
  std::vector<int> order;
  order.reserve(n_nodes);
  std::vector<int> stack{0};
  parent[0] = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (int w : adjacency_[u])
      if (w != parent[u]) {
        parent[w] = u;
        stack.push_back(w);
      }
  }
  const std::size_t words = words_for(num_leaves_);
  std::vector<Split> below(n_nodes, Split(words, 0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    if (static_cast<std::size_t>(u) < num_leaves_ && u != 0) set_bit(below[u], u);
    if (u != 0) {
      for (std::size_t w = 0; w < words; ++w) below[parent[u]][w] |= below[u][w];
      const std::size_t size = popcount(below[u]);
      if (size >= 2 && size <= num_leaves_ - 2) out.push_back(below[u]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string UnrootedTopology::to_newick() const {
  if (num_leaves_ == 1) return "(0);";
  if (num_leaves_ == 2) return "(0,1);";
  const int center = adjacency_[0][0];
  std::vector<int> min_label(adjacency_.size(), 0);
  std::function<int(int, int)> compute_min = [&](int u, int from) {
    int m = static_cast<std::size_t>(u) < num_leaves_ ? u : static_cast<int>(num_leaves_);
    for (int w : adjacency_[u])
      if (w != from) m = std::min(m, compute_min(w, u));
    min_label[u] = m;
    return m;
  };
  compute_min(center, -1);
  std::function<void(int, int, std::string&)> emit = [&](int u, int from, std::string& out) {
    if (static_cast<std::size_t>(u) < num_leaves_) {
      out += std::to_string(u);
      return;
    }
    std::vector<int> kids;
    for (int w : adjacency_[u])
      if (w != from) kids.push_back(w);
    std::sort(kids.begin(), kids.end(), [&](int x, int y) { return min_label[x] < min_label[y]; });
    out += '(';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ',';
      emit(kids[i], u, out);
    }
    out += ')';
  };
  std::string out;
  emit(center, -1, out);
  out += ';';
  return out;
}

bool operator==(const UnrootedTopology& a, const UnrootedTopology& b) {
  return a.num_leaves_ == b.num_leaves_ && a.splits() == b.splits();
}

int rf_distance(const UnrootedTopology& a, const UnrootedTopology& b) {
  if (a.num_leaves() != b.num_leaves())
    throw ValidationError("rf_distance: topologies have different leaf sets");
  const auto sa = a.splits();
  const auto sb = b.splits();
  std::vector<Split> diff;
  std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(diff));
  return static_cast<int>(diff.size());
}

}  // namespace kslog
