#include "kslog/general_recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>

#include "kslog/errors.hpp"
#include "kslog/parallel.hpp"
#include "kslog/quartet.hpp"

namespace kslog {

SubtreeHandle SubtreeHandle::leaf(int label) {
  SubtreeHandle h;
  h.root = Clade::leaf(label);
  h.y = h.root;
  h.z = h.root;
  return h;
}

SubtreeHandle SubtreeHandle::join(const SubtreeHandle& a, std::int64_t len_a, const SubtreeHandle& b,
                                  std::int64_t len_b, double delta) {
  SubtreeHandle h;
  h.root = Clade::join(a.root, std::exp(-static_cast<double>(len_a) * delta), b.root,
                       std::exp(-static_cast<double>(len_b) * delta));
  h.y = a.root;
  h.z = b.root;
  h.y_length = len_a;
  h.z_length = len_b;
  return h;
}

DistortedOracle table_oracle(const DistanceTable& table, const DeepParams& params) {
  auto shared = std::make_shared<const DistanceTable>(table);
  return [shared, params](const Clade& a, const Clade& b) { return distorted_metric(*shared, a, b, params); };
}

DistortedValue distorted_metric_routine(const SubtreeHandle& t1, const SubtreeHandle& t2, const DistortedOracle& dbar,
                                        double delta) {
  {
    std::unordered_set<int> seen(t1.root.leaves.begin(), t1.root.leaves.end());
    for (int lab : t2.root.leaves)
      if (seen.count(lab)) throw ValidationError("distorted_metric_routine: subtrees share leaf " + std::to_string(lab));
  }
  const Clade* side1[2] = {&t1.y, &t1.z};
  const Clade* side2[2] = {&t2.y, &t2.z};
  const std::int64_t len1[2] = {t1.y_length, t1.z_length};
  const std::int64_t len2[2] = {t2.y_length, t2.z_length};
  std::int64_t agreed = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const DistortedValue d = dbar(*side1[i], *side2[j]);
      if (!d.finite()) return DistortedValue::infinite(delta);
      const std::int64_t v = *d.index - len1[i] - len2[j];
      if (i == 0 && j == 0) agreed = v;
      else if (v != agreed) return DistortedValue::infinite(delta);
    }
  if (agreed < 0) return DistortedValue::infinite(delta);
  return DistortedValue::at(agreed, delta);
}

namespace {

struct Root {
  SubtreeHandle handle;
  NodeId node;
  int id;
  int height = 0;
};

std::string shape_newick(const ShapeBuilder& shape, NodeId v) {
  std::vector<NodeId> kids;
  for (std::size_t u = 0; u < shape.size(); ++u)
    if (shape.parents()[u] == v) kids.push_back(static_cast<NodeId>(u));
  if (kids.empty()) return std::to_string(shape.labels()[v]);
  std::string out = "(";
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += ',';
    out += shape_newick(shape, kids[i]);
  }
  return out + ")";
}

}  // namespace

ReconstructionResult forest_reconstruct(const DistanceTable& table, const DeepParams& params) {
  params.validate();
  const std::size_t n = table.num_leaves();
  if (n == 0) throw ValidationError("forest reconstruction needs at least one leaf");
  const double delta = params.delta;
  const DistortedOracle dbar = table_oracle(table, params);

  ShapeBuilder shape;
  std::vector<Root> roots;
  int next_id = 0;
  for (std::size_t a = 0; a < n; ++a)
    roots.push_back({SubtreeHandle::leaf(static_cast<int>(a)), shape.add_leaf(static_cast<int>(a)), next_id++});

  nlohmann::json diagnostics = {{"algorithm", "forest"}, {"merges", nlohmann::json::array()}};
  std::size_t clamped = 0;
  std::map<std::pair<int, int>, DistortedValue> cache;
  auto cache_key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };

  auto fail = [&](const std::string& why) {
    nlohmann::json forest = nlohmann::json::array();
    for (const Root& r : roots) forest.push_back(shape_newick(shape, r.node) + ";");
    nlohmann::json grid = nlohmann::json::array();
    for (const Root& r : roots) {
      nlohmann::json row = nlohmann::json::array();
      for (const Root& q : roots) {
        const auto it = cache.find(cache_key(r.id, q.id));
        if (r.id == q.id || it == cache.end() || !it->second.finite()) row.push_back(nullptr);
        else row.push_back(*it->second.index);
      }
      grid.push_back(row);
    }
    diagnostics["root_distances"] = grid;
    diagnostics["status"] = "failed";
    diagnostics["failure"] = why;
    diagnostics["forest"] = forest;
    throw ReconstructionFailure(why, diagnostics);
  };

  while (roots.size() > 3) {
    const std::size_t m = roots.size();
    // Distances between roots; only pairs involving new roots are computed.
    std::vector<std::pair<std::size_t, std::size_t>> todo;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (!cache.count(cache_key(roots[i].id, roots[j].id))) todo.emplace_back(i, j);
    std::vector<DistortedValue> fresh(todo.size());
    parallel_for(todo.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p)
        fresh[p] = distorted_metric_routine(roots[todo[p].first].handle, roots[todo[p].second].handle, dbar, delta);
    });
    for (std::size_t p = 0; p < todo.size(); ++p)
      cache.emplace(cache_key(roots[todo[p].first].id, roots[todo[p].second].id), fresh[p]);
    std::vector<DistortedValue> u(m * m, DistortedValue::at(0, delta));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) u[i * m + j] = u[j * m + i] = cache.at(cache_key(roots[i].id, roots[j].id));
    auto dist = [&](std::size_t i, std::size_t j) -> const DistortedValue& { return u[i * m + j]; };

    std::vector<std::vector<std::size_t>> near(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (dist(i, j).finite()) near[i].push_back(j);
    std::vector<char> supported(m * m, 0), forbidden(m * m, 0);
    auto mark = [&](std::vector<char>& t, std::size_t i, std::size_t j) { t[i * m + j] = t[j * m + i] = 1; };
    for (std::size_t a = 0; a < m; ++a) {
      const auto& na = near[a];
      for (std::size_t ib = 0; ib < na.size(); ++ib)
        for (std::size_t ic = ib + 1; ic < na.size(); ++ic) {
          const std::size_t b = na[ib], c = na[ic];
          if (!dist(b, c).finite()) continue;
          for (std::size_t id = ic + 1; id < na.size(); ++id) {
            const std::size_t d = na[id];
            if (!dist(b, d).finite() || !dist(c, d).finite()) continue;
            const QuartetOutcome q =
                deep_four_point({dist(a, b), dist(a, c), dist(a, d), dist(b, c), dist(b, d), dist(c, d)}, params.f);
            if (q.kind != QuartetKind::split) continue;
            std::size_t s[4];
            if (q.pairing == 0) s[0] = a, s[1] = b, s[2] = c, s[3] = d;
            else if (q.pairing == 1) s[0] = a, s[1] = c, s[2] = b, s[3] = d;
            else s[0] = a, s[1] = d, s[2] = b, s[3] = c;
            mark(supported, s[0], s[1]);
            mark(supported, s[2], s[3]);
            for (int x = 0; x < 2; ++x)
              for (int y = 2; y < 4; ++y) mark(forbidden, s[x], s[y]);
          }
        }
    }

    // Candidates: pairs that are each other's nearest among the roots they
    // share a passing split side with and are never separated from. Order:
    // merged height, then distance, then (min label, min label). One round
    // merges disjoint candidates of the lowest height from this snapshot:
    // sibling cherries are supported together, and merging one first would
    // remove quartet evidence for the other.
    auto key = [&](std::size_t i, std::size_t j) {
      const int li = roots[i].handle.root.min_label, lj = roots[j].handle.root.min_label;
      return std::make_tuple(std::max(roots[i].height, roots[j].height), *dist(i, j).index, std::min(li, lj),
                             std::max(li, lj));
    };
    std::vector<std::size_t> nearest(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j && supported[i * m + j] && !forbidden[i * m + j] &&
            (nearest[i] == m || *dist(i, j).index < *dist(i, nearest[i]).index))
          nearest[i] = j;
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < m; ++i)
      if (nearest[i] != m && nearest[i] > i && nearest[nearest[i]] == i) candidates.emplace_back(i, nearest[i]);
    if (candidates.empty()) fail("no mergeable pair among " + std::to_string(m) + " subtrees");
    std::sort(candidates.begin(), candidates.end(),
              [&](const auto& p, const auto& q) { return key(p.first, p.second) < key(q.first, q.second); });
    const int round_height = std::get<0>(key(candidates[0].first, candidates[0].second));

    auto grid_length = [&](double len) {
      std::int64_t g = grid_index(len, delta);
      if (g < 1) {
        ++clamped;
        g = 1;
      }
      return g;
    };
    std::vector<char> used(m, 0);
    std::vector<Root> merged;
    for (const auto& [bx, by] : candidates) {
      if (std::get<0>(key(bx, by)) != round_height) break;
      if (used[bx] || used[by]) continue;
      // A round never merges the last three roots, which are joined below.
      if (m - merged.size() <= 3) break;
      // Witness: the root nearest to both, ties by smallest leaf label
      // (roots are sorted by it).
      std::size_t w = m;
      std::int64_t w_reach = 0;
      for (std::size_t c = 0; c < m; ++c) {
        if (c == bx || c == by || !dist(bx, c).finite() || !dist(by, c).finite()) continue;
        const std::int64_t reach = *dist(bx, c).index + *dist(by, c).index;
        if (w == m || reach < w_reach) w = c, w_reach = reach;
      }
      if (w == m) fail("no witness for the merge of leaf " + std::to_string(roots[bx].handle.root.min_label));
      const std::int64_t lx = grid_length(three_point_length(dist(bx, by), dist(bx, w), dist(by, w)));
      const std::int64_t ly = grid_length(three_point_length(dist(bx, by), dist(by, w), dist(bx, w)));
      diagnostics["merges"].push_back({{"roots", m},
                                       {"a", roots[bx].handle.root.min_label},
                                       {"b", roots[by].handle.root.min_label},
                                       {"distance", dist(bx, by).value()},
                                       {"witness", roots[w].handle.root.min_label}});
      merged.push_back({SubtreeHandle::join(roots[bx].handle, lx, roots[by].handle, ly, delta),
                        shape.join(roots[bx].node, static_cast<double>(lx) * delta, roots[by].node,
                                   static_cast<double>(ly) * delta),
                        next_id++, round_height + 1});
      used[bx] = used[by] = 1;
    }
    std::vector<Root> next;
    for (std::size_t i = 0; i < m; ++i)
      if (!used[i]) next.push_back(std::move(roots[i]));
    for (Root& r : merged) next.push_back(std::move(r));
    roots = std::move(next);
    std::sort(roots.begin(), roots.end(),
              [](const Root& p, const Root& q) { return p.handle.root.min_label < q.handle.root.min_label; });
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (roots.size() == 2) {
    const DistortedValue d = distorted_metric_routine(roots[0].handle, roots[1].handle, dbar, delta);
    const double half = d.finite() ? 0.5 * d.value() : nan;
    shape.join(roots[0].node, half, roots[1].node, half);
  } else if (roots.size() == 3) {
    DistortedValue d[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        d[i][j] = i == j ? DistortedValue::at(0, delta)
                         : distorted_metric_routine(roots[i].handle, roots[j].handle, dbar, delta);
    auto arm = [&](int a, int b, int c) {
      return d[a][b].finite() && d[a][c].finite() && d[b][c].finite() ? three_point_length(d[a][b], d[a][c], d[b][c])
                                                                       : nan;
    };
    const NodeId center = shape.join(roots[0].node, arm(0, 1, 2), roots[1].node, arm(1, 0, 2));
    shape.join(center, nan, roots[2].node, arm(2, 0, 1));
  }
  diagnostics["clamped_lengths"] = clamped;
  diagnostics["status"] = "ok";
  return finish_shape(shape, std::move(diagnostics));
}

}  // namespace kslog
