#include "kslog/homogeneous_recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kslog/errors.hpp"
#include "kslog/parallel.hpp"
#include "kslog/quartet.hpp"

namespace kslog {

namespace {

struct Vertex {
  Clade clade;
  NodeId node;
};

}  // namespace

ReconstructionResult reconstruct_homogeneous(const DistanceTable& table, const DeepParams& params) {
  params.validate();
  const std::size_t n = table.num_leaves();
  if (n < 2 || (n & (n - 1)) != 0) throw ValidationError("homogeneous reconstruction needs 2^h >= 2 leaves");

  ShapeBuilder shape;
  std::vector<Vertex> z;
  for (std::size_t a = 0; a < n; ++a) z.push_back({Clade::leaf(static_cast<int>(a)), shape.add_leaf(static_cast<int>(a))});

  nlohmann::json diagnostics = {{"algorithm", "cherry"}, {"levels", nlohmann::json::array()}};
  auto fail = [&](const std::string& why) {
    diagnostics["status"] = "failed";
    diagnostics["failure"] = why;
    throw ReconstructionFailure(why, diagnostics);
  };

  int level = 0;
  while (z.size() > 2) {
    const std::size_t m = z.size();
    std::vector<DistortedValue> d(m * m, DistortedValue::infinite(params.delta));
    parallel_for(m, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = i + 1; j < m; ++j) d[i * m + j] = distorted_metric(table, z[i].clade, z[j].clade, params);
    });
    for (std::size_t i = 0; i < m; ++i) {
      d[i * m + i] = DistortedValue::at(0, params.delta);
      for (std::size_t j = 0; j < i; ++j) d[i * m + j] = d[j * m + i];
    }
    auto dist = [&](std::size_t i, std::size_t j) -> const DistortedValue& { return d[i * m + j]; };

    std::vector<std::vector<std::size_t>> near(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (dist(i, j).finite()) near[i].push_back(j);

    std::vector<char> supported(m * m, 0), forbidden(m * m, 0);
    auto mark = [&](std::vector<char>& t, std::size_t i, std::size_t j) { t[i * m + j] = t[j * m + i] = 1; };
    std::size_t quartets = 0, splits = 0, ambiguous = 0;
    for (std::size_t a = 0; a < m; ++a) {
      const auto& na = near[a];
      for (std::size_t ib = 0; ib < na.size(); ++ib)
        for (std::size_t ic = ib + 1; ic < na.size(); ++ic) {
          const std::size_t b = na[ib], c = na[ic];
          if (!dist(b, c).finite()) continue;
          for (std::size_t id = ic + 1; id < na.size(); ++id) {
            const std::size_t dd = na[id];
            if (!dist(b, dd).finite() || !dist(c, dd).finite()) continue;
            ++quartets;
            const QuartetOutcome q = deep_four_point(
                {dist(a, b), dist(a, c), dist(a, dd), dist(b, c), dist(b, dd), dist(c, dd)}, params.f);
            if (q.kind != QuartetKind::split) {
              ++ambiguous;
              continue;
            }
            ++splits;
            // Sides of the passing pairing.
            std::size_t s[4];
            if (q.pairing == 0) s[0] = a, s[1] = b, s[2] = c, s[3] = dd;
            else if (q.pairing == 1) s[0] = a, s[1] = c, s[2] = b, s[3] = dd;
            else s[0] = a, s[1] = dd, s[2] = b, s[3] = c;
            mark(supported, s[0], s[1]);
            mark(supported, s[2], s[3]);
            for (int x = 0; x < 2; ++x)
              for (int y = 2; y < 4; ++y) mark(forbidden, s[x], s[y]);
          }
        }
    }

    // A vertex pairs with its nearest candidate (supported, never separated;
    // ties by position, i.e. smallest leaf label), and only mutual choices
    // count. A sibling is at most 2g away, while a pair whose separating
    // quartet falls outside the diameter threshold is more than
    // delta + ln 2 > 2g apart, so nearness excludes those pairs.
    std::vector<int> partner(m, -1);
    std::size_t conflicts = 0;
    bool perfect = true;
    std::vector<std::size_t> nearest(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j || !supported[i * m + j]) continue;
        if (forbidden[i * m + j]) {
          if (i < j) ++conflicts;
          continue;
        }
        if (nearest[i] == m || *dist(i, j).index < *dist(i, nearest[i]).index) nearest[i] = j;
      }
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = nearest[i];
      if (j != m && nearest[j] == i) partner[i] = static_cast<int>(j);
    }
    std::size_t cherries = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (partner[i] == -1) perfect = false;
      else if (static_cast<std::size_t>(partner[i]) > i) ++cherries;
    }

    diagnostics["levels"].push_back({{"level", level},
                                     {"vertices", m},
                                     {"quartets", quartets},
                                     {"splits", splits},
                                     {"unresolved", ambiguous},
                                     {"cherries", cherries},
                                     {"conflicts", conflicts}});
    if (!perfect) {
      nlohmann::json grid = nlohmann::json::array(), labels = nlohmann::json::array(),
                     unpaired = nlohmann::json::array();
      for (std::size_t i = 0; i < m; ++i) {
        labels.push_back(z[i].clade.min_label);
        if (partner[i] == -1 || partner[static_cast<std::size_t>(partner[i])] != static_cast<int>(i))
          unpaired.push_back(z[i].clade.min_label);
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m; ++j)
          row.push_back(dist(i, j).finite() ? nlohmann::json(*dist(i, j).index) : nlohmann::json(nullptr));
        grid.push_back(row);
      }
      diagnostics["vertex_labels"] = labels;
      diagnostics["unpaired"] = unpaired;
      diagnostics["distances"] = grid;
      fail("level " + std::to_string(level) + ": cherries do not pair up the " + std::to_string(m) + " vertices");
    }

    std::vector<Vertex> next;
    next.reserve(m / 2);
    for (std::size_t x = 0; x < m; ++x) {
      const auto y = static_cast<std::size_t>(partner[x]);
      if (y < x) continue;
      // Witness: the SD-valid vertex nearest to the cherry, ties by smallest
      // leaf label (vertices are sorted by it). Short distances carry the
      // least noise into the three-point estimate.
      std::size_t w = m;
      std::int64_t w_reach = 0;
      for (std::size_t c = 0; c < m; ++c) {
        if (c == x || c == y) continue;
        if (dist(x, y).finite() && dist(x, c).finite() && dist(y, c).finite()) {
          const std::int64_t reach = *dist(x, c).index + *dist(y, c).index;
          if (w == m || reach < w_reach) w = c, w_reach = reach;
        }
      }
      if (w == m)
        fail("level " + std::to_string(level) + ": no witness for cherry with leaf " +
             std::to_string(z[x].clade.min_label));
      // Lengths are grid multiples under the model, so the estimate is
      // rounded to the grid before it becomes a weight.
      const double len_x = round_to_grid(three_point_length(dist(x, y), dist(x, w), dist(y, w)), params.delta);
      const double len_y = round_to_grid(three_point_length(dist(x, y), dist(y, w), dist(x, w)), params.delta);
      const double theta_x = std::exp(-len_x);
      const double theta_y = std::exp(-len_y);
      Clade joined = Clade::join(z[x].clade, theta_x, z[y].clade, theta_y);
      next.push_back({std::move(joined), shape.join(z[x].node, len_x, z[y].node, len_y)});
    }
    std::sort(next.begin(), next.end(),
              [](const Vertex& p, const Vertex& q) { return p.clade.min_label < q.clade.min_label; });
    z = std::move(next);
    ++level;
  }

  // Only the sum of the two root edges is identifiable; split it evenly.
  const DistortedValue top = distorted_metric(table, z[0].clade, z[1].clade, params);
  const double half = top.finite() ? 0.5 * top.value() : std::numeric_limits<double>::quiet_NaN();
  shape.join(z[0].node, half, z[1].node, half);
  diagnostics["status"] = "ok";
  return finish_shape(shape, std::move(diagnostics));
}

}  // namespace kslog
