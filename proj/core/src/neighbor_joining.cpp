#include "kslog/neighbor_joining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kslog/errors.hpp"

namespace kslog {

ReconstructionResult neighbor_joining(const DistanceTable& table) {
  const std::size_t n = table.num_leaves();
  if (n == 0) throw ValidationError("neighbor joining needs at least one leaf");
  double cap = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::isfinite(table.value(a, b))) cap = std::max(cap, table.value(a, b));
  cap += 1.0;

  ShapeBuilder shape;
  std::vector<NodeId> node(n);
  for (std::size_t a = 0; a < n; ++a) node[a] = shape.add_leaf(static_cast<int>(a));
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) d[a][b] = std::isfinite(table.value(a, b)) ? table.value(a, b) : cap;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::size_t> active(n);
  for (std::size_t a = 0; a < n; ++a) active[a] = a;
  while (active.size() > 3) {
    const std::size_t m = active.size();
    std::vector<double> row(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) row[i] += d[active[i]][active[j]];
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const double q = static_cast<double>(m - 2) * d[active[i]][active[j]] - row[i] - row[j];
        if (q < best) {
          best = q;
          bi = i;
          bj = j;
        }
      }
    const std::size_t a = active[bi], b = active[bj];
    const double dab = d[a][b];
    const double la = 0.5 * dab + (row[bi] - row[bj]) / (2.0 * static_cast<double>(m - 2));
    const double lb = dab - la;
    const NodeId z = shape.join(node[a], la, node[b], lb);
    // Reuse slot a for the new node.
    node[a] = z;
    for (std::size_t k : active) {
      if (k == a || k == b) continue;
      const double v = 0.5 * (d[a][k] + d[b][k] - dab);
      d[a][k] = d[k][a] = v;
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  if (active.size() == 2) {
    const double half = 0.5 * d[active[0]][active[1]];
    shape.join(node[active[0]], half, node[active[1]], half);
  } else if (active.size() == 3) {
    const std::size_t a = active[0], b = active[1], c = active[2];
    const double la = 0.5 * (d[a][b] + d[a][c] - d[b][c]);
    const double lb = 0.5 * (d[a][b] + d[b][c] - d[a][c]);
    const double lc = 0.5 * (d[a][c] + d[b][c] - d[a][b]);
    const NodeId center = shape.join(node[a], la, node[b], lb);
    shape.join(center, nan, node[c], lc);
  }
  return finish_shape(shape, {{"algorithm", "nj"}, {"status", "ok"}});
}

}  // namespace kslog
