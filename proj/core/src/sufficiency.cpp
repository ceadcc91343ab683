#include "kslog/sufficiency.hpp"

#include "kslog/distance.hpp"
#include "kslog/errors.hpp"

namespace kslog {

const QuartetData& sufficiency_data1() {
  static const QuartetData data = {{{0, 0, 0, 0, 1, 1, 1, 1},
                                    {0, 1, 1, 0, 1, 0, 0, 1},
                                    {0, 1, 0, 1, 1, 0, 1, 0},
                                    {1, 1, 0, 0, 0, 0, 1, 1}}};
  return data;
}

const QuartetData& sufficiency_data2() {
  static const QuartetData data = {{{0, 0, 0, 0, 1, 1, 1, 1},
                                    {1, 1, 0, 0, 0, 0, 1, 1},
                                    {1, 0, 1, 0, 0, 1, 0, 1},
                                    {0, 1, 1, 0, 1, 0, 0, 1}}};
  return data;
}

Alignment to_alignment(const QuartetData& data) {
  Alignment a;
  a.num_leaves = 4;
  a.num_sites = 8;
  for (const auto& row : data) a.states.insert(a.states.end(), row.begin(), row.end());
  return a;
}

bool uniform_correlations(const QuartetData& data) {
  const Alignment a = to_alignment(data);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      const CorrelationMatrix f = correlation_matrix(a, i, j, 2);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          if (f(x, y) != 0.25) return false;
    }
  return true;
}

double quartet_likelihood(const QuartetData& data, double p) {
  auto edge = [p](int from, int to) { return from == to ? 1.0 - p : p; };
  double total = 1.0;
  for (std::size_t site = 0; site < 8; ++site) {
    const int a = data[0][site], b = data[1][site], c = data[2][site], d = data[3][site];
    double site_p = 0.0;
    // u joins a, b; v joins c, d; stationary root at u.
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v)
        site_p += 0.5 * edge(u, v) * edge(u, a) * edge(u, b) * edge(v, c) * edge(v, d);
    total *= site_p;
  }
  return total;
}

SufficiencyDemo sufficiency_demo(double eps) {
  if (!(eps > 0.0 && eps < 0.1)) throw ValidationError("sufficiency demo needs 0 < eps < 0.1");
  SufficiencyDemo demo;
  demo.eps = eps;
  demo.uniform1 = uniform_correlations(sufficiency_data1());
  demo.uniform2 = uniform_correlations(sufficiency_data2());
  auto row = [](double p) {
    SufficiencyRow r;
    r.p = p;
    r.likelihood1 = quartet_likelihood(sufficiency_data1(), p);
    r.likelihood2 = quartet_likelihood(sufficiency_data2(), p);
    r.ratio = r.likelihood2 / r.likelihood1;
    return r;
  };
  demo.small = row(eps);
  demo.near_half = row(0.5 - eps);
  return demo;
}

}  // namespace kslog
