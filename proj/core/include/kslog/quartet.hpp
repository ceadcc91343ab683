#pragma once

#include "kslog/deep_metric.hpp"

namespace kslog {

// The six distorted distances among a quartet {a, b, c, d}.
struct QuartetDistances {
  DistortedValue ab, ac, ad, bc, bd, cd;
};

enum class QuartetKind { split, far, ambiguous };

// pairing: 0 = ab|cd, 1 = ac|bd, 2 = ad|bc (meaningful for kind == split).
struct QuartetOutcome {
  QuartetKind kind = QuartetKind::far;
  int pairing = -1;
};

// Deep four-point test: pairing xy|zw passes when
// (1/2)[d(x,z) + d(y,w) - d(x,y) - d(z,w)] > f/2. Any infinite distance
// gives "far"; zero or several passing pairings give "ambiguous". The
// comparison is done on integer grid indices.
QuartetOutcome deep_four_point(const QuartetDistances& d, double f);

}  // namespace kslog
