#include "kslog/quartet.hpp"

#include <cstdint>

namespace kslog {

QuartetOutcome deep_four_point(const QuartetDistances& d, double f) {
  for (const DistortedValue* v : {&d.ab, &d.ac, &d.ad, &d.bc, &d.bd, &d.cd})
    if (!v->finite()) return {QuartetKind::far, -1};
  const double delta = d.ab.delta;
  const std::int64_t ab = *d.ab.index, ac = *d.ac.index, ad = *d.ad.index;
  const std::int64_t bc = *d.bc.index, bd = *d.bd.index, cd = *d.cd.index;
  // Twice the four-point gap of each pairing, in grid units.
  const std::int64_t gap[3] = {ac + bd - ab - cd, ab + cd - ac - bd, ab + cd - ad - bc};
  int passing = -1;
  int count = 0;
  for (int p = 0; p < 3; ++p) {
    if (static_cast<double>(gap[p]) * delta > f + 1e-9 * delta) {
      passing = p;
      ++count;
    }
  }
  if (count != 1) return {QuartetKind::ambiguous, -1};
  return {QuartetKind::split, passing};
}

}  // namespace kslog
