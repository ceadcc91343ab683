#include "kslog/deep_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kslog/errors.hpp"

namespace kslog {

namespace {

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

DeepParams DeepParams::defaults(double delta, double f, double g) {
  DeepParams p;
  p.delta = delta;
  p.f = f;
  p.g = g;
  p.D = 4.0 * g + delta;
  p.W = 6.0;
  p.gamma = 3.5;
  return p;
}

void DeepParams::validate() const {
  if (!(delta > 0.0)) throw ValidationError("delta must be > 0");
  if (f < delta - 1e-12) throw ValidationError("f must be >= delta");
  if (g < f) throw ValidationError("g must be >= f");
  if (!(D > 0.0)) throw ValidationError("D must be > 0");
  if (!(W > 5.0)) throw ValidationError("W must be > 5");
}

std::int64_t grid_index(double z, double delta) {
  return static_cast<std::int64_t>(std::floor(z / delta + 0.5 + 1e-9));
}

double round_to_grid(double z, double delta) { return static_cast<double>(grid_index(z, delta)) * delta; }

double DistortedValue::value() const {
  return index ? static_cast<double>(*index) * delta : std::numeric_limits<double>::infinity();
}

Clade Clade::leaf(int label) {
  Clade c;
  c.leaves = {label};
  c.theta = {1.0};
  c.weight = {1.0};
  c.min_label = label;
  return c;
}

Clade Clade::join(const Clade& a, double theta_a, const Clade& b, double theta_b) {
  if (!(theta_a > 0.0) || !(theta_b > 0.0)) throw ValidationError("Clade::join: edge weights must be positive");
  Clade c;
  const std::size_t n = a.leaves.size() + b.leaves.size();
  c.leaves.reserve(n);
  c.theta.reserve(n);
  c.weight.reserve(n);
  for (std::size_t i = 0; i < a.leaves.size(); ++i) {
    c.leaves.push_back(a.leaves[i]);
    c.theta.push_back(a.theta[i] * theta_a);
    c.weight.push_back(a.weight[i] * 0.5);
  }
  for (std::size_t i = 0; i < b.leaves.size(); ++i) {
    c.leaves.push_back(b.leaves[i]);
    c.theta.push_back(b.theta[i] * theta_b);
    c.weight.push_back(b.weight[i] * 0.5);
  }
  c.min_label = std::min(a.min_label, b.min_label);
  return c;
}

double averaged_similarity(const DistanceTable& table, const Clade& a, const Clade& b) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < a.leaves.size(); ++i) {
    const double wa = a.weight[i] / a.theta[i];
    for (std::size_t j = 0; j < b.leaves.size(); ++j) {
      const double wb = b.weight[j] / b.theta[j];
      sum.add(wa * wb * table.similarity(static_cast<std::size_t>(a.leaves[i]), static_cast<std::size_t>(b.leaves[j])));
    }
  }
  return sum.value();
}

double tau_bar(const DistanceTable& table, const Clade& a, const Clade& b) {
  if (a.is_leaf() && b.is_leaf())
    return table.value(static_cast<std::size_t>(a.leaves[0]), static_cast<std::size_t>(b.leaves[0]));
  const double avg = averaged_similarity(table, a, b);
  return avg > 0.0 ? -std::log(avg) : std::numeric_limits<double>::infinity();
}

DistortedValue distort(double tau_bar_value, const DeepParams& params) {
  if (!std::isfinite(tau_bar_value)) return DistortedValue::infinite(params.delta);
  // Estimates can come out slightly negative; the grid starts at 0.
  const std::int64_t m = std::max<std::int64_t>(0, grid_index(tau_bar_value, params.delta));
  if (static_cast<double>(m) * params.delta > params.sd_threshold() + 1e-9)
    return DistortedValue::infinite(params.delta);
  return DistortedValue::at(m, params.delta);
}

DistortedValue distorted_metric(const DistanceTable& table, const Clade& a, const Clade& b, const DeepParams& params) {
  return distort(tau_bar(table, a, b), params);
}

double three_point_length(const DistortedValue& ab, const DistortedValue& ac, const DistortedValue& bc) {
  if (!ab.finite() || !ac.finite() || !bc.finite())
    throw ValidationError("three-point estimate needs three finite distances");
  return 0.5 * (ab.value() + ac.value() - bc.value());
}

double three_point_weight(const DistortedValue& ab, const DistortedValue& ac, const DistortedValue& bc) {
  return std::exp(-three_point_length(ab, ac, bc));
}

}  // namespace kslog
