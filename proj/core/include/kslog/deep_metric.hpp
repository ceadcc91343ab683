#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kslog/distance_table.hpp"

namespace kslog {

// log(sqrt(2)): edge lengths must stay below this for averaging to work.
inline constexpr double kKestenStigumLength = 0.34657359027997264;

// Grid and radius parameters of the distorted metric.
struct DeepParams {
  double delta = 0.05;
  double f = 0.05;
  double g = 0.25;
  double D = 1.05;   // radius; default 4g + delta
  double W = 6.0;    // > 5
  double gamma = 3.5;  // target failure exponent, recorded only

  static DeepParams defaults(double delta, double f, double g);
  // D + ln(W/3)
  double sd_threshold() const { return D + std::log(W / 3.0); }
  // Throws ValidationError unless 0 < delta <= f <= g, D > 0, W > 5.
  void validate() const;
};

// Index m of the nearest multiple m*delta to z; exact halves round up. A
// slack of 1e-9 grid units absorbs representation error, so 0.35 / 0.1
// still counts as a tie.
std::int64_t grid_index(double z, double delta);
double round_to_grid(double z, double delta);

// Grid value m*delta or +inf. Finite exactly when the diameter test passed.
struct DistortedValue {
  std::optional<std::int64_t> index;
  double delta = 0.0;

  bool finite() const { return index.has_value(); }
  bool sd() const { return finite(); }
  double value() const;
  static DistortedValue infinite(double delta) { return {std::nullopt, delta}; }
  static DistortedValue at(std::int64_t m, double delta) { return {m, delta}; }
};

// A reconstructed vertex seen from below: its descendant leaves, the weight
// Theta from the vertex down to each leaf (product of per-edge theta), and the
// homogeneous flow 2^{-depth} to each leaf.
struct Clade {
  std::vector<int> leaves;
  std::vector<double> theta;
  std::vector<double> weight;
  int min_label = 0;

  static Clade leaf(int label);
  // Parent of a and b, with theta_a, theta_b the weights of the two new
  // edges. Flow halves on each side.
  static Clade join(const Clade& a, double theta_a, const Clade& b, double theta_b);
  bool is_leaf() const { return leaves.size() == 1; }
};

// sum_{a' in A} sum_{b' in B} w(a') w(b') / (Theta(a') Theta(b')) * similarity(a', b'),
// with compensated summation. A and B must have disjoint leaves.
double averaged_similarity(const DistanceTable& table, const Clade& a, const Clade& b);

// -ln(averaged_similarity), +inf when the average is <= 0. For two leaves
// this is the table value itself.
double tau_bar(const DistanceTable& table, const Clade& a, const Clade& b);

// [tau_bar]_delta when it is <= D + ln(W/3), otherwise +inf.
DistortedValue distorted_metric(const DistanceTable& table, const Clade& a, const Clade& b, const DeepParams& params);
DistortedValue distort(double tau_bar_value, const DeepParams& params);

// (1/2)[d(a,b) + d(a,c) - d(b,c)]: the distance from a to the meeting point
// of a, b, c. Throws ValidationError when an input is infinite.
double three_point_length(const DistortedValue& ab, const DistortedValue& ac, const DistortedValue& bc);
// exp(-three_point_length)
double three_point_weight(const DistortedValue& ab, const DistortedValue& ac, const DistortedValue& bc);

}  // namespace kslog
