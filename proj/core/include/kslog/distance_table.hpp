#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "kslog/matrix.hpp"

namespace kslog {

enum class Estimator { eigen, cfn, logdet, uncorrected };

std::string_view estimator_name(Estimator e);
// Throws ValidationError for unknown names.
Estimator parse_estimator(std::string_view name);

// Symmetric n x n table of pairwise estimates, the only view of the data that
// reconstruction code receives.
//
// value(a, b) is the distance estimate (+inf when the estimator saturates).
// similarity(a, b) is the signed quantity whose negative log gives the
// estimate, e.g. nu^T F nu for the eigenvector estimator. It stays defined,
// and possibly negative, when the estimate saturates; exponential averaging
// sums similarities, which keeps e^{-tau_bar} an unbiased average.
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::size_t num_leaves, Estimator estimator);

  std::size_t num_leaves() const { return values_.rows(); }
  Estimator estimator() const { return estimator_; }
  double value(std::size_t a, std::size_t b) const { return values_(a, b); }
  double similarity(std::size_t a, std::size_t b) const { return similarity_(a, b); }
  // Sets both (a, b) and (b, a).
  void set(std::size_t a, std::size_t b, double value, double similarity);

  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
  Matrix similarity_;
  Estimator estimator_ = Estimator::eigen;
};

}  // namespace kslog
