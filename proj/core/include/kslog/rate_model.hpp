#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kslog/matrix.hpp"

namespace kslog {

// Reversible rate matrix Q with stationary distribution pi, rescaled so that
// its second eigenvalue is -1. Spectral data come from the pi-symmetrized
// matrix D^{1/2} Q D^{-1/2}, D = diag(pi).
//
// nu is the right eigenvector of the second eigenvalue, normalized so that
// sum_i pi_i nu_i^2 = 1, with its lowest-index nonzero entry positive.
class RateModel {
 public:
  // Validates Q_raw (positive off-diagonals, zero row sums, reversibility
  // w.r.t. pi, all to 1e-10) and rescales it. Throws ValidationError,
  // including when the second eigenvalue is not simple.
  static RateModel build(const Matrix& q_raw, std::vector<double> pi);

  static RateModel cfn();
  // Two states with pi = (pi_plus, 1 - pi_plus).
  static RateModel binary_asymmetric(double pi_plus);

  // "cfn", "binary-asymmetric:<pi_plus>", or a JSON object
  // {"phi": ..., "pi": [...], "Q": [[...], ...]}.
  static RateModel from_json(const nlohmann::json& j);
  static RateModel from_spec(std::string_view spec);
  nlohmann::json to_json() const;

  int num_states() const { return static_cast<int>(pi_.size()); }
  const Matrix& rate_matrix() const { return q_; }
  std::span<const double> pi() const { return pi_; }
  // Eigenvalues in descending order: 0 = first > second = -1 >= ...
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  std::span<const double> nu() const { return nu_; }
  // max_i |nu_i|
  double nu_max() const { return nu_max_; }
  // min_i pi_i
  double pi_min() const { return pi_min_; }
  // Factor applied to Q_raw during normalization.
  double scale() const { return scale_; }

  // e^{tQ} via the spectral decomposition. Throws ValidationError for t < 0.
  Matrix transition(double t) const;

 private:
  RateModel() = default;

  Matrix q_;
  std::vector<double> pi_;
  std::vector<double> eigenvalues_;
  Matrix sym_vectors_;  // orthonormal eigenvectors of the symmetrized Q, as columns
  std::vector<double> nu_;
  double nu_max_ = 0.0;
  double pi_min_ = 0.0;
  double scale_ = 1.0;
};

// Cyclic Jacobi eigensolver for a symmetric matrix. Returns eigenvalues and
// eigenvectors (as columns), unsorted.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};
SymmetricEigen jacobi_eigen(const Matrix& symmetric);

}  // namespace kslog
