#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "kslog/errors.hpp"
#include "kslog/rate_model.hpp"

namespace kslog {
namespace {

// e^{tQ} by Taylor series with scaling and squaring.
Matrix series_exp(const Matrix& q, double t) {
  const std::size_t n = q.rows();
  int squarings = 0;
  double scale = t;
  while (std::abs(scale) > 0.05) {
    scale /= 2.0;
    ++squarings;
  }
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = q(i, j) * scale;
  Matrix sum = Matrix::identity(n), term = Matrix::identity(n);
  for (int k = 1; k < 30; ++k) {
    term = term * a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        term(i, j) /= k;
        sum(i, j) += term(i, j);
      }
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Reversible 3-state matrix: Q_ij = S_ij pi_j with symmetric S.
RateModel three_state() {
  const std::vector<double> pi{0.5, 0.3, 0.2};
  const double s01 = 1.0, s02 = 2.0, s12 = 0.5;
  Matrix q{{0, s01 * pi[1], s02 * pi[2]}, {s01 * pi[0], 0, s12 * pi[2]}, {s02 * pi[0], s12 * pi[1], 0}};
  for (std::size_t i = 0; i < 3; ++i) q(i, i) = -(q(i, 0) + q(i, 1) + q(i, 2));
  return RateModel::build(q, pi);
}

TEST(RateModel, CfnIsAlreadyNormalized) {
  const RateModel m = RateModel::cfn();
  EXPECT_NEAR(m.eigenvalues()[1], -1.0, 1e-14);
  EXPECT_NEAR(m.scale(), 1.0, 1e-14);
  EXPECT_NEAR(m.nu()[0], 1.0, 1e-14);
  EXPECT_NEAR(m.nu()[1], -1.0, 1e-14);
  EXPECT_NEAR(m.rate_matrix()(0, 1), 0.5, 1e-14);
}

TEST(RateModel, BinaryAsymmetricClosedForm) {
  const RateModel m = RateModel::binary_asymmetric(0.7);
  // For two states, nu = (sqrt(pi1/pi0), -sqrt(pi0/pi1)) and Q = [[-pi1, pi1], [pi0, -pi0]].
  EXPECT_NEAR(m.nu()[0], std::sqrt(0.3 / 0.7), 1e-12);
  EXPECT_NEAR(m.nu()[1], -std::sqrt(0.7 / 0.3), 1e-12);
  EXPECT_NEAR(m.rate_matrix()(0, 1), 0.3, 1e-12);
  EXPECT_NEAR(m.rate_matrix()(1, 0), 0.7, 1e-12);
  EXPECT_NEAR(m.eigenvalues()[1], -1.0, 1e-12);
  double norm = 0.0, mean = 0.0;
  for (int i = 0; i < 2; ++i) {
    norm += m.pi()[i] * m.nu()[i] * m.nu()[i];
    mean += m.pi()[i] * m.nu()[i];
  }
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(m.nu_max(), std::sqrt(0.7 / 0.3), 1e-12);
  EXPECT_NEAR(m.pi_min(), 0.3, 1e-15);
}

TEST(RateModel, ScaleInvariant) {
  const std::vector<double> pi{0.7, 0.3};
  const RateModel a = RateModel::build(Matrix{{-0.3, 0.3}, {0.7, -0.7}}, pi);
  const RateModel b = RateModel::build(Matrix{{-0.9, 0.9}, {2.1, -2.1}}, pi);
  EXPECT_LT(a.rate_matrix().max_abs_diff(b.rate_matrix()), 1e-14);
  EXPECT_NEAR(b.scale(), 1.0 / 3.0, 1e-14);
}

TEST(RateModel, TransitionAtZeroIsIdentity) {
  EXPECT_LT(three_state().transition(0.0).max_abs_diff(Matrix::identity(3)), 1e-14);
  EXPECT_THROW(three_state().transition(-0.1), ValidationError);
}

TEST(RateModel, CfnTransitionClosedForm) {
  const RateModel m = RateModel::cfn();
  for (double t : {0.05, 0.25, 1.0, 3.0}) {
    const Matrix p = m.transition(t);
    const double same = (1 + std::exp(-t)) / 2, diff = (1 - std::exp(-t)) / 2;
    EXPECT_NEAR(p(0, 0), same, 1e-14);
    EXPECT_NEAR(p(0, 1), diff, 1e-14);
    EXPECT_NEAR(p(1, 0), diff, 1e-14);
    EXPECT_NEAR(p(1, 1), same, 1e-14);
  }
}

TEST(RateModel, TransitionMatchesSeries) {
  const RateModel m = three_state();
  for (double t : {0.1, 0.7, 2.0}) EXPECT_LT(m.transition(t).max_abs_diff(series_exp(m.rate_matrix(), t)), 1e-12);
}

TEST(RateModel, NuIsEigenvectorOfTransition) {
  for (const RateModel& m : {RateModel::cfn(), RateModel::binary_asymmetric(0.7), three_state()}) {
    for (double t : {0.1, 0.25, 1.0}) {
      const std::vector<double> mv = m.transition(t).apply(m.nu());
      for (int i = 0; i < m.num_states(); ++i) EXPECT_NEAR(mv[i], std::exp(-t) * m.nu()[i], 1e-12);
    }
  }
}

TEST(RateModel, TransitionPreservesStationarity) {
  const RateModel m = three_state();
  const Matrix p = m.transition(0.4);
  for (std::size_t j = 0; j < 3; ++j) {
    double s = 0.0, row = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      s += m.pi()[i] * p(i, j);
      row += p(j, i);
    }
    EXPECT_NEAR(s, m.pi()[j], 1e-13);
    EXPECT_NEAR(row, 1.0, 1e-13);
  }
}

TEST(RateModel, NuSignConvention) {
  const RateModel m = three_state();
  for (int i = 0; i < m.num_states(); ++i) {
    if (std::abs(m.nu()[i]) < 1e-12) continue;
    EXPECT_GT(m.nu()[i], 0.0);
    break;
  }
}

TEST(RateModel, RejectsInvalidMatrices) {
  // Not reversible with respect to pi.
  EXPECT_THROW(RateModel::build(Matrix{{-0.3, 0.3}, {0.3, -0.3}}, {0.7, 0.3}), ValidationError);
  // Rows do not sum to zero.
  EXPECT_THROW(RateModel::build(Matrix{{-0.5, 0.3}, {0.7, -0.7}}, {0.7, 0.3}), ValidationError);
  // Negative off-diagonal.
  EXPECT_THROW(RateModel::build(Matrix{{0.3, -0.3}, {-0.7, 0.7}}, {0.7, 0.3}), ValidationError);
  // pi not a distribution.
  EXPECT_THROW(RateModel::build(Matrix{{-0.5, 0.5}, {0.5, -0.5}}, {0.6, 0.6}), ValidationError);
  // Jukes-Cantor: the second eigenvalue has multiplicity three.
  Matrix jc(4, 4, 1.0 / 3.0);
  for (std::size_t i = 0; i < 4; ++i) jc(i, i) = -1.0;
  EXPECT_THROW(RateModel::build(jc, {0.25, 0.25, 0.25, 0.25}), ValidationError);
}

TEST(RateModel, SpecAndJsonRoundTrip) {
  const RateModel a = RateModel::from_spec("binary-asymmetric:0.7");
  EXPECT_NEAR(a.pi()[0], 0.7, 1e-15);
  EXPECT_THROW(RateModel::from_spec("binary-asymmetric:1.5"), ValidationError);
  EXPECT_THROW(RateModel::from_spec("hky"), ValidationError);
  const RateModel m = three_state();
  const RateModel back = RateModel::from_json(m.to_json());
  EXPECT_LT(back.rate_matrix().max_abs_diff(m.rate_matrix()), 1e-12);
  EXPECT_EQ(RateModel::from_json("cfn").num_states(), 2);
}

TEST(JacobiEigen, AgreesWithEigen) {
  const Matrix a{{4, 1, -2, 0.5}, {1, 3, 0.2, 1}, {-2, 0.2, 5, -1}, {0.5, 1, -1, 2}};
  const SymmetricEigen mine = jacobi_eigen(a);
  Eigen::Matrix4d e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = a(i, j);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(e);
  std::vector<double> values = mine.values;
  std::sort(values.begin(), values.end());
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(values[i], solver.eigenvalues()(i), 1e-12);
  // A v = lambda v for every returned pair.
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t r = 0; r < 4; ++r) {
      double av = 0.0;
      for (std::size_t k = 0; k < 4; ++k) av += a(r, k) * mine.vectors(k, c);
      EXPECT_NEAR(av, mine.values[c] * mine.vectors(r, c), 1e-12);
    }
}

}  // namespace
}  // namespace kslog
