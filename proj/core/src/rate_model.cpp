#include "kslog/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kslog/errors.hpp"

namespace kslog {

namespace {

constexpr double kTol = 1e-10;

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& symmetric) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw ValidationError("jacobi_eigen: matrix not square");
  Matrix a = symmetric;
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  SymmetricEigen out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  out.vectors = std::move(v);
  return out;
}

RateModel RateModel::build(const Matrix& q_raw, std::vector<double> pi) {
  const std::size_t phi = pi.size();
  if (phi < 2) throw ValidationError("rate model needs at least two states");
  if (q_raw.rows() != phi || q_raw.cols() != phi) throw ValidationError("Q must be phi x phi");
  for (double p : pi)
    if (!(p > 0.0) || !std::isfinite(p)) throw ValidationError("pi must be strictly positive");
  const double pi_sum = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (std::abs(pi_sum - 1.0) > kTol) throw ValidationError("pi must sum to 1");

  double magnitude = 0.0;
  for (std::size_t i = 0; i < phi; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < phi; ++j) {
      if (!std::isfinite(q_raw(i, j))) throw ValidationError("Q has non-finite entries");
      if (i != j && !(q_raw(i, j) > 0.0)) throw ValidationError("Q off-diagonal entries must be positive");
      row += q_raw(i, j);
      magnitude = std::max(magnitude, std::abs(q_raw(i, j)));
    }
    if (std::abs(row) > kTol * std::max(1.0, magnitude))
      throw ValidationError("Q rows must sum to zero (row " + std::to_string(i) + ")");
  }
  for (std::size_t i = 0; i < phi; ++i)
    for (std::size_t j = i + 1; j < phi; ++j)
      if (std::abs(pi[i] * q_raw(i, j) - pi[j] * q_raw(j, i)) > kTol * std::max(1.0, magnitude))
        throw ValidationError("Q is not reversible with respect to pi");

  // Symmetrize: S = D^{1/2} Q D^{-1/2}.
  Matrix s(phi, phi);
  for (std::size_t i = 0; i < phi; ++i)
    for (std::size_t j = 0; j < phi; ++j) s(i, j) = std::sqrt(pi[i]) * q_raw(i, j) / std::sqrt(pi[j]);
  for (std::size_t i = 0; i < phi; ++i)
    for (std::size_t j = i + 1; j < phi; ++j) {
      const double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  SymmetricEigen eig = jacobi_eigen(s);

  // Descending eigenvalues; ties by ascending index.
  std::vector<std::size_t> order(phi);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eig.values[a] > eig.values[b]; });
  const double lambda2 = eig.values[order[1]];
  if (!(lambda2 < -kTol)) throw ValidationError("second eigenvalue of Q must be negative");
  const double scale = -1.0 / lambda2;
  if (phi > 2 && std::abs(eig.values[order[2]] - lambda2) <= kTol * std::abs(lambda2))
    throw ValidationError("second eigenvalue of Q is not simple; nu would be ill-defined");

  RateModel m;
  m.scale_ = scale;
  m.pi_ = std::move(pi);
  m.q_ = Matrix(phi, phi);
  for (std::size_t i = 0; i < phi; ++i)
    for (std::size_t j = 0; j < phi; ++j) m.q_(i, j) = q_raw(i, j) * scale;
  m.eigenvalues_.resize(phi);
  m.sym_vectors_ = Matrix(phi, phi);
  for (std::size_t c = 0; c < phi; ++c) {
    m.eigenvalues_[c] = eig.values[order[c]] * scale;
    for (std::size_t r = 0; r < phi; ++r) m.sym_vectors_(r, c) = eig.vectors(r, order[c]);
  }
  m.eigenvalues_[0] = 0.0;
  m.eigenvalues_[1] = -1.0;

  m.nu_.resize(phi);
  double norm = 0.0;
  for (std::size_t i = 0; i < phi; ++i) {
    m.nu_[i] = m.sym_vectors_(i, 1) / std::sqrt(m.pi_[i]);
    norm += m.pi_[i] * m.nu_[i] * m.nu_[i];
  }
  norm = std::sqrt(norm);
  for (double& x : m.nu_) x /= norm;
  const auto first = std::find_if(m.nu_.begin(), m.nu_.end(), [](double x) { return std::abs(x) > 1e-12; });
  if (first != m.nu_.end() && *first < 0) {
    for (double& x : m.nu_) x = -x;
    for (std::size_t r = 0; r < phi; ++r) m.sym_vectors_(r, 1) = -m.sym_vectors_(r, 1);
  }
  m.nu_max_ = 0.0;
  for (double x : m.nu_) m.nu_max_ = std::max(m.nu_max_, std::abs(x));
  m.pi_min_ = *std::min_element(m.pi_.begin(), m.pi_.end());
  return m;
}

RateModel RateModel::cfn() {
  return build(Matrix{{-0.5, 0.5}, {0.5, -0.5}}, {0.5, 0.5});
}

RateModel RateModel::binary_asymmetric(double pi_plus) {
  if (!(pi_plus > 0.0 && pi_plus < 1.0)) throw ValidationError("binary-asymmetric: pi_plus must lie in (0, 1)");
  const double pi_minus = 1.0 - pi_plus;
  return build(Matrix{{-pi_minus, pi_minus}, {pi_plus, -pi_plus}}, {pi_plus, pi_minus});
}

Matrix RateModel::transition(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("transition: elapsed length must be >= 0");
  const std::size_t phi = pi_.size();
  // e^{tQ} = D^{-1/2} U e^{t Lambda} U^T D^{1/2}
  Matrix out(phi, phi);
  for (std::size_t i = 0; i < phi; ++i)
    for (std::size_t j = 0; j < phi; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < phi; ++m)
        acc += sym_vectors_(i, m) * std::exp(eigenvalues_[m] * t) * sym_vectors_(j, m);
      out(i, j) = acc * std::sqrt(pi_[j] / pi_[i]);
    }
  return out;
}

}  // namespace kslog
