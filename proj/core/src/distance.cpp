#include "kslog/distance.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "kslog/errors.hpp"
#include "kslog/newick.hpp"
#include "kslog/parallel.hpp"

namespace kslog {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double neg_log_or_inf(double x) { return x > 0.0 ? -std::log(x) : kInf; }

}  // namespace

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::eigen: return "eigen";
    case Estimator::cfn: return "cfn";
    case Estimator::logdet: return "logdet";
    case Estimator::uncorrected: return "uncorrected";
  }
  return "?";
}

Estimator parse_estimator(std::string_view name) {
  for (Estimator e : {Estimator::eigen, Estimator::cfn, Estimator::logdet, Estimator::uncorrected})
    if (estimator_name(e) == name) return e;
  throw ValidationError("unknown estimator '" + std::string(name) + "'");
}

DistanceTable::DistanceTable(std::size_t num_leaves, Estimator estimator)
    : values_(num_leaves, num_leaves, 0.0), similarity_(num_leaves, num_leaves, 1.0), estimator_(estimator) {}

void DistanceTable::set(std::size_t a, std::size_t b, double value, double similarity) {
  values_(a, b) = value;
  values_(b, a) = value;
  similarity_(a, b) = similarity;
  similarity_(b, a) = similarity;
}

CorrelationMatrix::CorrelationMatrix(int num_states, std::uint64_t k)
    : phi_(num_states), k_(k), counts_(static_cast<std::size_t>(num_states * num_states), 0) {
  if (num_states < 1) throw ValidationError("CorrelationMatrix: need at least one state");
  if (k == 0) throw ValidationError("CorrelationMatrix: k must be >= 1");
}

Matrix CorrelationMatrix::frequencies() const {
  Matrix m(static_cast<std::size_t>(phi_), static_cast<std::size_t>(phi_));
  for (int i = 0; i < phi_; ++i)
    for (int j = 0; j < phi_; ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = (*this)(i, j);
  return m;
}

CorrelationMatrix CorrelationMatrix::transposed() const {
  CorrelationMatrix t(phi_, k_);
  for (int i = 0; i < phi_; ++i)
    for (int j = 0; j < phi_; ++j) t.add(j, i, count(i, j));
  return t;
}

CorrelationMatrix correlation_matrix(const Alignment& alignment, std::size_t a, std::size_t b, int num_states) {
  if (a >= alignment.num_leaves || b >= alignment.num_leaves) throw ValidationError("correlation_matrix: leaf out of range");
  if (a == b) throw ValidationError("correlation_matrix: a == b");
  CorrelationMatrix f(num_states, alignment.num_sites);
  const auto sa = alignment.sequence(a);
  const auto sb = alignment.sequence(b);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i] >= num_states || sb[i] >= num_states) throw ValidationError("correlation_matrix: state out of range");
    f.add(sa[i], sb[i]);
  }
  return f;
}

double eigen_similarity(const CorrelationMatrix& f, const RateModel& model) {
  if (f.num_states() != model.num_states()) throw ValidationError("eigen_similarity: state count mismatch");
  const auto nu = model.nu();
  // Integer-weighted sum, divided once.
  double acc = 0.0;
  for (int i = 0; i < f.num_states(); ++i)
    for (int j = 0; j < f.num_states(); ++j) acc += nu[i] * nu[j] * static_cast<double>(f.count(i, j));
  return acc / static_cast<double>(f.num_sites());
}

double tau_hat_eigen(const CorrelationMatrix& f, const RateModel& model) {
  return neg_log_or_inf(eigen_similarity(f, model));
}

double cfn_distance(const CorrelationMatrix& f) {
  if (f.num_states() != 2) throw ValidationError("cfn estimator requires two states");
  return neg_log_or_inf(1.0 - 2.0 * (f(0, 1) + f(1, 0)));
}

double logdet_distance(const CorrelationMatrix& f) {
  const double det = determinant(f.frequencies());
  return det == 0.0 ? kInf : -std::log(std::abs(det));
}

double uncorrected_distance(const CorrelationMatrix& f, const RateModel& model) {
  return 0.5 * (1.0 - eigen_similarity(f, model));
}

DistanceTable distance_table(const Alignment& alignment, const RateModel& model, Estimator estimator) {
  const std::size_t n = alignment.num_leaves;
  const int phi = model.num_states();
  if (estimator == Estimator::cfn && phi != 2) throw ValidationError("cfn estimator requires two states");
  DistanceTable table(n, estimator);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  parallel_for(pairs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto [a, b] = pairs[p];
      const CorrelationMatrix f = correlation_matrix(alignment, a, b, phi);
      double value = 0.0;
      double sim = 0.0;
      switch (estimator) {
        case Estimator::eigen:
          sim = eigen_similarity(f, model);
          value = neg_log_or_inf(sim);
          break;
        case Estimator::cfn:
          sim = 1.0 - 2.0 * (f(0, 1) + f(1, 0));
          value = neg_log_or_inf(sim);
          break;
        case Estimator::logdet:
          sim = std::abs(determinant(f.frequencies()));
          value = neg_log_or_inf(sim);
          break;
        case Estimator::uncorrected:
          sim = eigen_similarity(f, model);
          value = 0.5 * (1.0 - sim);
          break;
      }
      table.set(a, b, value, sim);
    }
  });
  if (estimator == Estimator::uncorrected) {
    for (std::size_t a = 0; a < n; ++a) {
      CorrelationMatrix f(phi, alignment.num_sites);
      for (std::uint8_t s : alignment.sequence(a)) f.add(s, s);
      const double sim = eigen_similarity(f, model);
      table.set(a, a, 0.5 * (1.0 - sim), sim);
    }
  }
  return table;
}

DistanceTable oracle_distance_table(const Phylogeny& tree) {
  const Matrix d = leaf_distances(tree);
  DistanceTable table(tree.num_leaves(), Estimator::eigen);
  for (std::size_t a = 0; a < d.rows(); ++a)
    for (std::size_t b = a + 1; b < d.rows(); ++b) table.set(a, b, d(a, b), std::exp(-d(a, b)));
  return table;
}

DistanceTable oracle_uncorrected_table(const Phylogeny& tree) {
  const Matrix d = leaf_distances(tree);
  DistanceTable table(tree.num_leaves(), Estimator::uncorrected);
  for (std::size_t a = 0; a < d.rows(); ++a)
    for (std::size_t b = a; b < d.rows(); ++b) {
      const double sim = std::exp(-d(a, b));
      table.set(a, b, 0.5 * (1.0 - sim), sim);
    }
  return table;
}

void write_distance_csv(std::ostream& out, const DistanceTable& table) {
  out << "a,b,estimator,value\n";
  const auto name = estimator_name(table.estimator());
  for (std::size_t a = 0; a < table.num_leaves(); ++a)
    for (std::size_t b = a + 1; b < table.num_leaves(); ++b) {
      const double v = table.value(a, b);
      out << a << ',' << b << ',' << name << ',' << (std::isinf(v) ? std::string("inf") : format_length(v)) << '\n';
    }
}

}  // namespace kslog
