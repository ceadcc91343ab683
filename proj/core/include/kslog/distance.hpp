#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "kslog/distance_table.hpp"
#include "kslog/rate_model.hpp"
#include "kslog/simulator.hpp"
#include "kslog/tree.hpp"

namespace kslog {

// Empirical joint state frequencies at two leaves, kept as integer counts so
// that every frequency is an exact ratio count / k.
class CorrelationMatrix {
 public:
  CorrelationMatrix(int num_states, std::uint64_t k);

  int num_states() const { return phi_; }
  std::uint64_t num_sites() const { return k_; }
  std::uint64_t count(int i, int j) const { return counts_[static_cast<std::size_t>(i * phi_ + j)]; }
  void add(int i, int j, std::uint64_t n = 1) { counts_[static_cast<std::size_t>(i * phi_ + j)] += n; }
  double operator()(int i, int j) const { return static_cast<double>(count(i, j)) / static_cast<double>(k_); }
  Matrix frequencies() const;
  CorrelationMatrix transposed() const;

 private:
  int phi_;
  std::uint64_t k_;
  std::vector<std::uint64_t> counts_;
};

// Throws ValidationError for a == b, out-of-range leaves or states.
CorrelationMatrix correlation_matrix(const Alignment& alignment, std::size_t a, std::size_t b, int num_states);

// nu^T F nu
double eigen_similarity(const CorrelationMatrix& f, const RateModel& model);
// -ln(nu^T F nu), +inf when the argument is <= 0.
double tau_hat_eigen(const CorrelationMatrix& f, const RateModel& model);
// -ln(1 - 2 (F01 + F10)), +inf when the argument is <= 0. Two states only.
double cfn_distance(const CorrelationMatrix& f);
// -ln |det F|, +inf when det F = 0.
double logdet_distance(const CorrelationMatrix& f);
// (1 - nu^T F nu) / 2
double uncorrected_distance(const CorrelationMatrix& f, const RateModel& model);

// Pairwise table over all leaves (pairs computed in parallel). Diagonal:
// value 0 and similarity 1, except for the uncorrected estimator whose
// diagonal value is (1 - nu^T F^{aa} nu) / 2.
DistanceTable distance_table(const Alignment& alignment, const RateModel& model, Estimator estimator);

// Exact distances tau(a, b) with similarity e^{-tau(a, b)}; stands in for an
// infinitely long alignment.
DistanceTable oracle_distance_table(const Phylogeny& tree);
// Exact uncorrected distances (1 - e^{-tau}) / 2.
DistanceTable oracle_uncorrected_table(const Phylogeny& tree);

// CSV "a,b,estimator,value" over a < b, +inf written as "inf".
void write_distance_csv(std::ostream& out, const DistanceTable& table);

}  // namespace kslog
