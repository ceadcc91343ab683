#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kslog/matrix.hpp"
#include "kslog/rate_model.hpp"
#include "kslog/tree.hpp"

namespace kslog {

// Every assignment of states to the vertices of a small tree together with
// its probability under the Markov model (root from pi, each edge from
// e^{tau_e Q}). Assignment index encodes states in base phi, vertex 0 least
// significant.
class ExactDistribution {
 public:
  // Throws ValidationError when phi^{|V|} > 1e7.
  ExactDistribution(const Phylogeny& tree, const RateModel& model);

  std::size_t size() const { return probs_.size(); }
  std::size_t num_nodes() const { return num_nodes_; }
  int num_states() const { return phi_; }
  double probability(std::size_t index) const { return probs_[index]; }
  // States of all vertices for one assignment, indexed by NodeId.
  std::vector<std::uint8_t> states(std::size_t index) const;

  // E[fn(xi)], fn called once per assignment with the vertex states.
  double expectation(const std::function<double(std::span<const std::uint8_t>)>& fn) const;
  double total_probability() const;
  std::vector<double> marginal(NodeId v) const;
  // P[xi_u = i, xi_v = j]
  Matrix joint(NodeId u, NodeId v) const;

 private:
  std::size_t num_nodes_;
  int phi_;
  std::vector<double> probs_;
};

}  // namespace kslog
