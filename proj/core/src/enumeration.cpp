#include "kslog/enumeration.hpp"

#include <cmath>

#include "kslog/errors.hpp"

namespace kslog {

ExactDistribution::ExactDistribution(const Phylogeny& tree, const RateModel& model)
    : num_nodes_(tree.num_nodes()), phi_(model.num_states()) {
  const double count = std::pow(static_cast<double>(phi_), static_cast<double>(num_nodes_));
  if (count > 1e7) throw ValidationError("enumeration: phi^|V| exceeds 1e7");
  const auto total = static_cast<std::size_t>(std::llround(count));
  std::vector<Matrix> edge(num_nodes_);
  for (std::size_t v = 0; v < num_nodes_; ++v)
    if (static_cast<NodeId>(v) != tree.root()) edge[v] = model.transition(tree.length(static_cast<NodeId>(v)));
  probs_.assign(total, 0.0);
  std::vector<std::uint8_t> s(num_nodes_, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t v = 0; v < num_nodes_; ++v) {
      s[v] = static_cast<std::uint8_t>(rest % static_cast<std::size_t>(phi_));
      rest /= static_cast<std::size_t>(phi_);
    }
    double p = model.pi()[s[static_cast<std::size_t>(tree.root())]];
    for (std::size_t v = 0; v < num_nodes_; ++v) {
      const NodeId par = tree.parent(static_cast<NodeId>(v));
      if (par == kNoNode) continue;
      p *= edge[v](s[static_cast<std::size_t>(par)], s[v]);
    }
    probs_[idx] = p;
  }
}

std::vector<std::uint8_t> ExactDistribution::states(std::size_t index) const {
  std::vector<std::uint8_t> s(num_nodes_);
  for (std::size_t v = 0; v < num_nodes_; ++v) {
    s[v] = static_cast<std::uint8_t>(index % static_cast<std::size_t>(phi_));
    index /= static_cast<std::size_t>(phi_);
  }
  return s;
}

double ExactDistribution::expectation(const std::function<double(std::span<const std::uint8_t>)>& fn) const {
  double acc = 0.0;
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
    if (probs_[idx] == 0.0) continue;
    const auto s = states(idx);
    acc += probs_[idx] * fn(s);
  }
  return acc;
}

double ExactDistribution::total_probability() const {
  double acc = 0.0;
  for (double p : probs_) acc += p;
  return acc;
}

std::vector<double> ExactDistribution::marginal(NodeId v) const {
  std::vector<double> out(static_cast<std::size_t>(phi_), 0.0);
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) out[states(idx)[static_cast<std::size_t>(v)]] += probs_[idx];
  return out;
}

Matrix ExactDistribution::joint(NodeId u, NodeId v) const {
  Matrix out(static_cast<std::size_t>(phi_), static_cast<std::size_t>(phi_));
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
    const auto s = states(idx);
    out(s[static_cast<std::size_t>(u)], s[static_cast<std::size_t>(v)]) += probs_[idx];
  }
  return out;
}

}  // namespace kslog
