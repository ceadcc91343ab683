#include "kslog/reconstruction.hpp"

#include <cmath>
#include <limits>

#include "kslog/errors.hpp"

namespace kslog {

NodeId ShapeBuilder::add_leaf(int label) {
  parents_.push_back(kNoNode);
  labels_.push_back(label);
  lengths_.push_back(std::numeric_limits<double>::quiet_NaN());
  return static_cast<NodeId>(parents_.size() - 1);
}

NodeId ShapeBuilder::join(NodeId a, double length_a, NodeId b, double length_b) {
  if (a == b || parents_.at(a) != kNoNode || parents_.at(b) != kNoNode)
    throw ValidationError("ShapeBuilder::join: nodes must be distinct current roots");
  const auto z = static_cast<NodeId>(parents_.size());
  parents_.push_back(kNoNode);
  labels_.push_back(-1);
  lengths_.push_back(std::numeric_limits<double>::quiet_NaN());
  parents_[a] = z;
  parents_[b] = z;
  lengths_[a] = length_a;
  lengths_[b] = length_b;
  return z;
}

Phylogeny ReconstructionResult::rooted_estimate(double min_length) const {
  std::vector<double> l(lengths.size());
  for (std::size_t v = 0; v < l.size(); ++v) {
    if (parents[v] == kNoNode) continue;
    l[v] = std::isfinite(lengths[v]) && lengths[v] > 0.0 ? lengths[v] : min_length;
  }
  return Phylogeny(parents, std::move(l), labels);
}

ReconstructionResult finish_shape(const ShapeBuilder& shape, nlohmann::json diagnostics) {
  ReconstructionResult r;
  r.parents = shape.parents();
  r.labels = shape.labels();
  r.lengths = shape.lengths();
  r.topology = UnrootedTopology::from_rooted(r.parents, r.labels);
  r.diagnostics = std::move(diagnostics);
  return r;
}

}  // namespace kslog
