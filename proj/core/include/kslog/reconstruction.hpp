#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kslog/topology.hpp"
#include "kslog/tree.hpp"

namespace kslog {

// Rooted binary shape assembled bottom-up by a reconstruction algorithm.
// Leaves are added first; every join creates a new parent node.
class ShapeBuilder {
 public:
  NodeId add_leaf(int label);
  // length_a, length_b are estimated lengths of the two new edges (NaN when
  // the algorithm does not estimate them).
  NodeId join(NodeId a, double length_a, NodeId b, double length_b);

  std::size_t size() const { return parents_.size(); }
  const std::vector<NodeId>& parents() const { return parents_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<double>& lengths() const { return lengths_; }

 private:
  std::vector<NodeId> parents_;
  std::vector<int> labels_;
  std::vector<double> lengths_;
};

struct ReconstructionResult {
  std::vector<NodeId> parents;
  std::vector<int> labels;
  std::vector<double> lengths;  // estimated edge lengths; NaN where unknown
  UnrootedTopology topology;
  nlohmann::json diagnostics;

  // Rooted tree with the estimated lengths; missing or non-positive
  // estimates are replaced by min_length.
  Phylogeny rooted_estimate(double min_length = 1e-6) const;
};

// Assembles a result from a finished shape (a single root).
ReconstructionResult finish_shape(const ShapeBuilder& shape, nlohmann::json diagnostics);

// Raised when the algorithm cannot proceed; the diagnostics record where.
class ReconstructionFailure : public std::runtime_error {
 public:
  ReconstructionFailure(const std::string& what, nlohmann::json diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const nlohmann::json& diagnostics() const { return diagnostics_; }

 private:
  nlohmann::json diagnostics_;
};

}  // namespace kslog
