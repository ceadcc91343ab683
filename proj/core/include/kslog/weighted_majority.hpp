#pragma once

#include <vector>

#include "kslog/deep_metric.hpp"
#include "kslog/rate_model.hpp"
#include "kslog/simulator.hpp"
#include "kslog/tree.hpp"

namespace kslog {

// Unit flow from root to the leaves below it: vertex_flow[v] = Psi(v), the
// flow through the edge above v (1 at the root, 0 outside the subtree).
struct Flow {
  NodeId root = kNoNode;
  std::vector<double> vertex_flow;

  // Psi(child) = Psi(parent) / 2.
  static Flow homogeneous(const Phylogeny& tree, NodeId root);
  // leaf_weight is indexed by NodeId; only leaves below root are read.
  // Throws ValidationError unless the weights are >= 0 and sum to 1.
  static Flow from_leaf_weights(const Phylogeny& tree, NodeId root, const std::vector<double>& leaf_weight);
};

// K_Psi = sum over non-root v below root of (1 - theta_v^2) Psi(v)^2 / Theta_{root,v}^2.
// Throws ValidationError if the flow is not a unit flow on the subtree.
double k_psi(const Phylogeny& tree, const Flow& flow);
// Same quantity via the leaf-up recursion
// K_u = sum_children ((1 - theta_v^2) + K_v) psi(e_v)^2 / theta_v^2.
double k_psi_recursive(const Phylogeny& tree, const Flow& flow);
// 1 / (1 - e^{-2(g* - g)}), the uniform bound for homogeneous flows, g < g*.
double k_psi_geometric_bound(double g);

// Per-site S = sum_x Psi(x) sigma_x / Theta_{root,x} with the true weights
// of the tree. Needs vertex states, so this is for testing only.
std::vector<double> weighted_majority(const Phylogeny& tree, const Flow& flow, const FullSample& sample,
                                      const RateModel& model);

// Per-site S_c = sum_{a in c} w(a) sigma_a / Theta(a) for a reconstructed
// clade, computed from the alignment itself.
std::vector<double> clade_majority(const Alignment& alignment, const Clade& clade, const RateModel& model);

// c = c* / (1 - e^{-2f}) with c* = slack * max{4 nu_max, nu_max^2 e^{2 nu_max}};
// slack > 1 makes the inequality on c* strict.
double moment_bound_constant(const RateModel& model, double f, double slack = 1.01);

// Gamma^i(zeta) = ln E[exp(zeta S) | root state i], exactly, by a leaf-up
// product over the tree.
double log_moment(const Phylogeny& tree, const Flow& flow, const RateModel& model, double zeta, int root_state);

}  // namespace kslog
