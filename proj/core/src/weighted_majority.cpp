#include "kslog/weighted_majority.hpp"

#include <algorithm>
#include <cmath>

#include "kslog/errors.hpp"

namespace kslog {

namespace {

void check_unit_flow(const Phylogeny& tree, const Flow& flow) {
  if (flow.root == kNoNode || flow.vertex_flow.size() != tree.num_nodes())
    throw ValidationError("flow does not match the tree");
  if (std::abs(flow.vertex_flow[flow.root] - 1.0) > 1e-12) throw ValidationError("flow is not a unit flow");
  for (NodeId v : tree.subtree_nodes(flow.root)) {
    const double in = flow.vertex_flow[v];
    if (in < 0.0) throw ValidationError("flow is negative");
    if (tree.is_leaf(v)) continue;
    double out = 0.0;
    for (NodeId c : tree.children(v)) out += flow.vertex_flow[c];
    if (std::abs(out - in) > 1e-12) throw ValidationError("flow is not conserved");
  }
}

double theta(const Phylogeny& tree, NodeId v) { return std::exp(-tree.length(v)); }

}  // namespace

Flow Flow::homogeneous(const Phylogeny& tree, NodeId root) {
  Flow f;
  f.root = root;
  f.vertex_flow.assign(tree.num_nodes(), 0.0);
  for (NodeId v : tree.subtree_nodes(root))
    f.vertex_flow[v] = v == root ? 1.0 : 0.5 * f.vertex_flow[tree.parent(v)];
  return f;
}

Flow Flow::from_leaf_weights(const Phylogeny& tree, NodeId root, const std::vector<double>& leaf_weight) {
  if (leaf_weight.size() != tree.num_nodes()) throw ValidationError("leaf weights must be indexed by node");
  Flow f;
  f.root = root;
  f.vertex_flow.assign(tree.num_nodes(), 0.0);
  auto nodes = tree.subtree_nodes(root);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const NodeId v = *it;
    if (tree.is_leaf(v)) {
      if (leaf_weight[v] < 0.0) throw ValidationError("leaf weights must be >= 0");
      f.vertex_flow[v] = leaf_weight[v];
    } else {
      for (NodeId c : tree.children(v)) f.vertex_flow[v] += f.vertex_flow[c];
    }
  }
  if (std::abs(f.vertex_flow[root] - 1.0) > 1e-12) throw ValidationError("leaf weights must sum to 1");
  f.vertex_flow[root] = 1.0;
  return f;
}

double k_psi(const Phylogeny& tree, const Flow& flow) {
  check_unit_flow(tree, flow);
  double k = 0.0;
  for (NodeId v : tree.subtree_nodes(flow.root)) {
    if (v == flow.root) continue;
    const double big_theta = std::exp(-(tree.root_distance(v) - tree.root_distance(flow.root)));
    const double th = theta(tree, v);
    const double psi = flow.vertex_flow[v];
    k += (1.0 - th * th) * psi * psi / (big_theta * big_theta);
  }
  return k;
}

double k_psi_recursive(const Phylogeny& tree, const Flow& flow) {
  check_unit_flow(tree, flow);
  std::vector<double> k(tree.num_nodes(), 0.0);
  auto nodes = tree.subtree_nodes(flow.root);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const NodeId u = *it;
    if (tree.is_leaf(u)) continue;
    const double psi_u = flow.vertex_flow[u];
    double acc = 0.0;
    for (NodeId v : tree.children(u)) {
      const double ratio = psi_u > 0.0 ? flow.vertex_flow[v] / psi_u : 0.0;
      const double th = theta(tree, v);
      acc += ((1.0 - th * th) + k[v]) * ratio * ratio / (th * th);
    }
    k[u] = acc;
  }
  return k[flow.root];
}

double k_psi_geometric_bound(double g) {
  if (!(g < kKestenStigumLength)) throw ValidationError("K bound needs g < ln sqrt 2");
  return 1.0 / (1.0 - std::exp(-2.0 * (kKestenStigumLength - g)));
}

std::vector<double> weighted_majority(const Phylogeny& tree, const Flow& flow, const FullSample& sample,
                                      const RateModel& model) {
  check_unit_flow(tree, flow);
  if (sample.num_nodes != tree.num_nodes()) throw ValidationError("sample does not match the tree");
  std::vector<double> s(sample.num_sites, 0.0);
  const auto nu = model.nu();
  for (NodeId x : tree.subtree_nodes(flow.root)) {
    if (!tree.is_leaf(x) || flow.vertex_flow[x] == 0.0) continue;
    const double big_theta = std::exp(-(tree.root_distance(x) - tree.root_distance(flow.root)));
    const double w = flow.vertex_flow[x] / big_theta;
    const auto seq = sample.sequence(x);
    for (std::size_t i = 0; i < seq.size(); ++i) s[i] += w * nu[seq[i]];
  }
  return s;
}

std::vector<double> clade_majority(const Alignment& alignment, const Clade& clade, const RateModel& model) {
  std::vector<double> s(alignment.num_sites, 0.0);
  const auto nu = model.nu();
  for (std::size_t j = 0; j < clade.leaves.size(); ++j) {
    const double w = clade.weight[j] / clade.theta[j];
    const auto seq = alignment.sequence(static_cast<std::size_t>(clade.leaves[j]));
    for (std::size_t i = 0; i < seq.size(); ++i) s[i] += w * nu[seq[i]];
  }
  return s;
}

double moment_bound_constant(const RateModel& model, double f, double slack) {
  if (!(f > 0.0)) throw ValidationError("moment bound needs f > 0");
  const double nb = model.nu_max();
  const double c_star = slack * std::max(4.0 * nb, nb * nb * std::exp(2.0 * nb));
  return c_star / (1.0 - std::exp(-2.0 * f));
}

double log_moment(const Phylogeny& tree, const Flow& flow, const RateModel& model, double zeta, int root_state) {
  check_unit_flow(tree, flow);
  const int phi = model.num_states();
  if (root_state < 0 || root_state >= phi) throw ValidationError("root state out of range");
  const auto nu = model.nu();
  // m[v][i] = E[exp(zeta * S restricted below v) | xi_v = i]
  std::vector<std::vector<double>> m(tree.num_nodes());
  auto nodes = tree.subtree_nodes(flow.root);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const NodeId v = *it;
    m[v].assign(static_cast<std::size_t>(phi), 1.0);
    if (tree.is_leaf(v)) {
      const double big_theta = std::exp(-(tree.root_distance(v) - tree.root_distance(flow.root)));
      for (int i = 0; i < phi; ++i) m[v][i] = std::exp(zeta * flow.vertex_flow[v] * nu[i] / big_theta);
      continue;
    }
    for (NodeId c : tree.children(v)) {
      const Matrix p = model.transition(tree.length(c));
      for (int i = 0; i < phi; ++i) {
        double acc = 0.0;
        for (int j = 0; j < phi; ++j) acc += p(i, j) * m[c][j];
        m[v][i] *= acc;
      }
    }
  }
  return std::log(m[flow.root][root_state]);
}

}  // namespace kslog
