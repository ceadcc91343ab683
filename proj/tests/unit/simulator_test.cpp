#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "kslog/errors.hpp"
#include "kslog/newick.hpp"
#include "kslog/simulator.hpp"

namespace kslog {
namespace {

RateModel three_state() {
  const std::vector<double> pi{0.5, 0.3, 0.2};
  Matrix q{{0, 1.0 * pi[1], 2.0 * pi[2]}, {1.0 * pi[0], 0, 0.5 * pi[2]}, {2.0 * pi[0], 0.5 * pi[1], 0}};
  for (std::size_t i = 0; i < 3; ++i) q(i, i) = -(q(i, 0) + q(i, 1) + q(i, 2));
  return RateModel::build(q, pi);
}

TEST(Simulator, RootFrequenciesAreStationary) {
  const Phylogeny single({kNoNode}, {0.0}, {0});
  const RateModel m = three_state();
  const std::size_t k = 100000;
  const Alignment a = sample_alignment(single, m, k, 5);
  std::vector<double> counts(3, 0.0);
  for (std::size_t i = 0; i < k; ++i) counts[a.state(0, i)] += 1;
  double chi2 = 0.0;
  for (int s = 0; s < 3; ++s) {
    const double expect = m.pi()[s] * static_cast<double>(k);
    chi2 += (counts[s] - expect) * (counts[s] - expect) / expect;
  }
  EXPECT_LT(chi2, 13.816);  // 99.9% quantile, 2 degrees of freedom
}

TEST(Simulator, CfnMismatchRate) {
  const double t = 0.6;
  const Phylogeny tree = parse_phylogeny("(0:0.3,1:0.3);");
  const std::size_t k = 100000;
  const Alignment a = sample_alignment(tree, RateModel::cfn(), k, 9);
  double mismatches = 0;
  for (std::size_t i = 0; i < k; ++i) mismatches += a.state(0, i) != a.state(1, i);
  const double p = (1 - std::exp(-t)) / 2;
  EXPECT_NEAR(mismatches / static_cast<double>(k), p, 3 * std::sqrt(p * (1 - p) / static_cast<double>(k)));
}

TEST(Simulator, DeterministicAndReplicateSensitive) {
  const Phylogeny tree = Phylogeny::homogeneous(3, 0.2);
  const RateModel m = RateModel::cfn();
  const Alignment a = sample_alignment(tree, m, 500, 42, 3);
  const Alignment b = sample_alignment(tree, m, 500, 42, 3);
  const Alignment c = sample_alignment(tree, m, 500, 42, 4);
  EXPECT_EQ(a.states, b.states);
  EXPECT_NE(a.states, c.states);
  // Prefix property: site i does not depend on k.
  const Alignment longer = sample_alignment(tree, m, 800, 42, 3);
  for (std::size_t leaf = 0; leaf < 8; ++leaf)
    for (std::size_t i = 0; i < 500; ++i) ASSERT_EQ(a.state(leaf, i), longer.state(leaf, i));
}

TEST(Simulator, LeafAlignmentMatchesFullSample) {
  const Phylogeny tree = Phylogeny::homogeneous(2, 0.2);
  const FullSample full = sample_full(tree, RateModel::cfn(), 300, 7);
  const Alignment a = sample_alignment(tree, RateModel::cfn(), 300, 7);
  const Alignment projected = leaf_alignment(tree, full);
  EXPECT_EQ(a.states, projected.states);
  for (int leaf = 0; leaf < 4; ++leaf)
    for (std::size_t i = 0; i < 300; ++i) ASSERT_EQ(a.state(leaf, i), full.state(tree.leaf(leaf), i));
}

TEST(Simulator, SigmaViewCfn) {
  const std::vector<std::uint8_t> states{0, 1, 1, 0};
  const std::vector<double> s = sigma_view(states, RateModel::cfn());
  EXPECT_EQ(s, (std::vector<double>{1, -1, -1, 1}));
}

TEST(Simulator, SigmaMomentsMatchModel) {
  const Phylogeny tree = parse_phylogeny("((0:0.2,1:0.1):0.15,(2:0.3,3:0.1):0.1);");
  const RateModel m = RateModel::binary_asymmetric(0.7);
  const std::size_t k = 100000;
  const Alignment a = sample_alignment(tree, m, k, 17);
  const std::vector<double> s0 = sigma_view(a.sequence(0), m);
  const std::vector<double> s2 = sigma_view(a.sequence(2), m);
  const double mean = std::accumulate(s0.begin(), s0.end(), 0.0) / static_cast<double>(k);
  // Var[sigma] = sum pi nu^2 = 1.
  EXPECT_NEAR(mean, 0.0, 3.0 / std::sqrt(static_cast<double>(k)));
  std::vector<double> prod(k);
  for (std::size_t i = 0; i < k; ++i) prod[i] = s0[i] * s2[i];
  const double pm = std::accumulate(prod.begin(), prod.end(), 0.0) / static_cast<double>(k);
  double var = 0.0;
  for (double x : prod) var += (x - pm) * (x - pm);
  var /= static_cast<double>(k - 1);
  EXPECT_NEAR(pm, std::exp(-(0.2 + 0.15 + 0.1 + 0.3)), 3.0 * std::sqrt(var / static_cast<double>(k)));
}

TEST(Simulator, DumpRoundTrip) {
  const Alignment a = sample_alignment(Phylogeny::homogeneous(2, 0.2), RateModel::cfn(), 37, 1);
  std::stringstream ss;
  write_alignment(ss, a);
  const Alignment b = read_alignment(ss);
  EXPECT_EQ(b.num_leaves, 4u);
  EXPECT_EQ(b.num_sites, 37u);
  EXPECT_EQ(b.states, a.states);
}

TEST(Simulator, DumpRejectsRaggedRows) {
  std::stringstream ragged("0 1 0\n1 0\n");
  EXPECT_THROW(read_alignment(ragged), ValidationError);
  std::stringstream junk("0 x 0\n");
  EXPECT_THROW(read_alignment(junk), ValidationError);
}

}  // namespace
}  // namespace kslog
