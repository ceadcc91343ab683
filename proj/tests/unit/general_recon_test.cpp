#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kslog/distance.hpp"
#include "kslog/general_recon.hpp"
#include "kslog/homogeneous_recon.hpp"
#include "kslog/oracle_setup.hpp"
#include "kslog/simulator.hpp"
#include "kslog/tree_generators.hpp"
#include "test_support.hpp"

namespace kslog {
namespace {

TEST(DistortedMetricRoutine, DanglingCherries) {
  // Cherries {0,1} and {2,3} whose parents are 0.6 apart.
  const Phylogeny t = parse_phylogeny(
      "(((0:0.1,1:0.2):0.3,(2:0.15,3:0.1):0.3):0.1,((4:0.1,5:0.1):0.1,(6:0.1,7:0.1):0.1):0.1);");
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  const DistanceTable exact = oracle_distance_table(t);
  const SubtreeHandle h1 = handle_from_tree(t, {t.parent(t.leaf(0)), {0, 1}}, p.delta);
  const SubtreeHandle h2 = handle_from_tree(t, {t.parent(t.leaf(2)), {2, 3}}, p.delta);
  const DistortedValue u = distorted_metric_routine(h1, h2, table_oracle(exact, p), p.delta);
  ASSERT_TRUE(u.finite());
  EXPECT_EQ(*u.index, 12);
  EXPECT_NEAR(u.value(), 0.6, 1e-12);
}

TEST(DistortedMetricRoutine, LeavesReduceToTheTable) {
  const Phylogeny t = Phylogeny::homogeneous(2, 0.2);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  const DistortedValue u = distorted_metric_routine(SubtreeHandle::leaf(0), SubtreeHandle::leaf(3),
                                                    table_oracle(oracle_distance_table(t), p), p.delta);
  EXPECT_EQ(*u.index, 16);
}

TEST(DistortedMetricRoutine, AnyInfiniteGivesInfinite) {
  const Phylogeny t = Phylogeny::homogeneous(3, 0.2);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  const DistanceTable exact = oracle_distance_table(t);
  const SubtreeHandle h1 = handle_from_tree(t, {t.parent(t.leaf(0)), {0, 1}}, p.delta);
  const SubtreeHandle h2 = handle_from_tree(t, {t.parent(t.leaf(2)), {2, 3}}, p.delta);
  const DistortedOracle base = table_oracle(exact, p);
  const DistortedOracle holed = [&](const Clade& a, const Clade& b) {
    if (a.min_label == 1 && b.min_label == 3) return DistortedValue::infinite(p.delta);
    return base(a, b);
  };
  EXPECT_TRUE(distorted_metric_routine(h1, h2, base, p.delta).finite());
  EXPECT_FALSE(distorted_metric_routine(h1, h2, holed, p.delta).finite());
}

TEST(DistortedMetricRoutine, MultipleTestCatchesOnePerturbedPair) {
  const Phylogeny t = Phylogeny::homogeneous(4, 0.2);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  const RootedSubtree s1{t.parent(t.parent(t.leaf(0))), {0, 8}};
  const RootedSubtree s2{t.parent(t.leaf(12)), {12, 14}};
  ASSERT_FALSE(dangling(t, s1, s2));
  const SubtreeHandle h1 = handle_from_tree(t, s1, p.delta);
  const SubtreeHandle h2 = handle_from_tree(t, s2, p.delta);
  const DistortedOracle base = table_oracle(oracle_distance_table(t), p);
  const DistortedValue plain = distorted_metric_routine(h1, h2, base, p.delta);
  if (plain.finite()) {
    EXPECT_NEAR(plain.value(), t.distance(s1.root, s2.root), 1e-9);
  }
  const DistortedOracle bumped = [&](const Clade& a, const Clade& b) {
    DistortedValue d = base(a, b);
    if (d.finite() && a.min_label == h1.y.min_label && b.min_label == h2.y.min_label) ++*d.index;
    return d;
  };
  EXPECT_FALSE(distorted_metric_routine(h1, h2, bumped, p.delta).finite());
}

TEST(DistortedMetricRoutine, RejectsSharedLeaves) {
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  const DistanceTable exact = oracle_distance_table(Phylogeny::homogeneous(2, 0.2));
  EXPECT_THROW(distorted_metric_routine(SubtreeHandle::leaf(1), SubtreeHandle::leaf(1), table_oracle(exact, p), p.delta),
               ValidationError);
}

TEST(DistortedMetricRoutine, SoundOnRandomSetups) {
  std::mt19937_64 rng(101);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  int finite = 0, dangling_checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const Phylogeny t = random_yule(12, grid_length_law(0.1, 0.3, 0.05), rng);
    const DistortedOracle dbar = table_oracle(oracle_distance_table(t), p);
    for (int draw = 0; draw < 10; ++draw) {
      const auto s1 = testing::random_legal_subtree(t, rng, {}, 5);
      if (!s1) continue;
      const auto s2 = testing::random_legal_subtree(t, rng, s1->leaves, 5);
      if (!s2 || !edge_disjoint(restrict_rooted(t, *s1), restrict_rooted(t, *s2))) continue;
      const SubtreeHandle h1 = handle_from_tree(t, *s1, p.delta), h2 = handle_from_tree(t, *s2, p.delta);
      const DistortedValue u = distorted_metric_routine(h1, h2, dbar, p.delta);
      const std::int64_t truth = grid_index(t.distance(s1->root, s2->root), p.delta);
      if (u.finite()) {
        ++finite;
        EXPECT_EQ(*u.index, truth);
      }
      const double reach = std::max({h1.y_length, h1.z_length, h2.y_length, h2.z_length}) * p.delta;
      if (reach <= p.g + 1e-9 && t.distance(s1->root, s2->root) < p.D && dangling(t, *s1, *s2)) {
        ++dangling_checked;
        EXPECT_TRUE(u.finite()) << to_newick(t) << " roots " << s1->root << "," << s2->root << " d(y1,y2)="
                                << dbar(h1.y, h2.y).value() << " d(y1,z2)=" << dbar(h1.y, h2.z).value()
                                << " d(z1,y2)=" << dbar(h1.z, h2.y).value() << " d(z1,z2)=" << dbar(h1.z, h2.z).value()
                                << " lens " << h1.y_length << "," << h1.z_length << "," << h2.y_length << ","
                                << h2.z_length << " tau " << t.distance(s1->root, s2->root);
      }
    }
  }
  EXPECT_GT(finite, 50);
  EXPECT_GT(dangling_checked, 20);
}

TEST(ForestRecon, MatchesHomogeneousDriverInOracleMode) {
  std::mt19937_64 rng(33);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  for (int rep = 0; rep < 20; ++rep) {
    const Phylogeny t = random_homogeneous(4, grid_length_law(0.1, 0.3, 0.05), rng);
    const DistanceTable exact = oracle_distance_table(t);
    const ReconstructionResult a = forest_reconstruct(exact, p);
    const ReconstructionResult b = reconstruct_homogeneous(exact, p);
    EXPECT_EQ(a.topology.to_newick(), b.topology.to_newick());
    EXPECT_EQ(rf_distance(a.topology, UnrootedTopology::from_phylogeny(t)), 0);
  }
}

TEST(ForestRecon, ConstantLengthHomogeneousOracle) {
  for (double len : {0.15, 0.25, 0.3}) {
    const Phylogeny t = Phylogeny::homogeneous(5, len);
    const DeepParams p = DeepParams::defaults(0.05, len, len);
    const ReconstructionResult r = forest_reconstruct(oracle_distance_table(t), p);
    EXPECT_EQ(rf_distance(r.topology, UnrootedTopology::from_phylogeny(t)), 0) << len;
  }
}

TEST(ForestRecon, MatchesHomogeneousDriverOnSampledData) {
  // Every child-pair value must round to the same grid point, so the noise
  // at leaf distance 6 * 0.15 has to stay well under delta / 2.
  const Phylogeny t = Phylogeny::homogeneous(4, 0.15);
  const DeepParams p = DeepParams::defaults(0.05, 0.15, 0.15);
  const RateModel m = RateModel::cfn();
  for (std::uint64_t rep = 0; rep < 3; ++rep) {
    const DistanceTable d = distance_table(sample_alignment(t, m, 200000, 19, rep), m, Estimator::eigen);
    EXPECT_EQ(forest_reconstruct(d, p).topology.to_newick(), reconstruct_homogeneous(d, p).topology.to_newick());
  }
}

TEST(ForestRecon, OracleCaterpillars) {
  std::mt19937_64 rng(8);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  for (int rep = 0; rep < 20; ++rep) {
    const Phylogeny t = caterpillar(6, grid_length_law(0.1, 0.3, 0.05), rng);
    const ReconstructionResult r = forest_reconstruct(oracle_distance_table(t), p);
    EXPECT_EQ(rf_distance(r.topology, UnrootedTopology::from_phylogeny(t)), 0) << to_newick(t);
  }
}

TEST(ForestRecon, OracleRandomTrees) {
  std::mt19937_64 rng(9);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  for (int rep = 0; rep < 20; ++rep) {
    const Phylogeny t = random_yule(16, grid_length_law(0.1, 0.3, 0.05), rng);
    const ReconstructionResult r = forest_reconstruct(oracle_distance_table(t), p);
    EXPECT_EQ(rf_distance(r.topology, UnrootedTopology::from_phylogeny(t)), 0) << to_newick(t);
    EXPECT_EQ(r.diagnostics.at("clamped_lengths"), 0);
  }
}

TEST(ForestRecon, FailureReportsForest) {
  const Phylogeny t = Phylogeny::homogeneous(4, 0.25);
  const RateModel m = RateModel::cfn();
  const DeepParams p = DeepParams::defaults(0.05, 0.25, 0.25);
  bool seen = false;
  for (std::uint64_t rep = 0; rep < 10 && !seen; ++rep) {
    try {
      forest_reconstruct(distance_table(sample_alignment(t, m, 50, 4, rep), m, Estimator::eigen), p);
    } catch (const ReconstructionFailure& e) {
      seen = true;
      EXPECT_GT(e.diagnostics().at("forest").size(), 3u);
    }
  }
  EXPECT_TRUE(seen);
}

}  // namespace
}  // namespace kslog
