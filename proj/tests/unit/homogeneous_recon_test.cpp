#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kslog/distance.hpp"
#include "kslog/general_recon.hpp"
#include "kslog/homogeneous_recon.hpp"
#include "kslog/neighbor_joining.hpp"
#include "kslog/newick.hpp"
#include "kslog/quartet.hpp"
#include "kslog/simulator.hpp"
#include "kslog/tree_generators.hpp"
#include "kslog/wpgma.hpp"

namespace kslog {
namespace {

QuartetDistances exact_quartet(const Phylogeny& t, const DeepParams& p) {
  const DistanceTable d = oracle_distance_table(t);
  auto v = [&](int a, int b) { return distorted_metric(d, Clade::leaf(a), Clade::leaf(b), p); };
  return {v(0, 1), v(0, 2), v(0, 3), v(1, 2), v(1, 3), v(2, 3)};
}

TEST(DeepFourPoint, ExactSplits) {
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  const Phylogeny ab = parse_phylogeny("((0:0.2,1:0.2):0.05,(2:0.2,3:0.2):0.05);");
  const QuartetOutcome q = deep_four_point(exact_quartet(ab, p), p.f);
  EXPECT_EQ(q.kind, QuartetKind::split);
  EXPECT_EQ(q.pairing, 0);
  const Phylogeny ac = parse_phylogeny("((0:0.2,2:0.2):0.1,(1:0.2,3:0.2):0.1);");
  EXPECT_EQ(deep_four_point(exact_quartet(ac, p), p.f).pairing, 1);
  const Phylogeny ad = parse_phylogeny("((0:0.2,3:0.2):0.1,(1:0.2,2:0.2):0.1);");
  EXPECT_EQ(deep_four_point(exact_quartet(ad, p), p.f).pairing, 2);
}

TEST(DeepFourPoint, InfiniteMeansFar) {
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  QuartetDistances d = exact_quartet(parse_phylogeny("((0:0.2,1:0.2):0.05,(2:0.2,3:0.2):0.05);"), p);
  d.bd = DistortedValue::infinite(p.delta);
  EXPECT_EQ(deep_four_point(d, p.f).kind, QuartetKind::far);
}

TEST(DeepFourPoint, StarIsAmbiguous) {
  const DistortedValue x = DistortedValue::at(8, 0.05);
  EXPECT_EQ(deep_four_point({x, x, x, x, x, x}, 0.1).kind, QuartetKind::ambiguous);
}

TEST(DeepFourPoint, GapMustExceedHalfF) {
  // Internal edge exactly f/2 on the grid: gap f/2 is not enough.
  const DistortedValue ab = DistortedValue::at(8, 0.05), cross = DistortedValue::at(9, 0.05);
  EXPECT_EQ(deep_four_point({ab, cross, cross, cross, cross, ab}, 0.1).kind, QuartetKind::ambiguous);
  const DistortedValue far = DistortedValue::at(10, 0.05);
  EXPECT_EQ(deep_four_point({ab, far, far, far, far, ab}, 0.1).kind, QuartetKind::split);
}

TEST(HomogeneousRecon, OracleQuartetAndWeights) {
  const Phylogeny t = Phylogeny::homogeneous(2, 0.25);
  const DeepParams p = DeepParams::defaults(0.05, 0.25, 0.25);
  const ReconstructionResult r = reconstruct_homogeneous(oracle_distance_table(t), p);
  EXPECT_EQ(rf_distance(r.topology, UnrootedTopology::from_phylogeny(t)), 0);
  int pendant = 0;
  for (std::size_t v = 0; v < r.labels.size(); ++v) {
    if (r.labels[v] < 0) continue;
    EXPECT_NEAR(std::exp(-r.lengths[v]), std::exp(-0.25), 1e-12);
    ++pendant;
  }
  EXPECT_EQ(pendant, 4);
  EXPECT_EQ(r.diagnostics.at("status"), "ok");
}

TEST(HomogeneousRecon, OracleAlternatingLengths) {
  const Phylogeny t = Phylogeny::homogeneous(3, [](NodeId v) { return v % 2 ? 0.1 : 0.3; });
  const DeepParams p = DeepParams::defaults(0.1, 0.1, 0.3);
  const ReconstructionResult r = reconstruct_homogeneous(oracle_distance_table(t), p);
  EXPECT_EQ(rf_distance(r.topology, UnrootedTopology::from_phylogeny(t)), 0);
}

TEST(HomogeneousRecon, OracleRandomGridTrees) {
  std::mt19937_64 rng(21);
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  for (int rep = 0; rep < 10; ++rep) {
    const Phylogeny t = random_homogeneous(5, grid_length_law(0.1, 0.3, 0.05), rng);
    const ReconstructionResult r = reconstruct_homogeneous(oracle_distance_table(t), p);
    EXPECT_EQ(rf_distance(r.topology, UnrootedTopology::from_phylogeny(t)), 0);
    // Non-root edges are recovered exactly.
    const Phylogeny est = r.rooted_estimate();
    for (int a = 0; a < 32; ++a) EXPECT_NEAR(est.length(est.leaf(a)), t.length(t.leaf(a)), 1e-9);
  }
}

TEST(HomogeneousRecon, FarPairsAreNotCherries) {
  // Some non-sibling leaf pairs here lie just inside the diameter threshold
  // while every quartet separating them has an infinite entry; only the
  // 2g bound on sibling distance keeps them out of the cherries.
  const Phylogeny t = parse_phylogeny(
      "(((((0:0.25,1:0.25):0.1,(2:0.25,3:0.1):0.25):0.25,((4:0.1,5:0.15):0.3,(6:0.15,7:0.15):0.2):0.2):0.3,(((8:0.15,9:0.3):0.2,(10:0.25,11:0.3):0.1):0.15,((12:0.1,13:0.2):0.2,(14:0.3,15:0.2):0.3):0.25):0.25):0.3,((((16:0.2,17:0.3):0.15,(18:0.1,19:0.3):0.3):0.15,((20:0.2,21:0.25):0.25,(22:0.25,23:0.2):0.25):0.2):0.1,(((24:0.2,25:0.2):0.3,(26:0.15,27:0.3):0.2):0.3,((28:0.2,29:0.15):0.15,(30:0.1,31:0.2):0.1):0.2):0.1):0.3);");
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  const ReconstructionResult r = reconstruct_homogeneous(oracle_distance_table(t), p);
  EXPECT_EQ(rf_distance(r.topology, UnrootedTopology::from_phylogeny(t)), 0);
}

TEST(HomogeneousRecon, SampledDataAtLargeK) {
  const Phylogeny t = Phylogeny::homogeneous(4, 0.25);
  const DeepParams p = DeepParams::defaults(0.05, 0.25, 0.25);
  const RateModel m = RateModel::cfn();
  int ok = 0;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const DistanceTable d = distance_table(sample_alignment(t, m, 20000, 8, rep), m, Estimator::eigen);
    ok += rf_distance(reconstruct_homogeneous(d, p).topology, UnrootedTopology::from_phylogeny(t)) == 0;
  }
  EXPECT_EQ(ok, 5);
}

TEST(HomogeneousRecon, DiagnosticsPerLevel) {
  const Phylogeny t = Phylogeny::homogeneous(3, 0.2);
  const ReconstructionResult r =
      reconstruct_homogeneous(oracle_distance_table(t), DeepParams::defaults(0.05, 0.2, 0.2));
  const auto& levels = r.diagnostics.at("levels");
  ASSERT_EQ(levels.size(), 2u);  // 8 -> 4 -> 2 vertices; the last two are joined at the root
  EXPECT_EQ(levels[0].at("vertices"), 8);
  EXPECT_EQ(levels[0].at("cherries"), 4);
  EXPECT_EQ(levels[1].at("vertices"), 4);
}

TEST(HomogeneousRecon, FailureCarriesDiagnostics) {
  const Phylogeny t = Phylogeny::homogeneous(4, 0.25);
  const RateModel m = RateModel::cfn();
  const DeepParams p = DeepParams::defaults(0.05, 0.25, 0.25);
  int failures = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const DistanceTable d = distance_table(sample_alignment(t, m, 30, 1, rep), m, Estimator::eigen);
    try {
      reconstruct_homogeneous(d, p);
    } catch (const ReconstructionFailure& e) {
      ++failures;
      EXPECT_EQ(e.diagnostics().at("status"), "failed");
      EXPECT_TRUE(e.diagnostics().contains("failure"));
    }
  }
  EXPECT_GT(failures, 0);
}

TEST(HomogeneousRecon, RejectsNonPowerOfTwo) {
  const Phylogeny t = parse_phylogeny("((0:0.2,1:0.2):0.2,2:0.2);");
  EXPECT_THROW(reconstruct_homogeneous(oracle_distance_table(t), DeepParams::defaults(0.05, 0.2, 0.2)),
               ValidationError);
}

TEST(AllAlgorithms, AgreeOnFourLeaves) {
  const DeepParams p = DeepParams::defaults(0.05, 0.1, 0.3);
  for (const char* s : {"((0:0.2,1:0.1):0.1,(2:0.3,3:0.2):0.1);", "((0:0.2,2:0.2):0.1,(1:0.2,3:0.2):0.1);",
                        "((0:0.1,3:0.1):0.15,(1:0.1,2:0.1):0.15);"}) {
    const Phylogeny t = parse_phylogeny(s);
    const DistanceTable exact = oracle_distance_table(t);
    const QuartetOutcome q = deep_four_point(exact_quartet(t, p), p.f);
    ASSERT_EQ(q.kind, QuartetKind::split);
    const UnrootedTopology answer = parse_topology(q.pairing == 0   ? "((0,1),(2,3));"
                                                   : q.pairing == 1 ? "((0,2),(1,3));"
                                                                    : "((0,3),(1,2));");
    EXPECT_EQ(rf_distance(reconstruct_homogeneous(exact, p).topology, answer), 0) << s;
    EXPECT_EQ(rf_distance(forest_reconstruct(exact, p).topology, answer), 0) << s;
    EXPECT_EQ(rf_distance(neighbor_joining(exact).topology, answer), 0) << s;
    EXPECT_EQ(rf_distance(wpgma(oracle_uncorrected_table(t)).topology, answer), 0) << s;
  }
}

}  // namespace
}  // namespace kslog
