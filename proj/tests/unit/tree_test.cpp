#include <gtest/gtest.h>

#include <random>

#include "kslog/newick.hpp"
#include "kslog/subtree.hpp"
#include "kslog/topology.hpp"
#include "kslog/tree.hpp"
#include "kslog/tree_generators.hpp"
#include "test_support.hpp"

namespace kslog {
namespace {

std::vector<NodeId> leaf_nodes(const Phylogeny& t, std::initializer_list<int> labels) {
  std::vector<NodeId> out;
  for (int a : labels) out.push_back(t.leaf(a));
  return out;
}

TEST(Phylogeny, TwoLeafPathSum) {
  const Phylogeny t = parse_phylogeny("(0:0.1,1:0.1);");
  EXPECT_NEAR(t.distance(t.leaf(0), t.leaf(1)), 0.2, 1e-15);
}

TEST(Phylogeny, SelfDistanceIsZero) {
  const Phylogeny t = Phylogeny::homogeneous(3, 0.2);
  for (std::size_t v = 0; v < t.num_nodes(); ++v) EXPECT_EQ(t.distance(static_cast<NodeId>(v), static_cast<NodeId>(v)), 0.0);
}

TEST(Phylogeny, QuartetPathSums) {
  // ab|cd with pendant edges 0.2, internal edge 0.1 split as 0.05 + 0.05 at the root.
  const Phylogeny t = parse_phylogeny("((0:0.2,1:0.2):0.05,(2:0.2,3:0.2):0.05);");
  EXPECT_NEAR(t.distance(t.leaf(0), t.leaf(2)), 0.5, 1e-15);
  EXPECT_NEAR(t.distance(t.leaf(0), t.leaf(1)), 0.4, 1e-15);
}

TEST(Phylogeny, DistancesMatchIndependentWalk) {
  std::mt19937_64 rng(3);
  const Phylogeny t = random_yule(12, grid_length_law(0.1, 0.3, 0.05), rng);
  const Matrix d = vertex_distances(t);
  for (std::size_t u = 0; u < t.num_nodes(); ++u)
    for (std::size_t v = 0; v < t.num_nodes(); ++v)
      EXPECT_NEAR(d(u, v), testing::path_length(t, static_cast<NodeId>(u), static_cast<NodeId>(v)), 1e-12);
}

TEST(Phylogeny, RejectsBadInput) {
  EXPECT_THROW(Phylogeny({kNoNode, 0}, {0.0, 0.1}, {-1, 0}), ValidationError);  // unary root
  EXPECT_THROW(Phylogeny({kNoNode, 0, 0}, {0.0, -0.1, 0.1}, {-1, 0, 1}), ValidationError);
  EXPECT_THROW(Phylogeny({kNoNode, 0, 0}, {0.0, 0.1, 0.1}, {-1, 0, 2}), ValidationError);
}

TEST(Phylogeny, DeltaBranchModelCheck) {
  const Phylogeny t = Phylogeny::homogeneous(2, 0.25);
  EXPECT_NO_THROW(t.check_delta_branch_model(0.05, 0.25, 0.25));
  EXPECT_THROW(t.check_delta_branch_model(0.1, 0.1, 0.3), ValidationError);
  EXPECT_THROW(t.check_delta_branch_model(0.05, 0.3, 0.4), ValidationError);
}

TEST(Phylogeny, HomogeneousHeapOrder) {
  const Phylogeny t = Phylogeny::homogeneous(3, 0.1);
  EXPECT_EQ(t.num_leaves(), 8u);
  EXPECT_EQ(t.height(), 3);
  for (int a = 0; a < 8; ++a) EXPECT_EQ(t.depth(t.leaf(a)), 3);
  EXPECT_EQ(t.lca(t.leaf(0), t.leaf(1)), t.parent(t.leaf(0)));
}

TEST(Generators, GridLengthsStayOnGrid) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const Phylogeny t = random_yule(20, grid_length_law(0.1, 0.3, 0.05), rng);
    EXPECT_NO_THROW(t.check_delta_branch_model(0.05, 0.1, 0.3));
    const Phylogeny h = random_homogeneous(4, grid_length_law(0.1, 0.3, 0.05), rng);
    EXPECT_NO_THROW(h.check_delta_branch_model(0.05, 0.1, 0.3));
  }
}

TEST(Subtree, EdgeDisjointConfigurations) {
  // Eight leaves u1..u8 (labels 0..7) with {u1,u2,u3,u8} and {u4,..,u7} on
  // either side of the central edge.
  const Phylogeny t = parse_phylogeny("(((0:0.1,1:0.1):0.1,(2:0.1,7:0.1):0.1):0.1,((3:0.1,4:0.1):0.1,(5:0.1,6:0.1):0.1):0.1);");
  const auto a = restrict_to(t, leaf_nodes(t, {0, 1, 2, 7}));
  const auto b = restrict_to(t, leaf_nodes(t, {3, 4, 5, 6}));
  EXPECT_TRUE(edge_disjoint(a, b));
  const auto c = restrict_to(t, leaf_nodes(t, {0, 4, 5, 7}));
  const auto d = restrict_to(t, leaf_nodes(t, {1, 2, 3, 6}));
  EXPECT_FALSE(edge_disjoint(c, d));
}

TEST(Subtree, RestrictionContractsAndIsIdempotent) {
  const Phylogeny t = Phylogeny::homogeneous(3, 0.1);
  std::vector<NodeId> all;
  for (int a = 0; a < 8; ++a) all.push_back(t.leaf(a));
  const RestrictedTree r = restrict_to(t, all);
  EXPECT_EQ(r.vertices.size(), t.num_nodes() - 1);  // degree-2 root contracted
  EXPECT_EQ(r.edges.size(), r.vertices.size() - 1);
  const RestrictedTree again = restrict_to(t, r.vertices);
  EXPECT_EQ(again.vertices, r.vertices);
  EXPECT_EQ(again.edges, r.edges);

  const RestrictedTree pair = restrict_to(t, leaf_nodes(t, {0, 7}));
  EXPECT_EQ(pair.vertices.size(), 2u);
  EXPECT_EQ(pair.edges.size(), 1u);
  EXPECT_EQ(pair.span_edges.size(), 6u);
}

TEST(Subtree, LegalityAndDangling) {
  const Phylogeny t = Phylogeny::homogeneous(3, 0.1);
  const NodeId cherry01 = t.parent(t.leaf(0));
  const NodeId cherry23 = t.parent(t.leaf(2));
  EXPECT_TRUE(is_legal(t, {cherry01, {0, 1}}));
  EXPECT_TRUE(is_legal(t, {cherry01, {0, 2}}));  // cherry01 lies on the path
  EXPECT_FALSE(is_legal(t, {cherry01, {2, 3}}));
  EXPECT_TRUE(dangling(t, {cherry01, {0, 1}}, {cherry23, {2, 3}}));
  // {2, 4} hung from the ancestor of 0..3 points its root at the cherry
  // {0, 1}; a root on the edge between them satisfies both.
  const NodeId top = t.parent(cherry01);
  EXPECT_TRUE(is_legal(t, {top, {2, 4}}));
  EXPECT_TRUE(dangling(t, {cherry01, {0, 1}}, {top, {2, 4}}));
}

TEST(Subtree, RootsPointingApartAreNotDangling) {
  const Phylogeny t = Phylogeny::homogeneous(4, 0.1);
  // {0, 8} hung from the ancestor of 0..3 wants the root among {2, 3};
  // {12, 14} hung from the parent of 12 wants it at leaf 13.
  const RootedSubtree t1{t.parent(t.parent(t.leaf(0))), {0, 8}};
  const RootedSubtree t2{t.parent(t.leaf(12)), {12, 14}};
  ASSERT_TRUE(is_legal(t, t1));
  ASSERT_TRUE(is_legal(t, t2));
  EXPECT_TRUE(edge_disjoint(restrict_rooted(t, t1), restrict_rooted(t, t2)));
  EXPECT_FALSE(dangling(t, t1, t2));
}

TEST(Newick, ParsesQuartet) {
  const Phylogeny t = parse_phylogeny("((0:0.1,1:0.1):0.1,(2:0.1,3:0.1):0.1);");
  EXPECT_EQ(t.num_leaves(), 4u);
  const UnrootedTopology u = UnrootedTopology::from_phylogeny(t);
  const auto splits = u.splits();
  ASSERT_EQ(splits.size(), 1u);
  EXPECT_EQ(splits[0], make_split(std::vector<int>{0, 1}, 4));
}

TEST(Newick, RoundTripIsCanonical) {
  const std::string s = "((3:0.25,(1:0.1,0:0.2):0.3):0.1,2:0.05);";
  const Phylogeny t = parse_phylogeny(s);
  const std::string canon = to_newick(t);
  EXPECT_EQ(canon, "(((0:0.2,1:0.1):0.3,3:0.25):0.1,2:0.05);");
  EXPECT_EQ(to_newick(parse_phylogeny(canon)), canon);
}

TEST(Newick, UnrootedTopologyWithTrifurcation) {
  const UnrootedTopology u = parse_topology("((0,1),2,3);");
  EXPECT_EQ(u.num_leaves(), 4u);
  EXPECT_EQ(u.num_nodes(), 6u);
  for (std::size_t v = 4; v < u.num_nodes(); ++v) EXPECT_EQ(u.neighbors(static_cast<int>(v)).size(), 3u);
}

TEST(Newick, ErrorsCarryPosition) {
  try {
    parse_phylogeny("((0:0.1,1:0.1):0.1,(2:0.1,x:0.1):0.1);");
    FAIL();
  } catch (const NewickError& e) {
    EXPECT_GT(e.position(), 0u);
  }
  EXPECT_THROW(parse_phylogeny("((0:0.1,1:0.1)"), NewickError);
  EXPECT_THROW(parse_phylogeny("(0:0.1,1);"), NewickError);
}

TEST(Topology, RobinsonFoulds) {
  const auto ab_cd = parse_topology("((0,1),(2,3));");
  const auto ac_bd = parse_topology("((0,2),(1,3));");
  EXPECT_EQ(rf_distance(ab_cd, ab_cd), 0);
  EXPECT_EQ(rf_distance(ab_cd, ac_bd), 2);
  const auto cat = parse_topology("((((0,1),2),3),4);");
  const auto swapped = parse_topology("((((0,3),2),1),4);");
  EXPECT_GT(rf_distance(cat, swapped), 0);
  EXPECT_THROW(rf_distance(ab_cd, cat), ValidationError);
}

TEST(Topology, CanonicalNewickIgnoresRooting) {
  const auto a = UnrootedTopology::from_phylogeny(parse_phylogeny("((0:1,1:1):1,(2:1,3:1):1);"));
  const auto b = UnrootedTopology::from_phylogeny(parse_phylogeny("(0:1,(1:1,(2:1,3:1):1):1);"));
  EXPECT_EQ(a.to_newick(), b.to_newick());
  EXPECT_TRUE(a == b);
}

}  // namespace
}  // namespace kslog
