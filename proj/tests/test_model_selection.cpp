#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "nlc/model_selection.hpp"
#include "support.hpp"

using namespace nlc;
using namespace nlc::testing;

namespace {

const Scheme kAll[] = {Scheme::Node, Scheme::Link, Scheme::Hybrid};

std::vector<std::size_t> leaf_sizes(const Bipartition& b) {
  std::vector<std::size_t> sizes;
  for (const auto& leaf : b.leaves) sizes.push_back(leaf.size());
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

void expect_leaves_partition(const Bipartition& b, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& leaf : b.leaves)
    for (NodeId i : leaf) ++seen[i];
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(seen[i], 1) << "node " << i;
}

}  // namespace

TEST(Scheme, StringRoundTrip) {
  for (Scheme s : kAll) EXPECT_EQ(scheme_from_string(to_string(s)), s);
  EXPECT_THROW(scheme_from_string("mixed"), std::invalid_argument);
}

TEST(CRange, DefaultsAndBounds) {
  SelectionOptions o;
  EXPECT_EQ(c_range(clique(5), o), (std::vector<std::size_t>{2, 3, 4, 5}));
  const ParsedGraph pg = load_graph(data_path("football.gml"));
  const auto r = c_range(pg.graph, o);
  EXPECT_EQ(r.front(), 2u);
  EXPECT_EQ(r.back(), 30u);
  o.c_min = 4;
  o.c_max = 3;
  EXPECT_THROW(c_range(pg.graph, o), std::invalid_argument);
}

TEST(Sweep, KarateSelectsThreeWithHybridNeverWorse) {
  const ParsedGraph pg = load_graph(data_path("karate.gml"));
  SelectionOptions o;
  o.c_max = 6;
  o.fit.seed = 42;
  const std::vector<std::size_t> cs = c_range(pg.graph, o);
  const std::vector<SweepRow> rows = sweep_c(pg.graph, cs, kAll, o);
  ASSERT_EQ(rows.size(), 5u);
  std::size_t best_c = 0;
  double best = 0.0;
  for (const SweepRow& row : rows) {
    ASSERT_FALSE(row.failed) << row.error;
    const double h = row.find(Scheme::Hybrid)->assignment.mdl;
    EXPECT_LE(h, row.find(Scheme::Node)->assignment.mdl + 1e-12);
    EXPECT_LE(h, row.find(Scheme::Link)->assignment.mdl + 1e-12);
    if (best_c == 0 || h < best) {
      best = h;
      best_c = row.c;
    }
  }
  EXPECT_EQ(best_c, 3u);
  EXPECT_NEAR(best, 4.2966, 0.01);

  const Selection s = select(pg.graph, Scheme::Hybrid, o);
  EXPECT_EQ(s.c, 3u);
  EXPECT_DOUBLE_EQ(s.report.L, best);
  EXPECT_TRUE(s.cover.covers_all());
}

TEST(Sweep, FailedRowsAreMarkedAndSkipped) {
  const Graph g = two_triangles();
  SelectionOptions o;
  o.restarts = 3;
  const std::size_t cs[] = {2, 0};
  const std::vector<SweepRow> rows = sweep_c(g, cs, kAll, o);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].c, 0u);
  EXPECT_TRUE(rows[0].failed);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_EQ(rows[0].find(Scheme::Node), nullptr);
  EXPECT_FALSE(rows[1].failed);
  EXPECT_NEAR(rows[1].find(Scheme::Hybrid)->assignment.mdl, std::log2(3.0), 1e-9);
}

TEST(Sweep, DeterministicForSeed) {
  const ParsedGraph pg = load_graph(data_path("karate.gml"));
  SelectionOptions o;
  o.c_max = 4;
  o.restarts = 10;
  o.fit.seed = 7;
  const auto cs = c_range(pg.graph, o);
  const auto a = sweep_c(pg.graph, cs, kAll, o);
  const auto b = sweep_c(pg.graph, cs, kAll, o);
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].fit.log_likelihood, b[r].fit.log_likelihood);
    EXPECT_EQ(a[r].find(Scheme::Hybrid)->assignment.flags, b[r].find(Scheme::Hybrid)->assignment.flags);
  }
}

TEST(Football, TwelveCommunitiesFormANodePartition) {
  const ParsedGraph pg = load_graph(data_path("football.gml"));
  SelectionOptions o;
  o.c_min = o.c_max = 12;
  o.fit.seed = 42;
  const Selection s = select(pg.graph, Scheme::Hybrid, o);
  EXPECT_EQ(s.c, 12u);
  EXPECT_EQ(std::count(s.assignment.flags.begin(), s.assignment.flags.end(), CommunityType::Node), 12);
  std::size_t members = 0;
  for (const auto& set : s.cover.sets) {
    EXPECT_FALSE(set.empty());
    members += set.size();
  }
  EXPECT_EQ(members, pg.graph.num_nodes());
}

TEST(Football, HybridEqualsNodeForModerateC) {
  const ParsedGraph pg = load_graph(data_path("football.gml"));
  SelectionOptions o;
  o.fit.seed = 42;
  const std::size_t cs[] = {4, 8, 11, 12, 14};
  for (const SweepRow& row : sweep_c(pg.graph, cs, kAll, o)) {
    ASSERT_FALSE(row.failed);
    EXPECT_NEAR(row.find(Scheme::Hybrid)->assignment.mdl, row.find(Scheme::Node)->assignment.mdl, 1e-12)
        << "c=" << row.c;
  }
}

TEST(Realize, ReproducesTheSearchedDescriptionLength) {
  const ParsedGraph pg = load_graph(data_path("karate.gml"));
  FitOptions fo;
  fo.seed = 3;
  const FitResult f = fit_best(pg.graph, 4, 10, fo).best;
  const Memberships m = memberships(f.params, pg.graph);
  const TypeAssignment t = greedy_type_search(m, pg.graph);
  const Selection s = realize(pg.graph, f, t.flags, Scheme::Hybrid);
  EXPECT_NEAR(s.report.L, t.mdl, 1e-12);
  EXPECT_EQ(s.structure.types, t.flags);
}

TEST(Bipartition, DisjointTrianglesGiveTwoLeaves) {
  const Graph g = two_triangles();
  const Bipartition b = recursive_bipartition(g);
  EXPECT_EQ(leaf_sizes(b), (std::vector<std::size_t>{3, 3}));
  EXPECT_EQ(b.depth, 1u);
  EXPECT_TRUE(b.root.split);
  expect_leaves_partition(b, 6);
}

TEST(Bipartition, CliqueIsNotSplit) {
  const Bipartition b = recursive_bipartition(clique(5));
  ASSERT_EQ(b.leaves.size(), 1u);
  EXPECT_EQ(b.leaves[0].size(), 5u);
  EXPECT_FALSE(b.root.split);
  EXPECT_EQ(b.depth, 0u);
}

TEST(Bipartition, MinSizeAndDepthBoundsHold) {
  const ParsedGraph pg = load_graph(data_path("football.gml"));
  BipartitionOptions o;
  o.fit.seed = 5;
  o.max_depth = 2;
  const Bipartition b = recursive_bipartition(pg.graph, o);
  EXPECT_LE(b.depth, 2u);
  EXPECT_LE(b.leaves.size(), 4u);
  expect_leaves_partition(b, pg.graph.num_nodes());

  BipartitionOptions big;
  big.fit.seed = 5;
  big.min_size = pg.graph.num_nodes() + 1;
  EXPECT_EQ(recursive_bipartition(pg.graph, big).leaves.size(), 1u);
}

TEST(Bipartition, KarateLeafCountIsStableUnderMdlStop) {
  const ParsedGraph pg = load_graph(data_path("karate.gml"));
  std::map<std::size_t, int> counts;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BipartitionOptions o;
    o.stop = StopRule::Mdl;
    o.fit.seed = seed;
    const Bipartition b = recursive_bipartition(pg.graph, o);
    expect_leaves_partition(b, pg.graph.num_nodes());
    EXPECT_GE(b.leaves.size(), 2u);
    EXPECT_LE(b.leaves.size(), 5u);
    ++counts[b.leaves.size()];
  }
  EXPECT_LE(counts.rbegin()->first - counts.begin()->first, 1u);
}

TEST(Bipartition, DeterministicForSeed) {
  const ParsedGraph pg = load_graph(data_path("karate.gml"));
  BipartitionOptions o;
  o.fit.seed = 11;
  EXPECT_EQ(recursive_bipartition(pg.graph, o).leaves, recursive_bipartition(pg.graph, o).leaves);
}

TEST(Bipartition, SplitsRecordTheirEvidence) {
  const Bipartition b = recursive_bipartition(two_triangles());
  EXPECT_GT(b.root.gain, 1e-4);
  EXPECT_GT(b.root.ll_two, b.root.ll_one);
  for (const HierarchyNode& child : b.root.children) EXPECT_FALSE(child.split);
}
