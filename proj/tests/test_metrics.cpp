#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "nlc/metrics.hpp"
#include "support.hpp"

using namespace nlc;
using namespace nlc::testing;

namespace {

// Per-node 0/1 membership table, cover[k][i].
using Table = std::vector<std::vector<bool>>;

Table table_of(const Cover& c) {
  Table t(c.sets.size(), std::vector<bool>(c.n, false));
  for (std::size_t k = 0; k < c.sets.size(); ++k)
    for (NodeId i : c.sets[k]) t[k][i] = true;
  return t;
}

double h(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// H(X_k | Y) with the negative-correlation guard, by counting joint cells.
double conditional(const std::vector<bool>& x, const Table& ys) {
  const double n = static_cast<double>(x.size());
  double px = 0.0;
  for (bool b : x) px += b;
  const double hx = h(px / n) + h(1.0 - px / n);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : ys) {
    double c11 = 0, c10 = 0, c01 = 0, c00 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) (x[i] ? (y[i] ? c11 : c10) : (y[i] ? c01 : c00)) += 1.0;
    const double a = c00 / n, b = c01 / n, c = c10 / n, d = c11 / n;
    if (h(a) + h(d) < h(b) + h(c)) continue;
    const double hy = h(b + d) + h(a + c);
    best = std::min(best, h(a) + h(b) + h(c) + h(d) - hy);
  }
  return std::isinf(best) ? hx : best;
}

double oracle_enmi(const Cover& xc, const Cover& yc) {
  const Table x = table_of(xc), y = table_of(yc);
  auto entropy = [](const Table& t) {
    double s = 0.0;
    for (const auto& row : t) {
      double p = 0.0;
      for (bool b : row) p += b;
      p /= static_cast<double>(row.size());
      s += h(p) + h(1.0 - p);
    }
    return s;
  };
  double hxy = 0.0, hyx = 0.0;
  for (const auto& row : x) hxy += conditional(row, y);
  for (const auto& row : y) hyx += conditional(row, x);
  const double hx = entropy(x), hy = entropy(y);
  const double denom = std::max(hx, hy);
  if (denom == 0.0) return -1.0;  // handled by the caller
  return 0.5 * (hx - hxy + hy - hyx) / denom;
}

Cover random_cover(std::mt19937_64& rng, std::size_t n, std::size_t c, double overlap) {
  std::uniform_int_distribution<std::size_t> kd(0, c - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<NodeId>> sets(c);
  for (NodeId i = 0; i < n; ++i) {
    sets[kd(rng)].push_back(i);
    if (u(rng) < overlap) sets[kd(rng)].push_back(i);
  }
  std::erase_if(sets, [](const auto& s) { return s.empty(); });
  return make_cover(n, sets);
}

}  // namespace

TEST(Conductance, Examples) {
  const Graph cycle = unweighted(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const NodeId half[] = {0, 1};
  EXPECT_DOUBLE_EQ(conductance(cycle, half), 0.5);
  const NodeId tri[] = {0, 1, 2};
  EXPECT_DOUBLE_EQ(conductance(two_triangles(), tri), 0.0);
}

TEST(Conductance, ErrorCases) {
  const Graph g = triangle();
  EXPECT_THROW(conductance(g, std::span<const NodeId>{}), UndefinedMetricError);
  const NodeId all[] = {0, 1, 2};
  EXPECT_THROW(conductance(g, all), UndefinedMetricError);
  // An isolated node alone has zero volume.
  const Graph iso(std::vector<std::string>{"a", "b", "c"}, {{0, 1, 1.0}});
  const NodeId lonely[] = {2};
  EXPECT_THROW(conductance(iso, lonely), UndefinedMetricError);
}

TEST(Conductance, MatchesBruteForceOnAllSubsets) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 4 + trial % 7;
    const Graph g = random_graph(rng, n, 0.4, trial % 2 == 0, trial % 3 == 0);
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
      std::vector<NodeId> s;
      std::vector<bool> in(n, false);
      for (NodeId i = 0; i < n; ++i)
        if ((mask >> i) & 1U) {
          s.push_back(i);
          in[i] = true;
        }
      const double expected = brute_force_conductance(g, in);
      EXPECT_NEAR(conductance(g, s), expected, 1e-12);
      // phi(S) = phi(V \ S)
      std::vector<NodeId> rest;
      for (NodeId i = 0; i < n; ++i)
        if (!in[i]) rest.push_back(i);
      EXPECT_NEAR(conductance(g, rest), expected, 1e-12);
    }
  }
}

TEST(Wac, EqualConductancesGiveThatValue) {
  const Graph cycle = unweighted(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const WacResult r = wac(cycle, {{0, 1}, {2, 3}});
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Wac, WeightsBySizeAndIgnoresOrder) {
  const ParsedGraph pg = load_graph(data_path("karate.gml"));
  std::vector<std::vector<NodeId>> comms{{0, 1, 2, 3, 7, 11, 12, 13, 17, 19, 21}, {4, 5, 6, 10, 16}, {8, 30, 32, 33}};
  const WacResult a = wac(pg.graph, comms);
  double num = 0.0, den = 0.0;
  for (const auto& c : comms) {
    num += static_cast<double>(c.size()) * conductance(pg.graph, c);
    den += static_cast<double>(c.size());
  }
  EXPECT_NEAR(a.value, num / den, 1e-12);
  std::reverse(comms.begin(), comms.end());
  EXPECT_NEAR(wac(pg.graph, comms).value, a.value, 1e-12);
}

TEST(Wac, WholeGraphCommunityWarns) {
  const WacResult r = wac(two_triangles(), {{0, 1, 2, 3, 4, 5}, {0, 1, 2}});
  EXPECT_DOUBLE_EQ(r.phi[0], 0.0);
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
}

TEST(Enmi, IdenticalCoversScoreOne) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Cover c = random_cover(rng, 30, 2 + trial % 5, 0.2);
    EXPECT_NEAR(enmi(c, c), 1.0, 1e-12);
  }
}

TEST(Enmi, AllNodesCommunityAgainstAPartitionScoresZero) {
  const Cover whole = make_cover(6, {{0, 1, 2, 3, 4, 5}});
  const Cover halves = make_cover(6, {{0, 1, 2}, {3, 4, 5}});
  EXPECT_NEAR(enmi(whole, halves), 0.0, 1e-12);
  EXPECT_NEAR(enmi(halves, whole), 0.0, 1e-12);
}

TEST(Enmi, BothDegenerateCovers) {
  const Cover whole = make_cover(4, {{0, 1, 2, 3}});
  EXPECT_DOUBLE_EQ(enmi(whole, whole), 1.0);
  // Duplicate sets collapse: the families are the same.
  const Cover twice = make_cover(4, {{0, 1, 2, 3}, {0, 1, 2, 3}});
  EXPECT_DOUBLE_EQ(enmi(whole, twice), 1.0);
  const Cover with_empty = make_cover(4, {{0, 1, 2, 3}, {}});
  EXPECT_DOUBLE_EQ(enmi(whole, with_empty), 0.0);
}

TEST(Enmi, MatchesCountingOracleAndIsSymmetric) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 8 + trial % 40;
    const Cover a = random_cover(rng, n, 2 + trial % 6, 0.3);
    const Cover b = random_cover(rng, n, 2 + (trial / 3) % 6, 0.1);
    const double v = enmi(a, b);
    EXPECT_NEAR(v, enmi(b, a), 1e-9);
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, 1.0 + 1e-12);
    const double expected = oracle_enmi(a, b);
    if (expected >= 0.0) {
      EXPECT_NEAR(v, expected, 1e-9) << "trial " << trial;
    }
  }
}

TEST(Enmi, InvariantToCommunityOrder) {
  std::mt19937_64 rng(6);
  const Cover a = random_cover(rng, 40, 5, 0.2), b = random_cover(rng, 40, 4, 0.2);
  std::vector<std::vector<NodeId>> rev(a.sets.rbegin(), a.sets.rend());
  EXPECT_NEAR(enmi(make_cover(40, rev), b), enmi(a, b), 1e-12);
}

TEST(Enrichment, ConstantOracleGivesOne) {
  SimilarityOracle mu(5);
  for (NodeId i = 0; i < 5; ++i)
    for (NodeId j = i + 1; j < 5; ++j) mu.add(i, j);
  EXPECT_DOUBLE_EQ(pair_enrichment(make_cover(5, {{0, 1, 2}, {2, 3, 4}}), mu), 1.0);
}

TEST(Enrichment, UndefinedCases) {
  SimilarityOracle mu(4);
  mu.add(0, 1);
  EXPECT_THROW(pair_enrichment(make_cover(4, {{0}, {1}, {2}, {3}}), mu), UndefinedMetricError);
  EXPECT_THROW(pair_enrichment(make_cover(4, {{0, 1}, {2, 3}}), SimilarityOracle(4)), UndefinedMetricError);
}

TEST(Enrichment, MatchesBruteForceAndIgnoresLabels) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 8;
    SimilarityOracle mu(n);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j)
        if (u(rng) < 0.4) mu.add(i, j);
    mu.add(0, 1);
    const Cover cover = random_cover(rng, n, 2, 0.3);
    bool has_pair = false;
    for (const auto& s : cover.sets) has_pair |= s.size() > 1;
    if (!has_pair) continue;
    const double v = pair_enrichment(cover, mu);
    EXPECT_NEAR(v, brute_force_enrichment(cover, mu), 1e-12);

    // Relabel nodes by reversal.
    SimilarityOracle rmu(n);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j)
        if (mu(i, j)) rmu.add(static_cast<NodeId>(n - 1 - i), static_cast<NodeId>(n - 1 - j));
    std::vector<std::vector<NodeId>> rsets;
    for (const auto& s : cover.sets) {
      rsets.emplace_back();
      for (NodeId i : s) rsets.back().push_back(static_cast<NodeId>(n - 1 - i));
    }
    EXPECT_NEAR(pair_enrichment(make_cover(n, rsets), rmu), v, 1e-12);
  }
}

TEST(Oracle, SymmetricWithoutSelfPairs) {
  SimilarityOracle mu(3);
  mu.add(2, 0);
  mu.add(1, 1);
  EXPECT_TRUE(mu(0, 2));
  EXPECT_TRUE(mu(2, 0));
  EXPECT_FALSE(mu(1, 1));
  EXPECT_EQ(mu.positive_pairs(), 1u);
}

TEST(Loaders, SimilarityOracleSkipsUnknownLabels) {
  const Graph g = example_network();
  std::istringstream in("# pairs\n1 2\n3 99   # unknown\n\n14 1\n");
  const LoadedOracle lo = load_similarity_oracle(in, g);
  EXPECT_EQ(lo.oracle.positive_pairs(), 2u);
  EXPECT_TRUE(lo.oracle(static_cast<NodeId>(g.find("14")), static_cast<NodeId>(g.find("1"))));
  EXPECT_EQ(lo.warnings.size(), 1u);
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(load_similarity_oracle(bad, g), ParseError);
}

TEST(Loaders, ReferenceCoverAllowsOverlapAndMultiWordNames) {
  const Graph g = example_network();
  std::istringstream in("1 Big East\n2 Big East\n5 Big East\n5 SEC\n6 SEC\nzz SEC\n");
  const ReferenceCover rc = load_reference_cover(in, g);
  EXPECT_EQ(rc.names, (std::vector<std::string>{"Big East", "SEC"}));
  EXPECT_EQ(rc.cover.sets[0].size(), 3u);
  EXPECT_EQ(rc.cover.sets[1].size(), 2u);
  EXPECT_EQ(rc.warnings.size(), 1u);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(load_reference_cover(empty, g), ParseError);
}

TEST(Loaders, FootballConferencesLoad) {
  const ParsedGraph pg = load_graph(data_path("football.gml"));
  std::ifstream in(data_path("football_conferences.txt"));
  const ReferenceCover rc = load_reference_cover(in, pg.graph);
  EXPECT_EQ(rc.cover.num_communities(), 12u);
  EXPECT_TRUE(rc.warnings.empty());
}
