#pragma once

// Fixtures and brute-force oracles shared by the test binaries. Oracles here
// use dense loops over node pairs and never call into the code they check.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nlc/graph.hpp"
#include "nlc/metrics.hpp"
#include "nlc/model.hpp"

namespace nlc::testing {

inline std::string data_path(const std::string& name) { return std::string(NLC_DATA_DIR) + "/" + name; }

inline bool data_available(const std::string& name) { return std::ifstream(data_path(name)).good(); }

inline Graph make_graph(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<Edge> raw;
  for (auto [u, v, w] : edges) raw.push_back({std::min(u, v), std::max(u, v), w});
  return Graph(std::move(labels), raw);
}

inline Graph unweighted(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::tuple<NodeId, NodeId, double>> e;
  for (auto [u, v] : edges) e.emplace_back(u, v, 1.0);
  return make_graph(n, e);
}

inline Graph triangle() { return unweighted(3, {{0, 1}, {1, 2}, {0, 2}}); }

inline Graph two_triangles() { return unweighted(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

inline Graph clique(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return unweighted(n, e);
}

/// The 14-node example network: two overlapping 5-cliques sharing node 5,
/// a 4-clique joined to node 10, and the edge 9-10. Labels are "1".."14".
inline Graph example_network() {
  std::vector<std::pair<NodeId, NodeId>> e;
  auto add_clique = [&](std::vector<NodeId> nodes) {
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = a + 1; b < nodes.size(); ++b) e.emplace_back(nodes[a] - 1, nodes[b] - 1);
  };
  add_clique({1, 2, 3, 4, 5});
  add_clique({5, 6, 7, 8, 9});
  add_clique({11, 12, 13, 14});
  for (NodeId j : {11, 12, 13, 14}) e.emplace_back(9, j - 1);
  e.emplace_back(8, 9);
  std::vector<std::string> labels;
  for (int i = 1; i <= 14; ++i) labels.push_back(std::to_string(i));
  std::vector<Edge> raw;
  for (auto [u, v] : e) raw.push_back({u, v, 1.0});
  return Graph(std::move(labels), raw);
}

/// Random graph on n nodes with edge probability p; every node gets at least
/// one edge. Weights are 1 or drawn from {1, 2, 3} when `weighted`.
inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p, bool weighted,
                          bool self_loops = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> wdist(1, 3);
  std::vector<std::tuple<NodeId, NodeId, double>> e;
  std::vector<bool> touched(n, false);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + (self_loops ? 0 : 1); j < n; ++j)
      if (u(rng) < p) {
        e.emplace_back(i, j, weighted ? wdist(rng) : 1.0);
        touched[i] = touched[j] = true;
      }
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  for (NodeId i = 0; i < n; ++i) {
    if (touched[i]) continue;
    NodeId j = pick(rng);
    while (j == i) j = pick(rng);
    e.emplace_back(i, j, weighted ? wdist(rng) : 1.0);
    touched[i] = touched[j] = true;
  }
  return make_graph(n, e);
}

/// Dense symmetric adjacency with A_ii = 2 w_ii.
inline std::vector<std::vector<double>> dense_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) {
      a[e.u][e.u] += 2.0 * e.w;
    } else {
      a[e.u][e.v] += e.w;
      a[e.v][e.u] += e.w;
    }
  }
  return a;
}

/// sum over ordered pairs of A_ij log(sum_k d_ik d_jk / D_k) - sum_k D_k.
inline double brute_force_log_likelihood(const Graph& g, const ModelParams& p) {
  const auto a = dense_adjacency(g);
  const std::size_t n = g.num_nodes(), c = p.num_communities();
  std::vector<double> total(c, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < c; ++k) total[k] += p(i, k);
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j] == 0.0) continue;
      double w = 0.0;
      for (std::size_t k = 0; k < c; ++k)
        if (total[k] > 0.0) w += p(i, k) * p(j, k) / total[k];
      ll += a[i][j] * std::log(w);
    }
  for (double t : total) ll -= t;
  return ll;
}

/// Standard two-level map equation for a partition (one module per node),
/// from the stationary distribution p_i = d_i / 2W and module exit flows.
inline double partition_map_equation(const Graph& g, const std::vector<std::size_t>& module) {
  const auto a = dense_adjacency(g);
  const std::size_t n = g.num_nodes();
  std::size_t modules = 0;
  for (std::size_t m : module) modules = std::max(modules, m + 1);
  double volume = 0.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
    volume += deg[i];
  }
  auto plogp = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
  std::vector<double> exit(modules, 0.0), flow(modules, 0.0);
  double node_terms = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = deg[i] / volume;
    flow[module[i]] += pi;
    node_terms += plogp(pi);
    for (std::size_t j = 0; j < n; ++j)
      if (module[j] != module[i]) exit[module[i]] += a[i][j] / volume;
  }
  double q = 0.0, exit_terms = 0.0, total_terms = 0.0;
  for (std::size_t m = 0; m < modules; ++m) {
    q += exit[m];
    exit_terms += plogp(exit[m]);
    total_terms += plogp(exit[m] + flow[m]);
  }
  return plogp(q) - 2.0 * exit_terms - node_terms + total_terms;
}

/// Cut weight between s and its complement by enumerating every node pair.
inline double brute_force_conductance(const Graph& g, const std::vector<bool>& in) {
  const auto a = dense_adjacency(g);
  double cut = 0.0, vol_in = 0.0, vol_out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      (in[i] ? vol_in : vol_out) += a[i][j];
      if (in[i] && !in[j]) cut += a[i][j];
    }
  return cut / std::min(vol_in, vol_out);
}

/// Overlapping map equation from dense state-transition matrices. `member`
/// lists each node's communities; communities are 0..c-1.
struct DenseMapResult {
  std::vector<std::vector<double>> rates;  // rates[i][position in member[i]]
  double L = 0.0;
};

inline DenseMapResult dense_overlapping_map_equation(const Graph& g,
                                                     const std::vector<std::vector<std::size_t>>& member,
                                                     std::size_t c) {
  const auto a = dense_adjacency(g);
  const std::size_t n = a.size();
  std::vector<double> deg(n, 0.0);
  double volume = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
    volume += deg[i];
  }
  std::vector<std::pair<std::size_t, std::size_t>> states;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k : member[i]) states.emplace_back(i, k);
  const std::size_t m = states.size();
  auto contains = [&](std::size_t i, std::size_t k) {
    for (std::size_t x : member[i])
      if (x == k) return true;
    return false;
  };
  std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));  // t[to][from]
  for (std::size_t from = 0; from < m; ++from) {
    const auto [j, s] = states[from];
    for (std::size_t to = 0; to < m; ++to) {
      const auto [i, k] = states[to];
      if (a[j][i] == 0.0) continue;
      double delta = 0.0;
      if (contains(i, s))
        delta = (k == s) ? 1.0 : 0.0;
      else
        delta = 1.0 / static_cast<double>(member[i].size());
      t[to][from] = a[j][i] / deg[j] * delta;
    }
  }
  std::vector<double> p(m), next(m);
  for (std::size_t x = 0; x < m; ++x)
    p[x] = deg[states[x].first] / volume / static_cast<double>(member[states[x].first].size());
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double change = 0.0;
    for (std::size_t to = 0; to < m; ++to) {
      double v = 0.0;
      for (std::size_t from = 0; from < m; ++from) v += t[to][from] * p[from];
      next[to] = v;
      change = std::max(change, std::abs(v - p[to]));
    }
    for (std::size_t x = 0; x < m; ++x) p[x] = 0.5 * (p[x] + next[x]);
    if (change < 1e-14) break;
  }
  double total = 0.0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;

  DenseMapResult out;
  out.rates.resize(n);
  std::vector<double> exit(c, 0.0), inside(c, 0.0);
  std::vector<std::vector<double>> mass(c);
  for (std::size_t x = 0; x < m; ++x) {
    const auto [i, k] = states[x];
    out.rates[i].push_back(p[x]);
    inside[k] += p[x];
    mass[k].push_back(p[x]);
    double leave = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j] > 0.0 && !contains(j, k)) leave += a[i][j] / deg[i];
    exit[k] += p[x] * leave;
  }
  auto entropy = [](const std::vector<double>& xs) {
    double sum = 0.0, h = 0.0;
    for (double x : xs) sum += x;
    if (sum <= 0.0) return 0.0;
    for (double x : xs)
      if (x > 0.0) h -= x / sum * std::log2(x / sum);
    return h;
  };
  double q = 0.0;
  for (double e : exit) q += e;
  out.L = q * entropy(exit);
  for (std::size_t k = 0; k < c; ++k) {
    std::vector<double> codebook = mass[k];
    codebook.push_back(exit[k]);
    out.L += (exit[k] + inside[k]) * entropy(codebook);
  }
  return out;
}

/// Mean mu over within-community pairs over mean mu over all pairs, by
/// testing every node pair against every set.
inline double brute_force_enrichment(const Cover& cover, const SimilarityOracle& mu) {
  const std::size_t n = cover.n;
  double within = 0.0, within_pairs = 0.0, all = 0.0, all_pairs = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      all += mu(i, j);
      all_pairs += 1.0;
      bool together = false;
      for (const auto& s : cover.sets)
        together |= std::binary_search(s.begin(), s.end(), i) && std::binary_search(s.begin(), s.end(), j);
      if (together) {
        within += mu(i, j);
        within_pairs += 1.0;
      }
    }
  return (within / within_pairs) / (all / all_pairs);
}

}  // namespace nlc::testing
