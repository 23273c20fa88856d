#include "nlc/map_equation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlc {

namespace {

// Position of k in a node's sorted community list, or -1.
std::ptrdiff_t position_of(std::span<const std::uint32_t> list, std::uint32_t k) {
  auto it = std::lower_bound(list.begin(), list.end(), k);
  return (it != list.end() && *it == k) ? it - list.begin() : -1;
}

double entropy_term(double x, double total) {
  if (x <= 0.0 || total <= 0.0) return 0.0;
  const double f = x / total;
  return -f * std::log2(f);
}

std::vector<std::size_t> state_offsets(const Cover& cover) {
  std::vector<std::size_t> off(cover.n + 1, 0);
  for (std::size_t i = 0; i < cover.n; ++i) off[i + 1] = off[i] + cover.of_node[i].size();
  return off;
}

}  // namespace

WalkWeights transition_weights(const Graph& g) {
  WalkWeights w;
  const std::size_t n = g.num_nodes();
  w.offsets.assign(n + 1, 0);
  for (NodeId i = 0; i < n; ++i) w.offsets[i + 1] = w.offsets[i] + g.neighbors(i).size();
  w.targets.reserve(w.offsets[n]);
  w.probs.reserve(w.offsets[n]);
  for (NodeId i = 0; i < n; ++i) {
    const double deg = g.weighted_degree(i);
    if (!(deg > 0.0))
      throw std::domain_error("node '" + g.label(i) + "' has zero degree; the walk is undefined");
    for (const Neighbor& nb : g.neighbors(i)) {
      w.targets.push_back(nb.node);
      w.probs.push_back(nb.weight / deg);
    }
  }
  return w;
}

double VisitRates::at(const Cover& cover, NodeId i, std::uint32_t k) const {
  const std::ptrdiff_t pos = position_of(cover.of_node.at(i), k);
  return pos < 0 ? 0.0 : rates[offsets[i] + static_cast<std::size_t>(pos)];
}

double VisitRates::total() const { return std::accumulate(rates.begin(), rates.end(), 0.0); }

VisitRates solve_visit_rates(const Graph& g, const Cover& cover, const SolverOptions& opts) {
  if (cover.n != g.num_nodes()) throw std::invalid_argument("cover size does not match the graph");
  if (!cover.covers_all()) throw std::invalid_argument("cover leaves some node unassigned");
  const WalkWeights walk = transition_weights(g);
  const std::vector<std::size_t> off = state_offsets(cover);
  const std::size_t states = off.back();

  // Sparse state-to-state transition matrix in source-major CSR.
  std::vector<std::size_t> row_start{0};
  std::vector<std::size_t> dst;
  std::vector<double> prob;
  row_start.reserve(states + 1);
  for (NodeId j = 0; j < g.num_nodes(); ++j) {
    const auto& mj = cover.of_node[j];
    for (std::uint32_t s : mj) {
      const auto targets = walk.targets_of(j);
      const auto probs = walk.probs_of(j);
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const NodeId i = targets[t];
        const auto& mi = cover.of_node[i];
        const std::ptrdiff_t pos = position_of(mi, s);
        if (pos >= 0) {
          dst.push_back(off[i] + static_cast<std::size_t>(pos));
          prob.push_back(probs[t]);
        } else {
          const double split = probs[t] / static_cast<double>(mi.size());
          for (std::size_t r = 0; r < mi.size(); ++r) {
            dst.push_back(off[i] + r);
            prob.push_back(split);
          }
        }
      }
      row_start.push_back(dst.size());
    }
  }

  // Start from the degree distribution split evenly over each node's
  // communities; components keep their degree share under the walk.
  const double volume = 2.0 * g.total_weight();
  std::vector<double> p(states), next(states);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    const double share = g.weighted_degree(i) / volume / static_cast<double>(cover.of_node[i].size());
    for (std::size_t t = off[i]; t < off[i + 1]; ++t) p[t] = share;
  }

  VisitRates out;
  out.offsets = off;
  double residual = 0.0;
  std::size_t sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < states; ++s) {
      const double mass = p[s];
      if (mass == 0.0) continue;
      for (std::size_t e = row_start[s]; e < row_start[s + 1]; ++e) next[dst[e]] += mass * prob[e];
    }
    residual = 0.0;
    for (std::size_t s = 0; s < states; ++s) residual = std::max(residual, std::abs(next[s] - p[s]));
    if (residual < opts.tol) break;
    // Lazy mixing removes periodicity without moving the fixed point.
    for (std::size_t s = 0; s < states; ++s) p[s] = 0.5 * (p[s] + next[s]);
  }
  if (residual >= opts.tol)
    throw ConvergenceError("visit rates did not converge after " + std::to_string(opts.max_sweeps) +
                               " sweeps",
                           residual);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  out.rates = std::move(p);
  out.sweeps = sweep;
  out.residual = residual;
  return out;
}

std::vector<double> exit_probabilities(const VisitRates& v, const Graph& g, const Cover& cover) {
  const WalkWeights walk = transition_weights(g);
  std::vector<double> q(cover.num_communities(), 0.0);
  for (std::uint32_t k = 0; k < cover.num_communities(); ++k) {
    for (NodeId i : cover.sets[k]) {
      const auto targets = walk.targets_of(i);
      const auto probs = walk.probs_of(i);
      double leave = 0.0;
      for (std::size_t t = 0; t < targets.size(); ++t)
        if (position_of(cover.of_node[targets[t]], k) < 0) leave += probs[t];
      q[k] += v.at(cover, i, k) * leave;
    }
  }
  return q;
}

MdlReport description_length(const VisitRates& v, std::span<const double> q_out_k,
                             const Cover& cover) {
  const std::size_t c = cover.num_communities();
  if (q_out_k.size() != c) throw std::invalid_argument("one exit probability per community expected");
  MdlReport r;
  r.q_out_k.assign(q_out_k.begin(), q_out_k.end());
  r.q_out = std::accumulate(q_out_k.begin(), q_out_k.end(), 0.0);
  for (double q : q_out_k) r.H_Q += entropy_term(q, r.q_out);

  r.p_in_k.assign(c, 0.0);
  r.H_P.assign(c, 0.0);
  for (std::uint32_t k = 0; k < c; ++k) {
    double p_in = q_out_k[k];
    for (NodeId i : cover.sets[k]) p_in += v.at(cover, i, k);
    double h = entropy_term(q_out_k[k], p_in);
    for (NodeId i : cover.sets[k]) h += entropy_term(v.at(cover, i, k), p_in);
    r.p_in_k[k] = p_in;
    r.H_P[k] = h;
  }
  r.L = r.q_out * r.H_Q;
  for (std::size_t k = 0; k < c; ++k) r.L += r.p_in_k[k] * r.H_P[k];
  return r;
}

MdlReport map_equation(const Graph& g, const Cover& cover, const SolverOptions& opts) {
  const VisitRates v = solve_visit_rates(g, cover, opts);
  const std::vector<double> q = exit_probabilities(v, g, cover);
  return description_length(v, q, cover);
}

}  // namespace nlc
