#include "nlc/model.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "nlc/parallel.hpp"

namespace nlc {

double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

void ModelParams::recompute_totals() {
  std::fill(totals_.begin(), totals_.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < c_; ++k) totals_[k] += d_[i * c_ + k];
}

namespace {

std::vector<double> inverse_totals(const ModelParams& p) {
  std::vector<double> inv(p.num_communities(), 0.0);
  for (std::size_t k = 0; k < inv.size(); ++k)
    if (p.total(k) >= kDeadCommunity) inv[k] = 1.0 / p.total(k);
  return inv;
}

double live_mass(const ModelParams& p) {
  double sum = 0.0;
  for (double t : p.totals())
    if (t >= kDeadCommunity) sum += t;
  return sum;
}

void check_shape(const Graph& g, const ModelParams& p) {
  if (p.num_nodes() != g.num_nodes())
    throw std::invalid_argument("parameter rows do not match the graph's node count");
}

// One fused E+M pass. Returns L(p) and writes the M-step update into `next`.
double em_pass(const Graph& g, const ModelParams& p, ModelParams& next, std::vector<double>& w_k) {
  const std::size_t c = p.num_communities();
  const std::vector<double> inv = inverse_totals(p);
  std::fill(next.row(0).data(), next.row(0).data() + g.num_nodes() * c, 0.0);
  double ll = 0.0;
  for (const Edge& e : g.edges()) {
    const auto du = p.row(e.u);
    const auto dv = p.row(e.v);
    double s = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      w_k[k] = du[k] * dv[k] * inv[k];
      s += w_k[k];
    }
    if (!(s > 0.0))
      throw InfeasibleStateError("edge (" + g.label(e.u) + ", " + g.label(e.v) +
                                 ") has zero expected weight");
    // Both orientations of an edge, or A_ii = 2w for a loop, contribute 2w.
    ll += 2.0 * e.w * std::log(s);
    const double f = e.w / s;
    auto nu = next.row(e.u);
    auto nv = next.row(e.v);
    for (std::size_t k = 0; k < c; ++k) {
      const double share = f * w_k[k];
      nu[k] += share;
      nv[k] += share;
    }
  }
  next.recompute_totals();
  return ll - live_mass(p);
}

}  // namespace

double expected_weight_in_community(const ModelParams& p, NodeId i, NodeId j, std::size_t k) {
  if (i >= p.num_nodes() || j >= p.num_nodes() || k >= p.num_communities())
    throw std::out_of_range("index out of range");
  const double total = p.total(k);
  if (total < kDeadCommunity) return 0.0;
  return p(i, k) * p(j, k) / total;
}

double expected_weight(const ModelParams& p, NodeId i, NodeId j) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.num_communities(); ++k) s += expected_weight_in_community(p, i, j, k);
  return s;
}

double log_likelihood(const Graph& g, const ModelParams& p) {
  check_shape(g, p);
  const std::size_t c = p.num_communities();
  const std::vector<double> inv = inverse_totals(p);
  double ll = 0.0;
  for (const Edge& e : g.edges()) {
    double s = 0.0;
    for (std::size_t k = 0; k < c; ++k) s += p(e.u, k) * p(e.v, k) * inv[k];
    if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += 2.0 * e.w * std::log(s);
  }
  return ll - live_mass(p);
}

EdgeResponsibilities e_step(const Graph& g, const ModelParams& p) {
  check_shape(g, p);
  const std::size_t c = p.num_communities();
  const std::vector<double> inv = inverse_totals(p);
  EdgeResponsibilities q(g.num_edges(), c);
  for (std::size_t idx = 0; idx < g.num_edges(); ++idx) {
    const Edge& e = g.edges()[idx];
    auto row = q.row(idx);
    double s = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      row[k] = p(e.u, k) * p(e.v, k) * inv[k];
      s += row[k];
    }
    if (!(s > 0.0))
      throw InfeasibleStateError("edge (" + g.label(e.u) + ", " + g.label(e.v) +
                                 ") has zero expected weight");
    for (double& x : row) x /= s;
  }
  return q;
}

ModelParams m_step(const Graph& g, const EdgeResponsibilities& q) {
  if (q.num_edges() != g.num_edges())
    throw std::invalid_argument("responsibilities do not match the graph's edge count");
  const std::size_t c = q.num_communities();
  ModelParams p(g.num_nodes(), c);
  for (std::size_t idx = 0; idx < g.num_edges(); ++idx) {
    const Edge& e = g.edges()[idx];
    const auto row = q.row(idx);
    auto du = p.row(e.u);
    auto dv = p.row(e.v);
    for (std::size_t k = 0; k < c; ++k) {
      du[k] += e.w * row[k];
      dv[k] += e.w * row[k];
    }
  }
  p.recompute_totals();
  return p;
}

ModelParams initialize(const Graph& g, std::size_t c, Rng& rng) {
  if (c < 1) throw std::invalid_argument("community count must be at least 1");
  ModelParams p(g.num_nodes(), c);
  std::vector<double> u(c);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    double sum = 0.0;
    for (double& x : u) {
      x = uniform_open01(rng);
      sum += x;
    }
    const double deg = g.weighted_degree(i);
    for (std::size_t k = 0; k < c; ++k) p.set(i, k, deg * (u[k] / sum));
  }
  p.recompute_totals();
  return p;
}

FitResult fit_from(const Graph& g, ModelParams start, const FitOptions& opts) {
  check_shape(g, start);
  if (g.num_edges() == 0) throw std::invalid_argument("graph has no edges");
  const std::size_t c = start.num_communities();
  FitResult result;
  result.seed = opts.seed;

  ModelParams current = std::move(start);
  ModelParams next(g.num_nodes(), c);
  std::vector<double> scratch(c);

  double prev = em_pass(g, current, next, scratch);
  result.trace.push_back(prev);
  int it = 0;
  while (it < opts.max_iter) {
    std::swap(current, next);
    ++it;
    const double ll = em_pass(g, current, next, scratch);
    result.trace.push_back(ll);
    if (std::abs(ll - prev) / (1.0 + std::abs(ll)) < opts.tol) {
      result.converged = true;
      break;
    }
    prev = ll;
  }
  result.iterations = it;
  result.log_likelihood = result.trace.back();
  result.params = std::move(current);
  return result;
}

FitResult fit(const Graph& g, std::size_t c, const FitOptions& opts) {
  Rng rng(opts.seed);
  return fit_from(g, initialize(g, c, rng), opts);
}

BestFit fit_best(const Graph& g, std::size_t c, std::size_t restarts, const FitOptions& opts) {
  if (restarts < 1) throw std::invalid_argument("need at least one restart");
  std::vector<std::optional<FitResult>> results(restarts);
  std::vector<std::string> errors(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    FitOptions local = opts;
    local.seed = derive_seed(opts.seed, r);
    try {
      results[r] = fit(g, c, local);
    } catch (const InfeasibleStateError& e) {
      errors[r] = e.what();
    }
  });

  BestFit out;
  out.summary.restarts = restarts;
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < restarts; ++r) {
    if (!results[r]) {
      ++out.summary.failed;
      out.summary.log_likelihoods.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    out.summary.log_likelihoods.push_back(results[r]->log_likelihood);
    if (!best || results[r]->log_likelihood > results[*best]->log_likelihood) best = r;
  }
  if (!best) throw InfeasibleStateError("every restart failed: " + errors.front());
  out.summary.best_restart = *best;
  out.best = std::move(*results[*best]);
  return out;
}

}  // namespace nlc
