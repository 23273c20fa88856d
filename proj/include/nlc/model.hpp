#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "nlc/graph.hpp"

namespace nlc {

/// Communities whose total expected degree falls below this are treated as
/// dead: they contribute nothing to expected weights and receive no
/// responsibility.
inline constexpr double kDeadCommunity = 1e-12;

using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1) from the top 53 bits of `rng`,
/// identical across standard libraries.
double uniform_open01(Rng& rng);

/// Seed for stream `stream` of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

class InfeasibleStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expected community degrees d_ik of every node, row-major n x c.
class ModelParams {
 public:
  ModelParams() = default;
  ModelParams(std::size_t n, std::size_t c) : n_(n), c_(c), d_(n * c, 0.0), totals_(c, 0.0) {}

  std::size_t num_nodes() const { return n_; }
  std::size_t num_communities() const { return c_; }

  double operator()(std::size_t i, std::size_t k) const { return d_[i * c_ + k]; }
  std::span<const double> row(std::size_t i) const { return {d_.data() + i * c_, c_}; }
  std::span<double> row(std::size_t i) { return {d_.data() + i * c_, c_}; }
  std::span<const double> data() const { return d_; }

  /// D_k = sum over nodes of d_ik. Call recompute_totals() after mutating rows.
  double total(std::size_t k) const { return totals_[k]; }
  std::span<const double> totals() const { return totals_; }
  void recompute_totals();

  void set(std::size_t i, std::size_t k, double value) { d_[i * c_ + k] = value; }

 private:
  std::size_t n_ = 0;
  std::size_t c_ = 0;
  std::vector<double> d_;
  std::vector<double> totals_;
};

/// q_{ij,k} for every stored edge, row-major (edge, community).
class EdgeResponsibilities {
 public:
  EdgeResponsibilities() = default;
  EdgeResponsibilities(std::size_t m, std::size_t c) : m_(m), c_(c), q_(m * c, 0.0) {}

  std::size_t num_edges() const { return m_; }
  std::size_t num_communities() const { return c_; }
  std::span<const double> row(std::size_t e) const { return {q_.data() + e * c_, c_}; }
  std::span<double> row(std::size_t e) { return {q_.data() + e * c_, c_}; }

 private:
  std::size_t m_ = 0;
  std::size_t c_ = 0;
  std::vector<double> q_;
};

struct FitOptions {
  double tol = 1e-8;
  int max_iter = 1000;
  std::uint64_t seed = 0;
};

struct FitResult {
  ModelParams params;
  double log_likelihood = 0.0;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// d_ik d_jk / D_k, or 0 for a dead community.
double expected_weight_in_community(const ModelParams& p, NodeId i, NodeId j, std::size_t k);

/// Sum of expected_weight_in_community over all communities.
double expected_weight(const ModelParams& p, NodeId i, NodeId j);

/// Poisson log-likelihood with constants dropped:
///   sum over ordered pairs of A_ij log(w^_ij) - sum_k D_k,
/// where A_ij = w_ij off the diagonal and A_ii = 2 w_ii. Returns -infinity
/// if an observed edge has zero expected weight.
double log_likelihood(const Graph& g, const ModelParams& p);

/// Responsibilities q_{ij,k} = w^k_ij / w^_ij for every observed edge.
/// Throws InfeasibleStateError if an edge has zero expected weight.
EdgeResponsibilities e_step(const Graph& g, const ModelParams& p);

/// d_ik = sum_j A_ij q_{ij,k}.
ModelParams m_step(const Graph& g, const EdgeResponsibilities& q);

/// Random degree-scaled start: d_ik = deg_i u_ik / sum_r u_ir, u uniform on (0,1).
ModelParams initialize(const Graph& g, std::size_t c, Rng& rng);

/// Expectation-maximization from a random start seeded with opts.seed.
/// Stops when |dL| / (1 + |L|) < tol or after max_iter updates.
FitResult fit(const Graph& g, std::size_t c, const FitOptions& opts = {});

/// EM started from given parameters.
FitResult fit_from(const Graph& g, ModelParams start, const FitOptions& opts = {});

struct RestartSummary {
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
  std::size_t failed = 0;
  std::vector<double> log_likelihoods;
};

struct BestFit {
  FitResult best;
  RestartSummary summary;
};

/// Runs `restarts` fits with seeds derive_seed(opts.seed, r) and keeps the
/// highest likelihood (lowest restart index on ties). Restarts are spread
/// over worker threads; the result does not depend on the thread count.
BestFit fit_best(const Graph& g, std::size_t c, std::size_t restarts, const FitOptions& opts = {});

}  // namespace nlc
