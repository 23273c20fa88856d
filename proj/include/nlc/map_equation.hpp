#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nlc/graph.hpp"
#include "nlc/inference.hpp"

namespace nlc {

/// Random-walk step probabilities u_ij = A_ij / deg_i in CSR layout.
struct WalkWeights {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;
  std::vector<double> probs;

  std::size_t num_nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const NodeId> targets_of(NodeId i) const {
    return {targets.data() + offsets[i], targets.data() + offsets[i + 1]};
  }
  std::span<const double> probs_of(NodeId i) const {
    return {probs.data() + offsets[i], probs.data() + offsets[i + 1]};
  }
};

/// Throws std::domain_error for a zero-degree node.
WalkWeights transition_weights(const Graph& g);

/// Visit rates p_i^k, one per (node, community) state. States are ordered by
/// node, and within a node follow cover.of_node[i].
struct VisitRates {
  std::vector<std::size_t> offsets;  // per node into `rates`
  std::vector<double> rates;
  std::size_t sweeps = 0;
  double residual = 0.0;

  double at(const Cover& cover, NodeId i, std::uint32_t k) const;
  double total() const;
};

struct SolverOptions {
  double tol = 1e-12;
  std::size_t max_sweeps = 100000;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Stationary visit rates of the overlapping-cover walk: a walker at node j
/// in community s moving to node i stays in s when i belongs to s and
/// otherwise switches uniformly to one of i's communities. Each connected
/// component keeps the share of total degree it starts with. Solved by lazy
/// power iteration until the max-norm residual of one undamped step is
/// below tol.
VisitRates solve_visit_rates(const Graph& g, const Cover& cover, const SolverOptions& opts = {});

/// q_out^k = sum over i in k of p_i^k times the step probability to nodes
/// outside k.
std::vector<double> exit_probabilities(const VisitRates& v, const Graph& g, const Cover& cover);

struct MdlReport {
  double L = 0.0;  // bits per step
  double q_out = 0.0;
  double H_Q = 0.0;
  std::vector<double> q_out_k;
  std::vector<double> p_in_k;
  std::vector<double> H_P;
};

/// Two-level description length, base-2 logarithms, 0 log 0 = 0.
MdlReport description_length(const VisitRates& v, std::span<const double> q_out_k,
                             const Cover& cover);

/// solve_visit_rates + exit_probabilities + description_length.
MdlReport map_equation(const Graph& g, const Cover& cover, const SolverOptions& opts = {});

}  // namespace nlc
