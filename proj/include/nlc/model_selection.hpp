#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nlc/inference.hpp"
#include "nlc/map_equation.hpp"
#include "nlc/model.hpp"
#include "nlc/type_search.hpp"

namespace nlc {

/// Type constraint: all-node, all-link, or searched.
enum class Scheme { Node, Link, Hybrid };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SelectionOptions {
  std::size_t c_min = 2;
  std::size_t c_max = 0;  // 0 selects min(n, 30)
  std::size_t restarts = 50;
  FitOptions fit;  // fit.seed is the master seed for the whole run
  TypeSearchOptions types;
};

std::vector<std::size_t> c_range(const Graph& g, const SelectionOptions& opts);

struct SchemeOutcome {
  Scheme scheme;
  TypeAssignment assignment;
};

struct SweepRow {
  std::size_t c = 0;
  bool failed = false;
  std::string error;
  FitResult fit;
  RestartSummary restarts;
  std::vector<SchemeOutcome> outcomes;

  /// nullptr when the scheme was not requested or the row failed.
  const SchemeOutcome* find(Scheme s) const;
};

/// For each c: best-of-restarts fit, then flags per scheme on the same
/// memberships (hybrid uses greedy search). A failing c is marked and the
/// sweep continues. Rows come back sorted by c.
std::vector<SweepRow> sweep_c(const Graph& g, std::span<const std::size_t> c_values,
                              std::span<const Scheme> schemes, const SelectionOptions& opts);

/// A fitted model made concrete under fixed flags.
struct Selection {
  std::size_t c = 0;
  Scheme scheme = Scheme::Hybrid;
  FitResult fit;
  Memberships memberships;
  TypeAssignment assignment;
  HybridStructure structure;
  Cover cover;
  MdlReport report;
  std::vector<SweepRow> rows;
};

Selection realize(const Graph& g, FitResult fit, const TypeFlags& flags, Scheme scheme,
                  const SolverOptions& solver = {});

/// Flags for a scheme: all-node, all-link, or greedy search.
TypeAssignment scheme_flags(StructureScorer& scorer, std::size_t c, Scheme scheme,
                            const TypeSearchOptions& opts);

/// Sweeps c over c_range() and keeps the lowest MDL for `scheme`; ties go to
/// the smaller c. Throws std::runtime_error if every row failed.
Selection select(const Graph& g, Scheme scheme, const SelectionOptions& opts);

enum class StopRule { Likelihood, Mdl };

struct BipartitionOptions {
  std::size_t restarts = 10;
  double min_gain = 1e-4;  // relative log-likelihood gain needed to split
  std::size_t min_size = 3;
  std::size_t max_depth = 64;
  StopRule stop = StopRule::Likelihood;
  FitOptions fit;
};

struct HierarchyNode {
  std::vector<NodeId> nodes;
  std::vector<HierarchyNode> children;  // zero or two
  bool split = false;
  double ll_one = std::numeric_limits<double>::quiet_NaN();
  double ll_two = std::numeric_limits<double>::quiet_NaN();
  double gain = std::numeric_limits<double>::quiet_NaN();
  double mdl_one = std::numeric_limits<double>::quiet_NaN();
  double mdl_two = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct Bipartition {
  HierarchyNode root;
  std::vector<std::vector<NodeId>> leaves;
  std::size_t depth = 0;
};

/// Splits the graph in two with a c=2 fit (node-scheme argmax) while the
/// split beats the one-community model, recursing on induced subgraphs.
/// Zero-degree nodes of a subgraph follow the larger child.
Bipartition recursive_bipartition(const Graph& g, const BipartitionOptions& opts = {});

}  // namespace nlc
