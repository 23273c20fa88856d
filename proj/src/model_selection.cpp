#include "nlc/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlc {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Node:
      return "node";
    case Scheme::Link:
      return "link";
    case Scheme::Hybrid:
      return "hybrid";
  }
  return "hybrid";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "node") return Scheme::Node;
  if (s == "link") return Scheme::Link;
  if (s == "hybrid") return Scheme::Hybrid;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected node, link or hybrid)");
}

std::vector<std::size_t> c_range(const Graph& g, const SelectionOptions& opts) {
  const std::size_t hi = opts.c_max ? opts.c_max : std::min<std::size_t>(g.num_nodes(), 30);
  if (opts.c_min < 1 || hi < opts.c_min) throw std::invalid_argument("empty community-count range");
  std::vector<std::size_t> out;
  for (std::size_t c = opts.c_min; c <= hi; ++c) out.push_back(c);
  return out;
}

const SchemeOutcome* SweepRow::find(Scheme s) const {
  for (const auto& o : outcomes)
    if (o.scheme == s) return &o;
  return nullptr;
}

TypeAssignment scheme_flags(StructureScorer& scorer, std::size_t c, Scheme scheme,
                            const TypeSearchOptions& opts) {
  if (scheme == Scheme::Hybrid) return greedy_type_search(scorer, c, opts);
  TypeFlags flags(c, scheme == Scheme::Node ? CommunityType::Node : CommunityType::Link);
  const double mdl = scorer.mdl(flags);
  return {std::move(flags), mdl};
}

namespace {

std::uint64_t fit_seed(std::uint64_t master, std::size_t c) { return derive_seed(master, 2 * c); }
std::uint64_t type_seed(std::uint64_t master, std::size_t c) { return derive_seed(master, 2 * c + 1); }

}  // namespace

std::vector<SweepRow> sweep_c(const Graph& g, std::span<const std::size_t> c_values,
                              std::span<const Scheme> schemes, const SelectionOptions& opts) {
  if (c_values.empty()) throw std::invalid_argument("empty community-count range");
  std::vector<std::size_t> cs(c_values.begin(), c_values.end());
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());

  std::vector<SweepRow> rows;
  for (std::size_t c : cs) {
    SweepRow row;
    row.c = c;
    try {
      FitOptions fo = opts.fit;
      fo.seed = fit_seed(opts.fit.seed, c);
      BestFit best = fit_best(g, c, opts.restarts, fo);
      row.restarts = std::move(best.summary);
      row.fit = std::move(best.best);
      const Memberships m = memberships(row.fit.params, g);
      StructureScorer scorer(m, g, opts.types.solver);
      TypeSearchOptions to = opts.types;
      to.seed = type_seed(opts.fit.seed, c);
      for (Scheme s : schemes) row.outcomes.push_back({s, scheme_flags(scorer, c, s, to)});
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      row.outcomes.clear();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Selection realize(const Graph& g, FitResult fit, const TypeFlags& flags, Scheme scheme,
                  const SolverOptions& solver) {
  Selection s;
  s.c = fit.params.num_communities();
  s.scheme = scheme;
  s.memberships = memberships(fit.params, g);
  s.fit = std::move(fit);
  s.structure = assign(s.memberships, flags);
  s.cover = to_cover(s.structure, s.memberships, g);
  s.report = map_equation(g, s.cover, solver);
  s.assignment = {flags, s.report.L};
  return s;
}

Selection select(const Graph& g, Scheme scheme, const SelectionOptions& opts) {
  const std::vector<std::size_t> cs = c_range(g, opts);
  const Scheme schemes[] = {scheme};
  std::vector<SweepRow> rows = sweep_c(g, cs, schemes, opts);

  const SweepRow* best = nullptr;
  for (const auto& row : rows) {
    if (row.failed) continue;
    if (!best || row.find(scheme)->assignment.mdl < best->find(scheme)->assignment.mdl) best = &row;
  }
  if (!best) throw std::runtime_error("every community count failed: " + rows.front().error);
  Selection s = realize(g, best->fit, best->find(scheme)->assignment.flags, scheme,
                        opts.types.solver);
  s.rows = std::move(rows);
  return s;
}

namespace {

class Bipartitioner {
 public:
  Bipartitioner(const Graph& g, const BipartitionOptions& opts) : g_(g), opts_(opts) {}

  HierarchyNode build(std::vector<NodeId> nodes, std::uint64_t seed, std::size_t depth) {
    HierarchyNode node;
    node.nodes = std::move(nodes);
    depth_ = std::max(depth_, depth);
    if (node.nodes.size() < opts_.min_size) {
      node.note = "below minimum size";
      return finish_leaf(std::move(node));
    }
    if (depth >= opts_.max_depth) {
      node.note = "maximum depth reached";
      return finish_leaf(std::move(node));
    }

    const Graph sub = induced_subgraph(g_, node.nodes);
    std::vector<NodeId> active;  // local ids with positive degree
    std::vector<NodeId> idle;
    for (NodeId i = 0; i < sub.num_nodes(); ++i)
      (sub.weighted_degree(i) > 0.0 ? active : idle).push_back(i);
    if (active.size() < opts_.min_size || sub.num_edges() == 0) {
      node.note = "too few connected nodes";
      return finish_leaf(std::move(node));
    }
    const Graph core = idle.empty() ? sub : induced_subgraph(sub, active);

    FitOptions one = opts_.fit;
    const FitResult fit1 = fit(core, 1, one);
    FitOptions two = opts_.fit;
    two.seed = seed;
    const FitResult fit2 = fit_best(core, 2, opts_.restarts, two).best;
    node.ll_one = fit1.log_likelihood;
    node.ll_two = fit2.log_likelihood;
    node.gain = (fit2.log_likelihood - fit1.log_likelihood) /
                std::max(std::abs(fit1.log_likelihood), 1e-300);

    const std::vector<double> s = node_memberships(fit2.params);
    std::vector<NodeId> left, right;
    for (NodeId i = 0; i < core.num_nodes(); ++i) {
      const NodeId global = node.nodes[idle.empty() ? i : active[i]];
      (s[2 * i + 1] > s[2 * i] ? right : left).push_back(global);
    }

    if (opts_.stop == StopRule::Mdl) {
      const Cover whole = make_cover(core.num_nodes(), {all_nodes(core.num_nodes())});
      std::vector<std::vector<NodeId>> halves(2);
      for (NodeId i = 0; i < core.num_nodes(); ++i) halves[s[2 * i + 1] > s[2 * i] ? 1 : 0].push_back(i);
      node.mdl_one = map_equation(core, whole).L;
      node.mdl_two = map_equation(core, make_cover(core.num_nodes(), halves)).L;
    }

    const bool accepted = opts_.stop == StopRule::Likelihood ? node.gain > opts_.min_gain
                                                             : node.mdl_two < node.mdl_one - 1e-12;
    if (!accepted) {
      node.note = "split rejected";
      return finish_leaf(std::move(node));
    }
    if (left.empty() || right.empty()) {
      node.note = "degenerate split";
      return finish_leaf(std::move(node));
    }
    for (NodeId i : idle) (left.size() >= right.size() ? left : right).push_back(node.nodes[i]);
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());

    node.split = true;
    node.children.push_back(build(std::move(left), derive_seed(seed, 1), depth + 1));
    node.children.push_back(build(std::move(right), derive_seed(seed, 2), depth + 1));
    return node;
  }

  std::vector<std::vector<NodeId>> take_leaves() { return std::move(leaves_); }
  std::size_t depth() const { return depth_; }

 private:
  static std::vector<NodeId> all_nodes(std::size_t n) {
    std::vector<NodeId> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<NodeId>(i);
    return v;
  }

  HierarchyNode finish_leaf(HierarchyNode node) {
    leaves_.push_back(node.nodes);
    return node;
  }

  const Graph& g_;
  const BipartitionOptions& opts_;
  std::vector<std::vector<NodeId>> leaves_;
  std::size_t depth_ = 0;
};

}  // namespace

Bipartition recursive_bipartition(const Graph& g, const BipartitionOptions& opts) {
  std::vector<NodeId> all(g.num_nodes());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NodeId>(i);
  Bipartitioner b(g, opts);
  Bipartition out;
  out.root = b.build(std::move(all), opts.fit.seed, 0);
  out.leaves = b.take_leaves();
  out.depth = b.depth();
  return out;
}

}  // namespace nlc
