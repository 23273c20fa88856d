#include "nlc/type_search.hpp"

#include <algorithm>
#include <stdexcept>

#include "nlc/parallel.hpp"

namespace nlc {

namespace {

constexpr double kMdlSlack = 1e-12;

std::size_t link_count(const TypeFlags& flags) {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), CommunityType::Link));
}

}  // namespace

double structure_mdl(const Memberships& m, const TypeFlags& flags, const Graph& g,
                     const SolverOptions& solver) {
  const HybridStructure h = assign(m, flags);
  return map_equation(g, to_cover(h, m, g), solver).L;
}

double StructureScorer::mdl(const TypeFlags& flags) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(flags); it != cache_.end()) return it->second;
  }
  const double value = structure_mdl(m_, flags, g_, solver_);
  std::lock_guard lock(mutex_);
  cache_.emplace(flags, value);
  return value;
}

std::size_t StructureScorer::evaluations() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

bool preferred(const TypeAssignment& a, const TypeAssignment& b) {
  if (a.mdl < b.mdl - kMdlSlack) return true;
  if (b.mdl < a.mdl - kMdlSlack) return false;
  const std::size_t la = link_count(a.flags);
  const std::size_t lb = link_count(b.flags);
  if (la != lb) return la < lb;
  return a.flags < b.flags;
}

TypeAssignment greedy_type_search(StructureScorer& scorer, std::size_t c,
                                  const TypeSearchOptions& opts) {
  if (c < 1) throw std::invalid_argument("community count must be at least 1");
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  std::vector<TypeAssignment> results(restarts);

  parallel_for(restarts, [&](std::size_t r) {
    TypeFlags flags(c);
    if (opts.seed_with_schemes && r == 0) {
      std::fill(flags.begin(), flags.end(), CommunityType::Node);
    } else if (opts.seed_with_schemes && r == 1) {
      std::fill(flags.begin(), flags.end(), CommunityType::Link);
    } else {
      Rng rng(derive_seed(opts.seed, r));
      for (auto& f : flags)
        f = uniform_open01(rng) < 0.5 ? CommunityType::Node : CommunityType::Link;
    }
    double current = scorer.mdl(flags);
    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      bool improved = false;
      for (std::size_t k = 0; k < c; ++k) {
        TypeFlags trial = flags;
        trial[k] = trial[k] == CommunityType::Node ? CommunityType::Link : CommunityType::Node;
        const double value = scorer.mdl(trial);
        if (value < current - kMdlSlack) {
          flags = std::move(trial);
          current = value;
          improved = true;
        }
      }
      if (!improved) break;
    }
    results[r] = {std::move(flags), current};
  });

  TypeAssignment best = results.front();
  for (const auto& candidate : results)
    if (preferred(candidate, best)) best = candidate;
  return best;
}

TypeAssignment greedy_type_search(const Memberships& m, const Graph& g,
                                  const TypeSearchOptions& opts) {
  StructureScorer scorer(m, g, opts.solver);
  return greedy_type_search(scorer, m.c, opts);
}

TypeAssignment exhaustive_type_search(const Memberships& m, const Graph& g,
                                      const SolverOptions& solver) {
  if (m.c < 1) throw std::invalid_argument("community count must be at least 1");
  if (m.c > kMaxExhaustiveCommunities)
    throw std::invalid_argument("exhaustive type search is limited to " +
                                std::to_string(kMaxExhaustiveCommunities) + " communities");
  const std::size_t combos = std::size_t{1} << m.c;
  std::vector<TypeAssignment> all(combos);
  parallel_for(combos, [&](std::size_t mask) {
    TypeFlags flags(m.c);
    for (std::size_t k = 0; k < m.c; ++k)
      flags[k] = (mask >> k) & 1U ? CommunityType::Link : CommunityType::Node;
    all[mask] = {flags, structure_mdl(m, flags, g, solver)};
  });
  TypeAssignment best = all.front();
  for (const auto& candidate : all)
    if (preferred(candidate, best)) best = candidate;
  return best;
}

}  // namespace nlc
