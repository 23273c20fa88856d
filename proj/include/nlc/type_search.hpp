#pragma once

#include <cstdint>
#include <map>
#include <mutex>

#include "nlc/inference.hpp"
#include "nlc/map_equation.hpp"

namespace nlc {

struct TypeAssignment {
  TypeFlags flags;
  double mdl = 0.0;
};

/// Description length of the structure induced by `flags`:
/// assign -> to_cover -> map equation.
double structure_mdl(const Memberships& m, const TypeFlags& flags, const Graph& g,
                     const SolverOptions& solver = {});

/// Memoizing MDL oracle over type flags for fixed memberships. Safe to call
/// from several threads.
class StructureScorer {
 public:
  StructureScorer(const Memberships& m, const Graph& g, SolverOptions solver = {})
      : m_(m), g_(g), solver_(solver) {}

  double mdl(const TypeFlags& flags);
  std::size_t evaluations() const;

 private:
  const Memberships& m_;
  const Graph& g_;
  SolverOptions solver_;
  mutable std::mutex mutex_;
  std::map<TypeFlags, double> cache_;
};

/// Orders equal-MDL candidates: fewer link-type communities first, then
/// lexicographically with node before link.
bool preferred(const TypeAssignment& a, const TypeAssignment& b);

struct TypeSearchOptions {
  std::size_t max_sweeps = 50;  // K
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  /// Restart 0 starts from all-node and restart 1 from all-link flags; the
  /// rest start from random flags.
  bool seed_with_schemes = true;
  SolverOptions solver;
};

/// Coordinate descent over flags: sweep communities in index order and flip
/// a community's type whenever that strictly lowers the MDL; stop after a
/// sweep without improvement or after max_sweeps sweeps. Best over restarts.
TypeAssignment greedy_type_search(const Memberships& m, const Graph& g,
                                  const TypeSearchOptions& opts = {});

/// Same, sharing a caller-owned scorer.
TypeAssignment greedy_type_search(StructureScorer& scorer, std::size_t c,
                                  const TypeSearchOptions& opts = {});

inline constexpr std::size_t kMaxExhaustiveCommunities = 20;

/// Global minimum over all 2^c flag vectors. Throws std::invalid_argument
/// when c exceeds kMaxExhaustiveCommunities.
TypeAssignment exhaustive_type_search(const Memberships& m, const Graph& g,
                                      const SolverOptions& solver = {});

}  // namespace nlc
