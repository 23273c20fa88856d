#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "nlc/graph.hpp"
#include "nlc/inference.hpp"

namespace nlc {

class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// cut(S) / min(Vol(S), Vol(V \ S)) with weighted degrees. Self-loops count
/// toward volume only. Throws UndefinedMetricError for S empty, S = V, or a
/// zero-volume side.
double conductance(const Graph& g, std::span<const NodeId> s);

struct WacResult {
  double value = 0.0;
  std::vector<double> phi;  // per community
  std::vector<std::string> warnings;
};

/// Size-weighted mean conductance. A community spanning every node scores
/// phi = 0 and adds a warning.
WacResult wac(const Graph& g, const std::vector<std::vector<NodeId>>& communities);

/// Overlapping-cover NMI: per-community binary membership variables, each
/// community matched to the one in the other cover with the least
/// conditional entropy (the match is skipped when the pair is negatively
/// correlated), mutual information normalized by max(H(X), H(Y)).
/// Symmetric. Covers must share n. Throws std::invalid_argument when either
/// cover has no community.
double enmi(const Cover& a, const Cover& b);

/// Symmetric 0/1 relation over node ids. Self-pairs are never stored.
class SimilarityOracle {
 public:
  explicit SimilarityOracle(std::size_t n = 0) : n_(n) {}

  void add(NodeId i, NodeId j);
  bool operator()(NodeId i, NodeId j) const;
  std::size_t size() const { return n_; }
  std::size_t positive_pairs() const { return pairs_.size(); }

 private:
  static std::uint64_t key(NodeId i, NodeId j);
  std::size_t n_;
  std::unordered_set<std::uint64_t> pairs_;
};

struct LoadedOracle {
  SimilarityOracle oracle;
  std::vector<std::string> warnings;
};

/// Lines "labelA labelB"; '#' starts a comment. Labels missing from the
/// graph are skipped with a warning.
LoadedOracle load_similarity_oracle(std::istream& in, const Graph& g);

struct ReferenceCover {
  Cover cover;
  std::vector<std::string> names;  // community names, by index
  std::vector<std::string> warnings;
};

/// Lines "label communityName"; a node may be listed under several names.
/// Communities are indexed in first-appearance order.
ReferenceCover load_reference_cover(std::istream& in, const Graph& g);

/// Mean mu over distinct within-community pairs divided by mean mu over all
/// distinct pairs of the universe.
double pair_enrichment(const Cover& cover, const SimilarityOracle& mu);

}  // namespace nlc
