#include "nlc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace nlc {

double conductance(const Graph& g, std::span<const NodeId> s) {
  const std::size_t n = g.num_nodes();
  std::vector<char> in(n, 0);
  std::size_t size = 0;
  for (NodeId i : s) {
    if (i >= n) throw std::out_of_range("node id out of range");
    if (!in[i]) ++size;
    in[i] = 1;
  }
  if (size == 0) throw UndefinedMetricError("conductance of an empty set is undefined");
  if (size == n) throw UndefinedMetricError("conductance of the whole node set is undefined");

  double vol_in = 0.0, cut = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    if (!in[i]) continue;
    vol_in += g.weighted_degree(i);
    for (const Neighbor& nb : g.neighbors(i))
      if (!in[nb.node]) cut += nb.weight;
  }
  const double vol_out = 2.0 * g.total_weight() - vol_in;
  const double denom = std::min(vol_in, vol_out);
  if (!(denom > 0.0)) throw UndefinedMetricError("conductance with a zero-volume side is undefined");
  return cut / denom;
}

WacResult wac(const Graph& g, const std::vector<std::vector<NodeId>>& communities) {
  if (communities.empty()) throw std::invalid_argument("no communities");
  WacResult r;
  double weighted = 0.0, total = 0.0;
  for (std::size_t k = 0; k < communities.size(); ++k) {
    std::vector<NodeId> set = communities[k];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    double phi = 0.0;
    if (set.size() == g.num_nodes() && !set.empty()) {
      r.warnings.push_back("community " + std::to_string(k) +
                           " spans every node; its conductance is taken as 0");
    } else {
      phi = conductance(g, set);
    }
    r.phi.push_back(phi);
    weighted += static_cast<double>(set.size()) * phi;
    total += static_cast<double>(set.size());
  }
  r.value = weighted / total;
  return r;
}

namespace {

double h(double w, double n) { return w <= 0.0 ? 0.0 : -w * std::log2(w / n); }

double binary_entropy(std::size_t size, std::size_t n) {
  return h(static_cast<double>(size), static_cast<double>(n)) +
         h(static_cast<double>(n - size), static_cast<double>(n));
}

// H(X_i | Y_j) from the 2x2 contingency table (a: neither, b: Y only,
// c: X only, d: both), or +inf when the pair is negatively correlated.
double conditional_entropy(double a, double b, double c, double d, double n) {
  if (h(a, n) + h(d, n) < h(b, n) + h(c, n)) return std::numeric_limits<double>::infinity();
  const double v = h(a, n) + h(b, n) + h(c, n) + h(d, n) - h(b + d, n) - h(a + c, n);
  return std::max(v, 0.0);
}

// Sum over communities of X of min_j H(X_i | Y_j), falling back to H(X_i).
double conditional_cover_entropy(const Cover& x, const Cover& y,
                                 const std::vector<std::vector<std::size_t>>& overlap) {
  const double n = static_cast<double>(x.n);
  double total = 0.0;
  for (std::size_t i = 0; i < x.sets.size(); ++i) {
    double best = binary_entropy(x.sets[i].size(), x.n);
    for (std::size_t j = 0; j < y.sets.size(); ++j) {
      const double d = static_cast<double>(overlap[i][j]);
      const double c = static_cast<double>(x.sets[i].size()) - d;
      const double b = static_cast<double>(y.sets[j].size()) - d;
      const double a = n - b - c - d;
      best = std::min(best, conditional_entropy(a, b, c, d, n));
    }
    total += best;
  }
  return total;
}

}  // namespace

double enmi(const Cover& a, const Cover& b) {
  if (a.n != b.n) throw std::invalid_argument("covers are over different node sets");
  if (a.sets.empty() || b.sets.empty()) throw std::invalid_argument("empty cover");
  if (a.n == 0) throw std::invalid_argument("covers have no nodes");

  std::vector<std::vector<std::size_t>> ab(a.sets.size(), std::vector<std::size_t>(b.sets.size(), 0));
  for (NodeId i = 0; i < a.n; ++i)
    for (std::uint32_t ka : a.of_node[i])
      for (std::uint32_t kb : b.of_node[i]) ++ab[ka][kb];
  std::vector<std::vector<std::size_t>> ba(b.sets.size(), std::vector<std::size_t>(a.sets.size()));
  for (std::size_t i = 0; i < a.sets.size(); ++i)
    for (std::size_t j = 0; j < b.sets.size(); ++j) ba[j][i] = ab[i][j];

  double ha = 0.0, hb = 0.0;
  for (const auto& s : a.sets) ha += binary_entropy(s.size(), a.n);
  for (const auto& s : b.sets) hb += binary_entropy(s.size(), b.n);
  const double norm = std::max(ha, hb);
  if (norm <= 0.0) {
    // Neither cover carries information; only identical families agree.
    auto canon = [](const Cover& c) {
      auto sets = c.sets;
      std::sort(sets.begin(), sets.end());
      sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
      return sets;
    };
    return canon(a) == canon(b) ? 1.0 : 0.0;
  }
  const double ha_b = conditional_cover_entropy(a, b, ab);
  const double hb_a = conditional_cover_entropy(b, a, ba);
  const double mi = 0.5 * (ha - ha_b + hb - hb_a);
  return std::clamp(mi / norm, 0.0, 1.0);
}

std::uint64_t SimilarityOracle::key(NodeId i, NodeId j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | j;
}

void SimilarityOracle::add(NodeId i, NodeId j) {
  if (i >= n_ || j >= n_) throw std::out_of_range("oracle node id out of range");
  if (i != j) pairs_.insert(key(i, j));
}

bool SimilarityOracle::operator()(NodeId i, NodeId j) const {
  return i != j && pairs_.count(key(i, j)) > 0;
}

namespace {

// Splits the next non-comment line into tokens; returns false at EOF.
bool next_tokens(std::istream& in, std::size_t& line_no, std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    tokens.clear();
    for (std::string t; ss >> t;) tokens.push_back(std::move(t));
    if (!tokens.empty()) return true;
  }
  return false;
}

}  // namespace

LoadedOracle load_similarity_oracle(std::istream& in, const Graph& g) {
  LoadedOracle out{SimilarityOracle(g.num_nodes()), {}};
  std::size_t line_no = 0;
  std::vector<std::string> tok;
  while (next_tokens(in, line_no, tok)) {
    if (tok.size() != 2) throw ParseError(line_no, "expected 'labelA labelB'");
    const std::int64_t i = g.find(tok[0]);
    const std::int64_t j = g.find(tok[1]);
    if (i < 0 || j < 0) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": unknown label '" +
                             (i < 0 ? tok[0] : tok[1]) + "' skipped");
      continue;
    }
    out.oracle.add(static_cast<NodeId>(i), static_cast<NodeId>(j));
  }
  return out;
}

ReferenceCover load_reference_cover(std::istream& in, const Graph& g) {
  ReferenceCover out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<NodeId>> sets;
  std::size_t line_no = 0;
  std::vector<std::string> tok;
  while (next_tokens(in, line_no, tok)) {
    if (tok.size() < 2) throw ParseError(line_no, "expected 'label communityName'");
    std::string name = tok[1];
    for (std::size_t t = 2; t < tok.size(); ++t) name += " " + tok[t];
    const std::int64_t i = g.find(tok[0]);
    if (i < 0) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": unknown label '" + tok[0] +
                             "' skipped");
      continue;
    }
    auto [it, fresh] = index.emplace(name, sets.size());
    if (fresh) {
      sets.emplace_back();
      out.names.push_back(name);
    }
    sets[it->second].push_back(static_cast<NodeId>(i));
  }
  if (sets.empty()) throw ParseError(line_no, "reference cover has no communities");
  out.cover = make_cover(g.num_nodes(), std::move(sets));
  return out;
}

double pair_enrichment(const Cover& cover, const SimilarityOracle& mu) {
  if (mu.size() != cover.n) throw std::invalid_argument("oracle and cover are over different node sets");
  const double n = static_cast<double>(cover.n);
  const double all_pairs = n * (n - 1.0) / 2.0;
  if (all_pairs <= 0.0 || mu.positive_pairs() == 0)
    throw UndefinedMetricError("enrichment is undefined when no pair is similar");
  const double base = static_cast<double>(mu.positive_pairs()) / all_pairs;

  std::unordered_set<std::uint64_t> within;
  for (const auto& set : cover.sets)
    for (std::size_t x = 0; x < set.size(); ++x)
      for (std::size_t y = x + 1; y < set.size(); ++y)
        within.insert((static_cast<std::uint64_t>(set[x]) << 32) | set[y]);
  if (within.empty()) throw UndefinedMetricError("enrichment is undefined without within-community pairs");
  std::size_t hits = 0;
  for (std::uint64_t k : within)
    if (mu(static_cast<NodeId>(k >> 32), static_cast<NodeId>(k & 0xffffffffU))) ++hits;
  return static_cast<double>(hits) / static_cast<double>(within.size()) / base;
}

}  // namespace nlc
