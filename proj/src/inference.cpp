#include "nlc/inference.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlc {

std::string to_string(CommunityType t) { return t == CommunityType::Node ? "node" : "link"; }

CommunityType community_type_from_string(const std::string& s) {
  if (s == "node") return CommunityType::Node;
  if (s == "link") return CommunityType::Link;
  throw std::invalid_argument("unknown community type '" + s + "'");
}

std::vector<double> node_memberships(const ModelParams& p) {
  const std::size_t c = p.num_communities();
  std::vector<double> s(p.num_nodes() * c);
  for (std::size_t i = 0; i < p.num_nodes(); ++i) {
    const auto row = p.row(i);
    double sum = 0.0;
    for (double x : row) sum += x;
    if (!(sum > 0.0))
      throw std::domain_error("node " + std::to_string(i) + " has no community mass");
    for (std::size_t k = 0; k < c; ++k) s[i * c + k] = row[k] / sum;
  }
  return s;
}

std::vector<double> link_memberships(const ModelParams& p, const Graph& g) {
  const EdgeResponsibilities q = e_step(g, p);
  const std::size_t c = p.num_communities();
  std::vector<double> r(g.num_edges() * c);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    std::copy_n(q.row(e).begin(), c, r.begin() + static_cast<std::ptrdiff_t>(e * c));
  return r;
}

Memberships memberships(const ModelParams& p, const Graph& g) {
  Memberships m;
  m.n = g.num_nodes();
  m.m = g.num_edges();
  m.c = p.num_communities();
  m.node = node_memberships(p);
  m.link = link_memberships(p, g);
  return m;
}

std::size_t argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < row.size(); ++k)
    if (row[k] > row[best]) best = k;
  return best;
}

HybridStructure assign(const Memberships& m, const TypeFlags& types) {
  if (types.size() != m.c) throw std::invalid_argument("type flags must have one entry per community");
  HybridStructure h;
  h.types = types;
  h.node_members.resize(m.c);
  h.link_members.resize(m.c);
  for (std::size_t i = 0; i < m.n; ++i) {
    const std::size_t k = argmax(m.node_row(i));
    if (types[k] == CommunityType::Node)
      h.node_members[k].push_back(static_cast<NodeId>(i));
    else
      h.background_nodes.push_back(static_cast<NodeId>(i));
  }
  for (std::size_t e = 0; e < m.m; ++e) {
    const std::size_t k = argmax(m.link_row(e));
    if (types[k] == CommunityType::Link)
      h.link_members[k].push_back(e);
    else
      h.background_links.push_back(e);
  }
  return h;
}

bool Cover::covers_all() const {
  return std::all_of(of_node.begin(), of_node.end(), [](const auto& v) { return !v.empty(); });
}

Cover make_cover(std::size_t n, std::vector<std::vector<NodeId>> sets) {
  Cover cover;
  cover.n = n;
  cover.of_node.resize(n);
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (!set.empty() && set.back() >= n) throw std::out_of_range("cover member out of range");
  }
  for (std::uint32_t k = 0; k < sets.size(); ++k)
    for (NodeId i : sets[k]) cover.of_node[i].push_back(k);
  cover.sets = std::move(sets);
  return cover;
}

Cover to_cover(const HybridStructure& h, const Memberships& m, const Graph& g) {
  const std::size_t c = h.types.size();
  std::vector<std::vector<NodeId>> sets(c);
  std::vector<bool> covered(g.num_nodes(), false);
  for (std::size_t k = 0; k < c; ++k) {
    if (h.types[k] == CommunityType::Node) {
      sets[k] = h.node_members[k];
    } else {
      for (std::size_t e : h.link_members[k]) {
        sets[k].push_back(g.edges()[e].u);
        sets[k].push_back(g.edges()[e].v);
      }
    }
    for (NodeId i : sets[k]) covered[i] = true;
  }
  for (NodeId i = 0; i < g.num_nodes(); ++i)
    if (!covered[i]) sets[argmax(m.node_row(i))].push_back(i);
  return make_cover(g.num_nodes(), std::move(sets));
}

}  // namespace nlc
