#include "nlc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace nlc {

Graph::Graph(std::vector<std::string> labels, const std::vector<Edge>& raw_edges,
             std::size_t* merged)
    : labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  std::vector<Edge> sorted;
  sorted.reserve(raw_edges.size());
  for (const Edge& e : raw_edges) {
    if (e.u >= n || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw std::invalid_argument("edge weight must be positive and finite");
    sorted.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  std::size_t merges = 0;
  for (const Edge& e : sorted) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().w += e.w;
      ++merges;
    } else {
      edges_.push_back(e);
    }
  }
  if (merged) *merged = merges;

  degrees_.assign(n, 0.0);
  std::vector<std::size_t> counts(n, 0);
  for (const Edge& e : edges_) {
    total_weight_ += e.w;
    degrees_[e.u] += e.w;
    degrees_[e.v] += e.w;
    ++counts[e.u];
    if (!e.is_self_loop()) ++counts[e.v];
  }

  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + counts[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t idx = 0; idx < edges_.size(); ++idx) {
    const Edge& e = edges_[idx];
    if (e.is_self_loop()) {
      adjacency_[fill[e.u]++] = {e.u, 2.0 * e.w, idx};
    } else {
      adjacency_[fill[e.u]++] = {e.v, e.w, idx};
      adjacency_[fill[e.v]++] = {e.u, e.w, idx};
    }
  }
}

double Graph::weighted_degree(NodeId i) const {
  if (i >= num_nodes()) throw std::out_of_range("node id out of range");
  return degrees_[i];
}

std::int64_t Graph::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<std::int64_t>(it - labels_.begin());
}

double Graph::weight(NodeId i, NodeId j) const {
  const NodeId a = std::min(i, j);
  const NodeId b = std::max(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, b, 0.0},
                             [](const Edge& x, const Edge& y) {
                               return x.u != y.u ? x.u < y.u : x.v < y.v;
                             });
  return (it != edges_.end() && it->u == a && it->v == b) ? it->w : 0.0;
}

namespace {

bool parse_double(std::string_view s, double& out) {
  // std::from_chars for double is available in libstdc++ 11.
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

ParsedGraph finish(std::vector<std::string> labels, std::vector<Edge> edges,
                   std::vector<std::string> warnings) {
  // Drop nodes that no edge references.
  std::vector<bool> used(labels.size(), false);
  for (const Edge& e : edges) used[e.u] = used[e.v] = true;
  std::vector<NodeId> remap(labels.size());
  std::vector<std::string> kept;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (used[i]) {
      remap[i] = static_cast<NodeId>(kept.size());
      kept.push_back(std::move(labels[i]));
    } else {
      warnings.push_back("dropped isolated node '" + labels[i] + "'");
      ++dropped;
    }
  }
  std::size_t loops = 0;
  for (Edge& e : edges) {
    e.u = remap[e.u];
    e.v = remap[e.v];
    if (e.u == e.v) ++loops;
  }
  ParsedGraph out;
  std::size_t merged = 0;
  out.graph = Graph(std::move(kept), edges, &merged);
  out.report.nodes = out.graph.num_nodes();
  out.report.edges = out.graph.num_edges();
  out.report.duplicates_merged = merged;
  out.report.isolated_dropped = dropped;
  out.report.self_loops = loops;
  out.report.warnings = std::move(warnings);
  return out;
}

}  // namespace

ParsedGraph parse_edge_list(std::istream& in) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.try_emplace(token, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError(lineno, "expected 'u v [w]', got " + std::to_string(tokens.size()) +
                                   " tokens");
    double w = 1.0;
    if (tokens.size() == 3) {
      if (!parse_double(tokens[2], w) || !std::isfinite(w))
        throw ParseError(lineno, "weight '" + tokens[2] + "' is not a number");
      if (!(w > 0.0)) throw ParseError(lineno, "weight must be positive");
    }
    const NodeId u = intern(tokens[0]);
    const NodeId v = intern(tokens[1]);
    edges.push_back({u, v, w});
  }
  return finish(std::move(labels), std::move(edges), {});
}

ParsedGraph parse_edge_list_string(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

namespace {

struct GmlToken {
  enum Kind { Word, Number, String, Open, Close } kind;
  std::string text;
  std::size_t line;
};

std::vector<GmlToken> tokenize_gml(std::istream& in) {
  std::vector<GmlToken> tokens;
  std::size_t line = 1;
  char ch;
  while (in.get(ch)) {
    if (ch == '\n') {
      ++line;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      continue;
    } else if (ch == '#') {
      while (in.get(ch) && ch != '\n') {
      }
      ++line;
    } else if (ch == '[') {
      tokens.push_back({GmlToken::Open, "[", line});
    } else if (ch == ']') {
      tokens.push_back({GmlToken::Close, "]", line});
    } else if (ch == '"') {
      const std::size_t start = line;
      std::string s;
      bool closed = false;
      while (in.get(ch)) {
        if (ch == '"') {
          closed = true;
          break;
        }
        if (ch == '\n') ++line;
        s.push_back(ch);
      }
      if (!closed) throw ParseError(start, "unterminated string");
      tokens.push_back({GmlToken::String, std::move(s), start});
    } else {
      std::string s(1, ch);
      while (in.peek() != EOF && !std::isspace(in.peek()) && in.peek() != '[' &&
             in.peek() != ']' && in.peek() != '"') {
        s.push_back(static_cast<char>(in.get()));
      }
      const bool numeric = std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' ||
                           s[0] == '+' || s[0] == '.';
      tokens.push_back({numeric ? GmlToken::Number : GmlToken::Word, std::move(s), line});
    }
  }
  return tokens;
}

struct GmlValue {
  std::string scalar;
  bool is_list = false;
  std::vector<std::pair<std::string, GmlValue>> items;
  std::size_t line = 0;
};

class GmlReader {
 public:
  explicit GmlReader(std::vector<GmlToken> tokens) : tokens_(std::move(tokens)) {}

  std::vector<std::pair<std::string, GmlValue>> read_document() {
    auto items = read_items(false);
    return items;
  }

 private:
  std::vector<std::pair<std::string, GmlValue>> read_items(bool nested) {
    std::vector<std::pair<std::string, GmlValue>> items;
    while (pos_ < tokens_.size()) {
      const GmlToken& key = tokens_[pos_];
      if (key.kind == GmlToken::Close) {
        if (!nested) throw ParseError(key.line, "unbalanced ']'");
        ++pos_;
        return items;
      }
      if (key.kind != GmlToken::Word)
        throw ParseError(key.line, "expected a key, found '" + key.text + "'");
      ++pos_;
      if (pos_ >= tokens_.size()) throw ParseError(key.line, "key '" + key.text + "' has no value");
      const GmlToken& tok = tokens_[pos_];
      GmlValue value;
      value.line = tok.line;
      if (tok.kind == GmlToken::Open) {
        ++pos_;
        value.is_list = true;
        value.items = read_items(true);
      } else if (tok.kind == GmlToken::Close) {
        throw ParseError(tok.line, "key '" + key.text + "' has no value");
      } else {
        value.scalar = tok.text;
        ++pos_;
      }
      items.emplace_back(key.text, std::move(value));
    }
    if (nested) {
      const std::size_t line = tokens_.empty() ? 1 : tokens_.back().line;
      throw ParseError(line, "unbalanced '[': list not closed before end of input");
    }
    return items;
  }

  std::vector<GmlToken> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedGraph parse_gml(std::istream& in) {
  GmlReader reader(tokenize_gml(in));
  auto doc = reader.read_document();

  const GmlValue* graph = nullptr;
  for (const auto& [key, value] : doc) {
    if (key == "graph" && value.is_list) {
      graph = &value;
      break;
    }
  }
  if (!graph) throw ParseError(1, "no 'graph [ ... ]' block");

  std::vector<std::string> labels;
  std::map<std::string, NodeId> by_gml_id;
  struct PendingEdge {
    std::string source, target;
    double w;
    std::size_t line;
  };
  std::vector<PendingEdge> pending;
  std::vector<std::string> warnings;

  for (const auto& [key, value] : graph->items) {
    if (key == "directed" && value.scalar == "1")
      warnings.push_back("graph declared directed; edges are read as undirected");
    if (key == "node") {
      if (!value.is_list) throw ParseError(value.line, "'node' must be a list");
      std::string id, label;
      for (const auto& [k, v] : value.items) {
        if (k == "id") id = v.scalar;
        if (k == "label") label = v.scalar;
      }
      if (id.empty()) throw ParseError(value.line, "node without id");
      if (by_gml_id.count(id)) throw ParseError(value.line, "duplicate node id " + id);
      by_gml_id[id] = static_cast<NodeId>(labels.size());
      labels.push_back(label.empty() ? id : label);
    } else if (key == "edge") {
      if (!value.is_list) throw ParseError(value.line, "'edge' must be a list");
      PendingEdge e{"", "", 1.0, value.line};
      for (const auto& [k, v] : value.items) {
        if (k == "source") e.source = v.scalar;
        if (k == "target") e.target = v.scalar;
        if (k == "value" || k == "weight") {
          if (!parse_double(v.scalar, e.w) || !std::isfinite(e.w))
            throw ParseError(v.line, "edge weight '" + v.scalar + "' is not a number");
          if (!(e.w > 0.0)) throw ParseError(v.line, "edge weight must be positive");
        }
      }
      if (e.source.empty() || e.target.empty())
        throw ParseError(value.line, "edge without source or target");
      pending.push_back(std::move(e));
    }
  }

  std::vector<Edge> edges;
  edges.reserve(pending.size());
  for (const PendingEdge& e : pending) {
    auto s = by_gml_id.find(e.source);
    auto t = by_gml_id.find(e.target);
    if (s == by_gml_id.end())
      throw ParseError(e.line, "edge references undeclared node id " + e.source);
    if (t == by_gml_id.end())
      throw ParseError(e.line, "edge references undeclared node id " + e.target);
    edges.push_back({s->second, t->second, e.w});
  }
  return finish(std::move(labels), std::move(edges), std::move(warnings));
}

ParsedGraph parse_gml_string(const std::string& text) {
  std::istringstream in(text);
  return parse_gml(in);
}

ParsedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const bool gml = path.size() >= 4 && path.compare(path.size() - 4, 4, ".gml") == 0;
  return gml ? parse_gml(in) : parse_edge_list(in);
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  std::vector<bool> emitted(g.num_edges(), false);
  auto write = [&](std::size_t e, NodeId first, NodeId second) {
    out << g.label(first) << ' ' << g.label(second) << ' ' << g.edges()[e].w << '\n';
    emitted[e] = true;
  };
  // Introduce nodes in id order so that reparsing assigns the same ids:
  // node x arrives through an edge to an earlier node, else paired with
  // x + 1, else through its self-loop.
  std::vector<bool> seen(g.num_nodes(), false);
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    if (seen[x]) continue;
    const Neighbor* pick = nullptr;
    for (const Neighbor& nb : g.neighbors(x))
      if (nb.node < x && (!pick || nb.node < pick->node)) pick = &nb;
    if (!pick)
      for (const Neighbor& nb : g.neighbors(x))
        if (nb.node == x + 1 || (nb.node == x && !pick)) pick = &nb;
    if (!pick && !g.neighbors(x).empty()) pick = &g.neighbors(x).front();
    if (!pick) continue;
    if (pick->node < x)
      write(pick->edge, pick->node, x);
    else
      write(pick->edge, x, pick->node);
    seen[x] = seen[pick->node] = true;
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (!emitted[e]) write(e, g.edges()[e].u, g.edges()[e].v);
  return out.str();
}

Graph binarize(const Graph& g) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (Edge& e : edges) e.w = 1.0;
  return Graph(g.labels(), edges);
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<std::int64_t> local(g.num_nodes(), -1);
  std::vector<std::string> labels;
  labels.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    local.at(nodes[i]) = static_cast<std::int64_t>(i);
    labels.push_back(g.label(nodes[i]));
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] >= 0 && local[e.v] >= 0)
      edges.push_back({static_cast<NodeId>(local[e.u]), static_cast<NodeId>(local[e.v]), e.w});
  }
  return Graph(std::move(labels), edges);
}

std::vector<std::size_t> connected_components(const Graph& g) {
  const std::size_t n = g.num_nodes();
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(n, unset);
  std::size_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(x)) {
        if (comp[nb.node] == unset) {
          comp[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace nlc
