#include "nlc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlc {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json to_json(const Provenance& p) {
  return json{{"tool", "nlc"},
              {"version", kVersion},
              {"command", p.command},
              {"seed", p.seed},
              {"input", {{"path", p.input_path}, {"checksum", p.input_checksum}}},
              {"config", p.config}};
}

json to_json(const ModelParams& p, const Graph& g) {
  json rows = json::array();
  for (NodeId i = 0; i < p.num_nodes(); ++i) {
    const auto r = p.row(i);
    rows.push_back({{"node", g.label(i)}, {"d", std::vector<double>(r.begin(), r.end())}});
  }
  const auto t = p.totals();
  return json{{"c", p.num_communities()},
              {"totals", std::vector<double>(t.begin(), t.end())},
              {"rows", std::move(rows)}};
}

json to_json(const FitResult& f, const Graph& g) {
  return json{{"log_likelihood", f.log_likelihood},
              {"iterations", f.iterations},
              {"converged", f.converged},
              {"restart_seed", f.seed},
              {"trace", f.trace},
              {"params", to_json(f.params, g)}};
}

json to_json(const RestartSummary& s) {
  return json{{"restarts", s.restarts},
              {"best_restart", s.best_restart},
              {"failed", s.failed},
              {"log_likelihoods", s.log_likelihoods}};
}

json to_json(const MdlReport& r) {
  return json{{"L", r.L},     {"q_out", r.q_out},   {"H_Q", r.H_Q},
              {"q_out_k", r.q_out_k}, {"p_in_k", r.p_in_k}, {"H_P", r.H_P}};
}

namespace {

json labels_of(const std::vector<NodeId>& nodes, const Graph& g) {
  json out = json::array();
  for (NodeId i : nodes) out.push_back(g.label(i));
  return out;
}

json link_labels(std::size_t e, const Graph& g) {
  const Edge& edge = g.edges()[e];
  return json::array({g.label(edge.u), g.label(edge.v)});
}

std::string flag_string(const TypeFlags& flags) {
  std::string s;
  for (CommunityType t : flags) s += t == CommunityType::Node ? 'N' : 'L';
  return s;
}

}  // namespace

json structure_json(const HybridStructure& h, const Cover& cover, const Memberships& m,
                    const Graph& g, bool with_memberships) {
  json communities = json::array();
  for (std::size_t k = 0; k < h.types.size(); ++k) {
    json c{{"id", k}, {"type", to_string(h.types[k])}};
    if (h.types[k] == CommunityType::Node) {
      c["members"] = labels_of(h.node_members[k], g);
    } else {
      json links = json::array();
      for (std::size_t e : h.link_members[k]) links.push_back(link_labels(e, g));
      c["links"] = std::move(links);
    }
    communities.push_back(std::move(c));
  }
  json bg_links = json::array();
  for (std::size_t e : h.background_links) bg_links.push_back(link_labels(e, g));
  json cover_sets = json::array();
  for (const auto& set : cover.sets) cover_sets.push_back(labels_of(set, g));

  json out{{"communities", std::move(communities)},
           {"background_nodes", labels_of(h.background_nodes, g)},
           {"background_links", std::move(bg_links)},
           {"cover", std::move(cover_sets)}};
  if (with_memberships) {
    json s = json::array(), r = json::array();
    for (std::size_t i = 0; i < m.n; ++i) {
      const auto row = m.node_row(i);
      s.push_back({{"node", g.label(static_cast<NodeId>(i))},
                   {"S", std::vector<double>(row.begin(), row.end())}});
    }
    for (std::size_t e = 0; e < m.m; ++e) {
      const auto row = m.link_row(e);
      r.push_back({{"link", link_labels(e, g)}, {"R", std::vector<double>(row.begin(), row.end())}});
    }
    out["memberships"] = {{"node", std::move(s)}, {"link", std::move(r)}};
  }
  return out;
}

json to_json(const Selection& s, const Graph& g, bool with_memberships) {
  json out{{"c", s.c},
           {"scheme", to_string(s.scheme)},
           {"types", flag_string(s.assignment.flags)},
           {"mdl", to_json(s.report)},
           {"log_likelihood", s.fit.log_likelihood},
           {"structure", structure_json(s.structure, s.cover, s.memberships, g, with_memberships)}};
  if (!s.rows.empty()) out["sweep"] = sweep_json(s.rows);
  return out;
}

json sweep_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r{{"c", row.c}, {"failed", row.failed}};
    if (row.failed) {
      r["error"] = row.error;
    } else {
      r["log_likelihood"] = row.fit.log_likelihood;
      r["restarts"] = to_json(row.restarts);
      json schemes = json::object();
      for (const auto& o : row.outcomes)
        schemes[to_string(o.scheme)] = {{"mdl", o.assignment.mdl},
                                        {"types", flag_string(o.assignment.flags)}};
      r["schemes"] = std::move(schemes);
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", x);
  return buf;
}

}  // namespace

std::string sweep_tsv(const std::vector<SweepRow>& rows) {
  std::string out = "c\tscheme\tmdl\tlog_likelihood\ttypes\tstatus\n";
  for (const auto& row : rows) {
    if (row.failed) {
      out += std::to_string(row.c) + "\t-\t-\t-\t-\tfailed: " + row.error + "\n";
      continue;
    }
    for (const auto& o : row.outcomes)
      out += std::to_string(row.c) + "\t" + to_string(o.scheme) + "\t" + fixed(o.assignment.mdl) +
             "\t" + fixed(row.fit.log_likelihood) + "\t" + flag_string(o.assignment.flags) + "\tok\n";
  }
  return out;
}

json to_json(const HierarchyNode& node, const Graph& g) {
  json out{{"nodes", labels_of(node.nodes, g)},
           {"split", node.split},
           {"ll_one", node.ll_one},
           {"ll_two", node.ll_two},
           {"gain", node.gain}};
  if (!std::isnan(node.mdl_one)) {
    out["mdl_one"] = node.mdl_one;
    out["mdl_two"] = node.mdl_two;
  }
  if (!node.note.empty()) out["note"] = node.note;
  json children = json::array();
  for (const auto& child : node.children) children.push_back(to_json(child, g));
  out["children"] = std::move(children);
  return out;
}

json to_json(const Bipartition& b, const Graph& g) {
  json leaves = json::array();
  for (const auto& leaf : b.leaves) leaves.push_back(labels_of(leaf, g));
  return json{{"depth", b.depth},
              {"leaves", leaves},
              {"structure", {{"cover", leaves}}},
              {"hierarchy", to_json(b.root, g)}};
}

StoredStructure parse_structure(const json& doc, const Graph& g) {
  StoredStructure out;
  const json* structure = nullptr;
  if (doc.contains("result") && doc["result"].is_object() && doc["result"].contains("structure"))
    structure = &doc["result"]["structure"];
  else if (doc.contains("structure"))
    structure = &doc["structure"];
  if (!structure || !structure->contains("cover") || !(*structure)["cover"].is_array())
    throw SchemaError("structure file has no cover");

  std::vector<std::vector<NodeId>> sets;
  for (const auto& set : (*structure)["cover"]) {
    if (!set.is_array()) throw SchemaError("cover entries must be arrays of node labels");
    std::vector<NodeId> nodes;
    for (const auto& label : set) {
      if (!label.is_string()) throw SchemaError("node labels must be strings");
      const std::int64_t id = g.find(label.get<std::string>());
      if (id < 0) throw SchemaError("structure names unknown node '" + label.get<std::string>() + "'");
      nodes.push_back(static_cast<NodeId>(id));
    }
    sets.push_back(std::move(nodes));
  }
  if (sets.empty()) throw SchemaError("structure file has an empty cover");
  out.cover = make_cover(g.num_nodes(), std::move(sets));

  if (doc.contains("result") && doc["result"].contains("mdl") && doc["result"]["mdl"].contains("L")) {
    out.mdl = doc["result"]["mdl"]["L"].get<double>();
    out.has_mdl = true;
  }
  if (doc.contains("provenance") && doc["provenance"].contains("input"))
    out.input_checksum = doc["provenance"]["input"].value("checksum", "");
  return out;
}

}  // namespace nlc
