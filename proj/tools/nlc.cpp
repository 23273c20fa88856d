// nlc: command-line front end for fitting, detection, sweeps, evaluation and
// recursive bipartitioning.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "nlc/io.hpp"

namespace {

using nlc::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string input;
  std::string format = "auto";
  bool binarize = false;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::string output;
  double tol = 1e-8;
  int max_iter = 1000;
  std::optional<std::size_t> restarts;

  std::optional<std::size_t> c;
  std::string c_range;
  std::string scheme = "hybrid";
  std::vector<std::string> schemes{"node", "link", "hybrid"};
  std::size_t type_restarts = 8;
  std::size_t sweeps = 50;
  bool with_memberships = false;
  std::string table_format = "tsv";

  std::string structure;
  std::string reference;
  std::string oracle;

  double min_gain = 1e-4;
  std::size_t min_size = 3;
  std::string stop = "likelihood";
  std::size_t stability = 0;
};

struct Loaded {
  nlc::Graph graph;
  nlc::IngestReport report;
  std::string checksum;
};

Loaded load(const Config& cfg) {
  std::string text;
  try {
    text = nlc::read_file(cfg.input);
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
  std::string format = cfg.format;
  if (format == "auto") {
    const bool gml = cfg.input.size() >= 4 && cfg.input.compare(cfg.input.size() - 4, 4, ".gml") == 0;
    format = gml ? "gml" : "edgelist";
  }
  nlc::ParsedGraph parsed =
      format == "gml" ? nlc::parse_gml_string(text) : nlc::parse_edge_list_string(text);
  for (const auto& w : parsed.report.warnings) std::cerr << "warning: " << w << "\n";
  if (parsed.graph.num_edges() == 0) throw InputError("input graph has no edges");
  Loaded out{cfg.binarize ? nlc::binarize(parsed.graph) : std::move(parsed.graph),
             std::move(parsed.report), nlc::fnv1a_hex(text)};
  return out;
}

std::uint64_t resolve_seed(const Config& cfg) {
  if (cfg.seed) return *cfg.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--c-range expects a:b, got '" + text + "'");
  std::size_t lo = 0, hi = 0;
  try {
    std::size_t used = 0;
    lo = std::stoul(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("");
    const std::string rest = text.substr(colon + 1);
    hi = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw UsageError("--c-range expects a:b, got '" + text + "'");
  }
  if (lo < 1 || hi < lo) throw UsageError("--c-range needs 1 <= a <= b");
  return {lo, hi};
}

// Community counts from --c or --c-range; the default range when neither is
// given and `required` is false.
std::pair<std::size_t, std::size_t> community_counts(const Config& cfg, const nlc::Graph& g,
                                                     bool required) {
  if (cfg.c && !cfg.c_range.empty()) throw UsageError("give either --c or --c-range, not both");
  if (cfg.c) return {*cfg.c, *cfg.c};
  if (!cfg.c_range.empty()) return parse_range(cfg.c_range);
  if (required) throw UsageError("one of --c or --c-range is required");
  return {2, std::min<std::size_t>(g.num_nodes(), 30)};
}

json ingest_json(const nlc::IngestReport& r) {
  return json{{"nodes", r.nodes},
              {"edges", r.edges},
              {"duplicates_merged", r.duplicates_merged},
              {"isolated_dropped", r.isolated_dropped},
              {"self_loops", r.self_loops},
              {"warnings", r.warnings}};
}

json common_config(const Config& cfg) {
  return json{{"format", cfg.format},
              {"binarize", cfg.binarize},
              {"tol", cfg.tol},
              {"max_iter", cfg.max_iter}};
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw InputError("cannot write '" + cfg.output + "'");
  out << text;
}

void emit_json(const Config& cfg, const std::string& command, const Loaded& in,
               std::uint64_t seed, json config, json result) {
  nlc::Provenance p{command, cfg.input, in.checksum, seed, std::move(config)};
  json doc{{"provenance", nlc::to_json(p)}, {"ingest", ingest_json(in.report)},
           {"result", std::move(result)}};
  emit(cfg, doc.dump(2) + "\n");
}

nlc::SelectionOptions selection_options(const Config& cfg, std::uint64_t seed,
                                        std::pair<std::size_t, std::size_t> cs) {
  nlc::SelectionOptions o;
  o.c_min = cs.first;
  o.c_max = cs.second;
  o.restarts = cfg.restarts.value_or(50);
  o.fit.tol = cfg.tol;
  o.fit.max_iter = cfg.max_iter;
  o.fit.seed = seed;
  o.types.restarts = cfg.type_restarts;
  o.types.max_sweeps = cfg.sweeps;
  return o;
}

int cmd_fit(const Config& cfg) {
  if (!cfg.c) throw UsageError("fit needs --c");
  const Loaded in = load(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  nlc::FitOptions fo;
  fo.tol = cfg.tol;
  fo.max_iter = cfg.max_iter;
  fo.seed = seed;
  const std::size_t restarts = cfg.restarts.value_or(50);
  const nlc::BestFit best = nlc::fit_best(in.graph, *cfg.c, restarts, fo);
  json config = common_config(cfg);
  config["c"] = *cfg.c;
  config["restarts"] = restarts;
  emit_json(cfg, "fit", in, seed, std::move(config),
            {{"fit", nlc::to_json(best.best, in.graph)}, {"restarts", nlc::to_json(best.summary)}});
  return kExitOk;
}

json selection_config(const Config& cfg, const nlc::SelectionOptions& o) {
  json config = common_config(cfg);
  config["c_range"] = {o.c_min, o.c_max};
  config["restarts"] = o.restarts;
  config["type_restarts"] = o.types.restarts;
  config["K"] = o.types.max_sweeps;
  return config;
}

int cmd_detect(const Config& cfg) {
  const nlc::Scheme scheme = nlc::scheme_from_string(cfg.scheme);
  const Loaded in = load(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  const nlc::SelectionOptions o = selection_options(cfg, seed, community_counts(cfg, in.graph, false));
  const nlc::Selection s = nlc::select(in.graph, scheme, o);
  json config = selection_config(cfg, o);
  config["scheme"] = cfg.scheme;
  config["with_memberships"] = cfg.with_memberships;
  emit_json(cfg, "detect", in, seed, std::move(config), nlc::to_json(s, in.graph, cfg.with_memberships));
  return kExitOk;
}

int cmd_sweep(const Config& cfg) {
  std::vector<nlc::Scheme> schemes;
  for (const auto& s : cfg.schemes) schemes.push_back(nlc::scheme_from_string(s));
  if (cfg.table_format != "tsv" && cfg.table_format != "json")
    throw UsageError("--table-format must be tsv or json");
  const Loaded in = load(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  const nlc::SelectionOptions o = selection_options(cfg, seed, community_counts(cfg, in.graph, true));
  const std::vector<std::size_t> cs = nlc::c_range(in.graph, o);
  const std::vector<nlc::SweepRow> rows = nlc::sweep_c(in.graph, cs, schemes, o);

  json config = selection_config(cfg, o);
  config["schemes"] = cfg.schemes;
  config["table_format"] = cfg.table_format;
  if (cfg.table_format == "json") {
    emit_json(cfg, "sweep", in, seed, std::move(config), {{"rows", nlc::sweep_json(rows)}});
  } else {
    nlc::Provenance p{"sweep", cfg.input, in.checksum, seed, std::move(config)};
    emit(cfg, "# " + nlc::to_json(p).dump() + "\n" + nlc::sweep_tsv(rows));
  }
  for (const auto& r : rows)
    if (!r.failed) return kExitOk;
  std::cerr << "error: every community count failed\n";
  return kExitNumeric;
}

int cmd_eval(const Config& cfg) {
  const Loaded in = load(cfg);
  json doc;
  try {
    doc = json::parse(nlc::read_file(cfg.structure));
  } catch (const json::exception& e) {
    throw nlc::SchemaError(std::string("structure file is not valid JSON: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
  const nlc::StoredStructure stored = nlc::parse_structure(doc, in.graph);
  if (!stored.input_checksum.empty() && stored.input_checksum != in.checksum)
    throw nlc::SchemaError("structure was computed from a different input (checksum " +
                           stored.input_checksum + ", input " + in.checksum + ")");

  const nlc::MdlReport report = nlc::map_equation(in.graph, stored.cover);
  json result{{"communities", stored.cover.num_communities()}, {"mdl", nlc::to_json(report)}};
  if (stored.has_mdl) {
    result["stored_mdl"] = stored.mdl;
    result["mdl_difference"] = report.L - stored.mdl;
  }
  const nlc::WacResult w = nlc::wac(in.graph, stored.cover.sets);
  result["wac"] = {{"value", w.value}, {"conductance", w.phi}, {"warnings", w.warnings}};
  for (const auto& msg : w.warnings) std::cerr << "warning: " << msg << "\n";

  auto open = [](const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open '" + path + "'");
    return f;
  };
  if (!cfg.reference.empty()) {
    std::ifstream f = open(cfg.reference);
    const nlc::ReferenceCover ref = nlc::load_reference_cover(f, in.graph);
    for (const auto& msg : ref.warnings) std::cerr << "warning: " << msg << "\n";
    result["enmi"] = nlc::enmi(stored.cover, ref.cover);
    result["reference"] = {{"path", cfg.reference}, {"communities", ref.names}};
  }
  if (!cfg.oracle.empty()) {
    std::ifstream f = open(cfg.oracle);
    const nlc::LoadedOracle oracle = nlc::load_similarity_oracle(f, in.graph);
    for (const auto& msg : oracle.warnings) std::cerr << "warning: " << msg << "\n";
    result["enrichment"] = nlc::pair_enrichment(stored.cover, oracle.oracle);
    result["oracle"] = {{"path", cfg.oracle}, {"similar_pairs", oracle.oracle.positive_pairs()}};
  }

  json config = common_config(cfg);
  config["structure"] = cfg.structure;
  config["reference"] = cfg.reference;
  config["oracle"] = cfg.oracle;
  const std::uint64_t seed =
      doc.contains("provenance") ? doc["provenance"].value("seed", std::uint64_t{0}) : 0;
  emit_json(cfg, "eval", in, seed, std::move(config), std::move(result));
  return kExitOk;
}

int cmd_bipartition(const Config& cfg) {
  if (cfg.stop != "likelihood" && cfg.stop != "mdl") throw UsageError("--stop must be likelihood or mdl");
  const Loaded in = load(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  nlc::BipartitionOptions o;
  o.restarts = cfg.restarts.value_or(10);
  o.min_gain = cfg.min_gain;
  o.min_size = cfg.min_size;
  o.stop = cfg.stop == "mdl" ? nlc::StopRule::Mdl : nlc::StopRule::Likelihood;
  o.fit.tol = cfg.tol;
  o.fit.max_iter = cfg.max_iter;
  o.fit.seed = seed;

  const nlc::Bipartition b = nlc::recursive_bipartition(in.graph, o);
  json result = nlc::to_json(b, in.graph);
  result["mdl"] = nlc::to_json(
      nlc::map_equation(in.graph, nlc::make_cover(in.graph.num_nodes(), b.leaves)));
  if (cfg.stability > 0) {
    json runs = json::array();
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t r = 0; r < cfg.stability; ++r) {
      nlc::BipartitionOptions ro = o;
      ro.fit.seed = nlc::derive_seed(seed, r);
      const std::size_t leaves = nlc::recursive_bipartition(in.graph, ro).leaves.size();
      lo = std::min(lo, leaves);
      hi = std::max(hi, leaves);
      runs.push_back({{"seed", ro.fit.seed}, {"leaves", leaves}});
    }
    result["stability"] = {{"runs", std::move(runs)}, {"min_leaves", lo}, {"max_leaves", hi}};
  }

  json config = common_config(cfg);
  config["restarts"] = o.restarts;
  config["min_gain"] = o.min_gain;
  config["min_size"] = o.min_size;
  config["stop"] = cfg.stop;
  config["stability"] = cfg.stability;
  emit_json(cfg, "bipartition", in, seed, std::move(config), std::move(result));
  return kExitOk;
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--input,-i", cfg.input, "Graph file (GML or edge list)")->required();
  sub->add_option("--format", cfg.format, "Input format")
      ->check(CLI::IsMember({"auto", "gml", "edgelist"}));
  sub->add_flag("--binarize", cfg.binarize, "Replace every edge weight by 1");
  sub->add_option("--seed", cfg.seed, "Master seed (random when omitted; always echoed)");
  sub->add_option("--threads", cfg.threads, "Worker threads (default: all cores)");
  sub->add_option("--output,-o", cfg.output, "Output file (default: stdout)");
}

void add_fit_options(CLI::App* sub, Config& cfg) {
  sub->add_option("--tol", cfg.tol, "Relative log-likelihood tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-iter", cfg.max_iter, "EM iteration cap")->check(CLI::PositiveNumber);
  sub->add_option("--restarts", cfg.restarts, "EM restarts per fit")->check(CLI::PositiveNumber);
}

void add_counts(CLI::App* sub, Config& cfg) {
  sub->add_option("--c", cfg.c, "Number of communities")->check(CLI::PositiveNumber);
  sub->add_option("--c-range", cfg.c_range, "Inclusive range a:b of community counts");
}

void add_type_options(CLI::App* sub, Config& cfg) {
  sub->add_option("--type-restarts", cfg.type_restarts, "Greedy type-search restarts")
      ->check(CLI::PositiveNumber);
  sub->add_option("--K", cfg.sweeps, "Sweep cap of the greedy type search")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid node/link community detection"};
  app.set_version_flag("--version", nlc::kVersion);
  app.require_subcommand(1);
  Config cfg;

  CLI::App* fit = app.add_subcommand("fit", "Fit the model for a fixed number of communities");
  add_common(fit, cfg);
  add_fit_options(fit, cfg);
  add_counts(fit, cfg);

  CLI::App* detect = app.add_subcommand("detect", "Fit, type, and score a community structure");
  add_common(detect, cfg);
  add_fit_options(detect, cfg);
  add_counts(detect, cfg);
  add_type_options(detect, cfg);
  detect->add_option("--scheme", cfg.scheme, "node, link or hybrid")
      ->check(CLI::IsMember({"node", "link", "hybrid"}));
  detect->add_flag("--with-memberships", cfg.with_memberships, "Include the S and R matrices");

  CLI::App* sweep = app.add_subcommand("sweep", "Description length across community counts");
  add_common(sweep, cfg);
  add_fit_options(sweep, cfg);
  add_counts(sweep, cfg);
  add_type_options(sweep, cfg);
  sweep->add_option("--schemes", cfg.schemes, "Schemes to score")
      ->check(CLI::IsMember({"node", "link", "hybrid"}))
      ->delimiter(',');
  sweep->add_option("--table-format", cfg.table_format, "tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));

  CLI::App* eval = app.add_subcommand("eval", "Score a stored structure");
  add_common(eval, cfg);
  eval->add_option("--structure", cfg.structure, "Output of detect or bipartition")->required();
  eval->add_option("--reference", cfg.reference, "Reference cover: 'label community' lines");
  eval->add_option("--oracle", cfg.oracle, "Similar pairs: 'labelA labelB' lines");

  CLI::App* bip = app.add_subcommand("bipartition", "Recursive two-way splitting");
  add_common(bip, cfg);
  add_fit_options(bip, cfg);
  bip->add_option("--min-gain", cfg.min_gain, "Relative log-likelihood gain needed to split");
  bip->add_option("--min-size", cfg.min_size, "Smallest subgraph that may be split");
  bip->add_option("--stop", cfg.stop, "likelihood or mdl")->check(CLI::IsMember({"likelihood", "mdl"}));
  bip->add_option("--stability", cfg.stability, "Also report leaf counts over this many seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (cfg.threads > 0) setenv("NLC_THREADS", std::to_string(cfg.threads).c_str(), 1);

  try {
    if (*fit) return cmd_fit(cfg);
    if (*detect) return cmd_detect(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*eval) return cmd_eval(cfg);
    return cmd_bipartition(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlc::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlc::SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
