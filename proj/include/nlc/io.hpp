#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlc/graph.hpp"
#include "nlc/inference.hpp"
#include "nlc/map_equation.hpp"
#include "nlc/metrics.hpp"
#include "nlc/model.hpp"
#include "nlc/model_selection.hpp"

namespace nlc {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Reads a whole file. Throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);

/// Header shared by every output file.
struct Provenance {
  std::string command;
  std::string input_path;
  std::string input_checksum;
  std::uint64_t seed = 0;
  json config = json::object();
};

json to_json(const Provenance& p);

json to_json(const ModelParams& p, const Graph& g);
json to_json(const FitResult& f, const Graph& g);
json to_json(const RestartSummary& s);
json to_json(const MdlReport& r);

/// Communities with their types and members (links as label pairs), the
/// background lists and the derived cover. S and R are included on request.
json structure_json(const HybridStructure& h, const Cover& cover, const Memberships& m,
                    const Graph& g, bool with_memberships);

json to_json(const Selection& s, const Graph& g, bool with_memberships);

json sweep_json(const std::vector<SweepRow>& rows);

/// Tab-separated: c, scheme, mdl, log_likelihood, flags, status.
std::string sweep_tsv(const std::vector<SweepRow>& rows);

json to_json(const HierarchyNode& node, const Graph& g);
json to_json(const Bipartition& b, const Graph& g);

/// Community structure read back from a detect/bipartition output: the
/// cover by node label, its stored MDL when present, and the checksum of
/// the input it was computed from.
struct StoredStructure {
  Cover cover;
  double mdl = 0.0;
  bool has_mdl = false;
  std::string input_checksum;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws SchemaError when required fields are missing or a label is not a
/// node of `g`.
StoredStructure parse_structure(const json& doc, const Graph& g);

}  // namespace nlc
