#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlc {

using NodeId = std::uint32_t;

/// An undirected edge stored once with u <= v.
struct Edge {
  NodeId u;
  NodeId v;
  double w;

  bool is_self_loop() const { return u == v; }
};

/// One entry of a node's adjacency row.
///
/// Rows follow the symmetric-adjacency convention A_ii = 2 w_ii, so a
/// self-loop appears once in its node's row with twice the stored weight and
/// row sums equal weighted degrees.
struct Neighbor {
  NodeId node;
  double weight;
  std::size_t edge;  // index into Graph::edges()
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct IngestReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t duplicates_merged = 0;
  std::size_t isolated_dropped = 0;
  std::size_t self_loops = 0;
  std::vector<std::string> warnings;
};

/// Undirected weighted graph, immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from raw edges. Duplicate unordered pairs are merged by
  /// summing weights; the number of merges is reported through `merged`.
  /// Throws std::invalid_argument on out-of-range ids or non-positive weights.
  Graph(std::vector<std::string> labels, const std::vector<Edge>& raw_edges,
        std::size_t* merged = nullptr);

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }

  /// Sum of incident weights with self-loops counted twice.
  double weighted_degree(NodeId i) const;
  std::span<const double> degrees() const { return degrees_; }

  /// Sum of stored edge weights (each undirected edge once).
  double total_weight() const { return total_weight_; }

  const std::string& label(NodeId i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Returns the id for a label, or -1 when absent.
  std::int64_t find(const std::string& label) const;

  /// Weight of the stored edge {i, j}, 0 when absent.
  double weight(NodeId i, NodeId j) const;

  bool operator==(const Graph& other) const {
    if (labels_ != other.labels_ || edges_.size() != other.edges_.size()) return false;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].u != other.edges_[e].u || edges_[e].v != other.edges_[e].v ||
          edges_[e].w != other.edges_[e].w)
        return false;
    }
    return true;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;  // sorted by (u, v)
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
};

struct ParsedGraph {
  Graph graph;
  IngestReport report;
};

/// Parses "u v [w]" lines; '#' starts a comment. Node tokens map to dense
/// ids in order of first appearance.
ParsedGraph parse_edge_list(std::istream& in);
ParsedGraph parse_edge_list_string(const std::string& text);

/// Parses the graph/node/edge subset of GML. Node labels come from the
/// `label` key when present, otherwise from the numeric id. Nodes without
/// incident edges are dropped with a warning.
ParsedGraph parse_gml(std::istream& in);
ParsedGraph parse_gml_string(const std::string& text);

/// Loads a graph file, choosing GML for a ".gml" extension and the edge-list
/// format otherwise. Throws std::runtime_error when the file cannot be read.
ParsedGraph load_graph(const std::string& path);

/// Serializes to the edge-list format accepted by parse_edge_list. For a graph
/// that came from parse_edge_list, reparsing the text gives an identical graph.
std::string to_edge_list(const Graph& g);

/// Copy of `g` with every weight replaced by 1.
Graph binarize(const Graph& g);

/// Subgraph induced by `nodes` (ids of `g`); node i of the result is nodes[i].
/// Nodes left without edges are kept, so the result may contain zero-degree
/// nodes.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// Component id per node (0-based, in order of lowest member id).
std::vector<std::size_t> connected_components(const Graph& g);

}  // namespace nlc
