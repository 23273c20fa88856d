#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlc/graph.hpp"
#include "nlc/model.hpp"

namespace nlc {

enum class CommunityType : std::uint8_t { Node, Link };

using TypeFlags = std::vector<CommunityType>;

std::string to_string(CommunityType t);
CommunityType community_type_from_string(const std::string& s);

/// Probabilistic memberships: S (n x c, node i in community k) and R
/// (m x c, edge e in community k), both row-major and row-stochastic.
struct Memberships {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t c = 0;
  std::vector<double> node;
  std::vector<double> link;

  std::span<const double> node_row(std::size_t i) const { return {node.data() + i * c, c}; }
  std::span<const double> link_row(std::size_t e) const { return {link.data() + e * c, c}; }
};

/// S_i^k = d_ik / sum_r d_ir. Throws std::domain_error for an all-zero row.
std::vector<double> node_memberships(const ModelParams& p);

/// R_ij^k = w^k_ij / w^_ij per stored edge. Throws InfeasibleStateError for
/// an edge with zero expected weight.
std::vector<double> link_memberships(const ModelParams& p, const Graph& g);

Memberships memberships(const ModelParams& p, const Graph& g);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> row);

/// Deterministic communities for given types. Nodes (links) whose argmax
/// community is link-type (node-type) are background.
struct HybridStructure {
  TypeFlags types;
  std::vector<std::vector<NodeId>> node_members;       // per community; empty for link-type
  std::vector<std::vector<std::size_t>> link_members;  // edge indices; empty for node-type
  std::vector<NodeId> background_nodes;
  std::vector<std::size_t> background_links;
};

HybridStructure assign(const Memberships& m, const TypeFlags& types);

/// Family of node sets, possibly overlapping. `sets[k]` is sorted;
/// `of_node[i]` lists the communities containing i in ascending order.
struct Cover {
  std::size_t n = 0;
  std::vector<std::vector<NodeId>> sets;
  std::vector<std::vector<std::uint32_t>> of_node;

  std::size_t num_communities() const { return sets.size(); }
  bool covers_all() const;
};

/// Builds a cover from node sets over n nodes. Duplicate members are removed.
Cover make_cover(std::size_t n, std::vector<std::vector<NodeId>> sets);

/// Cover induced by a hybrid structure: node-type communities contribute
/// their members, link-type ones the endpoints of their links. A node left
/// uncovered joins its argmax-S community.
Cover to_cover(const HybridStructure& h, const Memberships& m, const Graph& g);

}  // namespace nlc
