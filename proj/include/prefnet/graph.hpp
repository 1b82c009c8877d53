#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prefnet {

enum class NetworkKind { behavioral, cognitive };

std::string_view to_string(NetworkKind kind);
NetworkKind parse_network(std::string_view text);

using NodeIndex = std::uint32_t;
/// Value index per schema attribute; empty when the node has no value yet.
using AttributeRow = std::vector<std::optional<std::size_t>>;

/// Unordered pair of distinct nodes, stored with u < v.
struct NodePair {
  NodeIndex u = 0;
  NodeIndex v = 0;

  static NodePair of(NodeIndex a, NodeIndex b);
  auto operator<=>(const NodePair&) const = default;
};

/// Behavioral edge weight: 10 per call, 1 per text. Both zero is an error.
std::uint64_t edge_weight(std::uint64_t calls, std::uint64_t texts);

/// One semester of both networks plus node attributes. Immutable.
class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(int semester, std::vector<std::string> node_ids,
           std::vector<AttributeRow> attributes,
           std::map<NodePair, std::uint64_t> behavioral,
           std::set<NodePair> cognitive);

  int semester() const { return semester_; }
  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t attribute_count() const { return attribute_count_; }

  const std::string& node_id(NodeIndex node) const { return node_ids_.at(node); }
  const std::vector<std::string>& node_ids() const { return node_ids_; }
  std::optional<NodeIndex> find_node(std::string_view id) const;
  /// Throws Error(invalid_argument) for unknown ids.
  NodeIndex index_of(std::string_view id) const;

  const AttributeRow& attributes(NodeIndex node) const { return attributes_.at(node); }
  std::optional<std::size_t> value(NodeIndex node, std::size_t attribute) const;

  const std::map<NodePair, std::uint64_t>& behavioral_edges() const { return behavioral_; }
  const std::set<NodePair>& cognitive_edges() const { return cognitive_; }
  std::vector<NodePair> edges(NetworkKind kind) const;
  std::size_t edge_count(NetworkKind kind) const;

  bool has_edge(NetworkKind kind, NodeIndex a, NodeIndex b) const;
  std::optional<std::uint64_t> weight(NodeIndex a, NodeIndex b) const;
  /// Sorted neighbor list.
  std::span<const NodeIndex> neighbors(NetworkKind kind, NodeIndex node) const;

  bool operator==(const Snapshot& other) const;

 private:
  void check_node(NodeIndex node) const;

  int semester_ = 0;
  std::size_t attribute_count_ = 0;
  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<AttributeRow> attributes_;
  std::map<NodePair, std::uint64_t> behavioral_;
  std::set<NodePair> cognitive_;
  std::vector<std::vector<NodeIndex>> behavioral_adj_;
  std::vector<std::vector<NodeIndex>> cognitive_adj_;
};

std::size_t common_neighbors(const Snapshot& snapshot, NetworkKind kind, NodeIndex u, NodeIndex v);

/// Nodes at shortest-path distance 1..hops from `node`, ascending by index.
std::vector<NodeIndex> within_hops(const Snapshot& snapshot, NetworkKind kind, NodeIndex node,
                                   unsigned hops);

/// Breadth-first distances from `node`, capped at `limit`; unreached nodes hold -1.
std::vector<int> hop_distances(const Snapshot& snapshot, NetworkKind kind, NodeIndex node,
                               unsigned limit);

}  // namespace prefnet
