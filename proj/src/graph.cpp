#include "prefnet/graph.hpp"

#include <algorithm>
#include <deque>

#include "prefnet/error.hpp"

namespace prefnet {

std::string_view to_string(NetworkKind kind) {
  return kind == NetworkKind::behavioral ? "behavioral" : "cognitive";
}

NetworkKind parse_network(std::string_view text) {
  if (text == "behavioral") return NetworkKind::behavioral;
  if (text == "cognitive") return NetworkKind::cognitive;
  throw Error(ErrorKind::invalid_argument,
              "unknown network '" + std::string(text) + "' (expected behavioral|cognitive)");
}

NodePair NodePair::of(NodeIndex a, NodeIndex b) {
  if (a == b) throw Error(ErrorKind::invalid_argument, "node pair needs two distinct nodes");
  return a < b ? NodePair{a, b} : NodePair{b, a};
}

std::uint64_t edge_weight(std::uint64_t calls, std::uint64_t texts) {
  if (calls == 0 && texts == 0)
    throw Error(ErrorKind::invalid_argument, "edge weight of a dyad without calls or texts");
  return 10 * calls + texts;
}

Snapshot::Snapshot(int semester, std::vector<std::string> node_ids,
                   std::vector<AttributeRow> attributes, std::map<NodePair, std::uint64_t> behavioral,
                   std::set<NodePair> cognitive)
    : semester_(semester),
      node_ids_(std::move(node_ids)),
      attributes_(std::move(attributes)),
      behavioral_(std::move(behavioral)),
      cognitive_(std::move(cognitive)) {
  const auto n = node_ids_.size();
  if (attributes_.size() != n)
    throw Error(ErrorKind::validation, "snapshot attribute rows do not match node count");
  attribute_count_ = n > 0 ? attributes_.front().size() : 0;
  for (const auto& row : attributes_)
    if (row.size() != attribute_count_)
      throw Error(ErrorKind::validation, "snapshot attribute rows differ in length");
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(node_ids_[i], static_cast<NodeIndex>(i)).second)
      throw Error(ErrorKind::validation, "duplicate node id '" + node_ids_[i] + "'");
  }

  behavioral_adj_.assign(n, {});
  cognitive_adj_.assign(n, {});
  for (const auto& [pair, weight] : behavioral_) {
    if (pair.u >= pair.v || pair.v >= n)
      throw Error(ErrorKind::validation, "behavioral edge with invalid endpoints");
    if (weight < 1) throw Error(ErrorKind::validation, "behavioral edge with zero weight");
    behavioral_adj_[pair.u].push_back(pair.v);
    behavioral_adj_[pair.v].push_back(pair.u);
  }
  for (const auto& pair : cognitive_) {
    if (pair.u >= pair.v || pair.v >= n)
      throw Error(ErrorKind::validation, "cognitive edge with invalid endpoints");
    cognitive_adj_[pair.u].push_back(pair.v);
    cognitive_adj_[pair.v].push_back(pair.u);
  }
  for (auto& list : behavioral_adj_) std::sort(list.begin(), list.end());
  for (auto& list : cognitive_adj_) std::sort(list.begin(), list.end());
}

std::optional<NodeIndex> Snapshot::find_node(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Snapshot::index_of(std::string_view id) const {
  if (auto node = find_node(id)) return *node;
  throw Error(ErrorKind::invalid_argument, "unknown node '" + std::string(id) + "'");
}

void Snapshot::check_node(NodeIndex node) const {
  if (node >= node_ids_.size())
    throw Error(ErrorKind::invalid_argument, "unknown node index " + std::to_string(node));
}

std::optional<std::size_t> Snapshot::value(NodeIndex node, std::size_t attribute) const {
  check_node(node);
  return attributes_[node].at(attribute);
}

std::vector<NodePair> Snapshot::edges(NetworkKind kind) const {
  std::vector<NodePair> out;
  if (kind == NetworkKind::behavioral) {
    out.reserve(behavioral_.size());
    for (const auto& [pair, weight] : behavioral_) out.push_back(pair);
  } else {
    out.assign(cognitive_.begin(), cognitive_.end());
  }
  return out;
}

std::size_t Snapshot::edge_count(NetworkKind kind) const {
  return kind == NetworkKind::behavioral ? behavioral_.size() : cognitive_.size();
}

bool Snapshot::has_edge(NetworkKind kind, NodeIndex a, NodeIndex b) const {
  check_node(a);
  check_node(b);
  if (a == b) return false;
  const auto pair = NodePair::of(a, b);
  return kind == NetworkKind::behavioral ? behavioral_.contains(pair) : cognitive_.contains(pair);
}

std::optional<std::uint64_t> Snapshot::weight(NodeIndex a, NodeIndex b) const {
  check_node(a);
  check_node(b);
  if (a == b) return std::nullopt;
  const auto it = behavioral_.find(NodePair::of(a, b));
  if (it == behavioral_.end()) return std::nullopt;
  return it->second;
}

std::span<const NodeIndex> Snapshot::neighbors(NetworkKind kind, NodeIndex node) const {
  check_node(node);
  return kind == NetworkKind::behavioral ? behavioral_adj_[node] : cognitive_adj_[node];
}

bool Snapshot::operator==(const Snapshot& other) const {
  return semester_ == other.semester_ && node_ids_ == other.node_ids_ &&
         attributes_ == other.attributes_ && behavioral_ == other.behavioral_ &&
         cognitive_ == other.cognitive_;
}

std::size_t common_neighbors(const Snapshot& snapshot, NetworkKind kind, NodeIndex u, NodeIndex v) {
  if (u == v) throw Error(ErrorKind::invalid_argument, "common_neighbors needs two distinct nodes");
  const auto a = snapshot.neighbors(kind, u);
  const auto b = snapshot.neighbors(kind, v);
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::vector<int> hop_distances(const Snapshot& snapshot, NetworkKind kind, NodeIndex node,
                               unsigned limit) {
  std::vector<int> dist(snapshot.node_count(), -1);
  snapshot.neighbors(kind, node);  // validates the index
  dist[node] = 0;
  std::deque<NodeIndex> queue{node};
  while (!queue.empty()) {
    const auto current = queue.front();
    queue.pop_front();
    if (static_cast<unsigned>(dist[current]) == limit) continue;
    for (const auto next : snapshot.neighbors(kind, current)) {
      if (dist[next] >= 0) continue;
      dist[next] = dist[current] + 1;
      queue.push_back(next);
    }
  }
  return dist;
}

std::vector<NodeIndex> within_hops(const Snapshot& snapshot, NetworkKind kind, NodeIndex node,
                                   unsigned hops) {
  if (hops < 1) throw Error(ErrorKind::invalid_argument, "hop limit must be at least 1");
  const auto dist = hop_distances(snapshot, kind, node, hops);
  std::vector<NodeIndex> out;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] >= 1) out.push_back(static_cast<NodeIndex>(i));
  return out;
}

}  // namespace prefnet
