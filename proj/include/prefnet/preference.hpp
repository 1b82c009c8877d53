#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefnet/graph.hpp"
#include "prefnet/schema.hpp"

namespace prefnet {

/// Standard normal cumulative distribution function.
double normal_cdf(double z);

/// Share of nodes holding each value, per attribute. Nodes without a value
/// for an attribute are left out of that attribute's denominator.
struct ValueDistribution {
  std::vector<std::vector<double>> percentage;  // [attribute][value]
  std::vector<std::size_t> assigned;            // nodes holding any value, per attribute
};

ValueDistribution value_distribution(const Snapshot& snapshot, const AttributeSchema& schema);

/// Preference for a value given `neighbors` (N), the population share `p` and
/// the number of neighbors holding it (x): Phi((x - N p) / sqrt(N p (1 - p))).
/// Returns exactly 0.5 when N = 0, p is 0 or 1, or x equals N p.
double preference_score(std::size_t neighbors, double p, std::size_t holders);

double node_preference(const Snapshot& snapshot, NetworkKind kind, NodeIndex node,
                       std::size_t attribute, std::size_t value, const ValueDistribution& dist);

/// Per node, per attribute, per value preferences in [0, 1].
///
/// A node with no value for an attribute has no preferences for it. The
/// neighbor count N used for an attribute counts only neighbors that hold a
/// value for it.
class PreferenceTable {
 public:
  PreferenceTable() = default;
  PreferenceTable(NetworkKind network, std::size_t nodes, std::vector<std::size_t> value_counts);

  NetworkKind network() const { return network_; }
  std::size_t node_count() const { return degree_.size(); }
  std::size_t attribute_count() const { return value_counts_.size(); }

  bool has(NodeIndex node, std::size_t attribute) const;
  std::optional<double> preference(NodeIndex node, std::size_t attribute, std::size_t value) const;
  /// Empty span when the node is excluded for the attribute.
  std::span<const double> preferences(NodeIndex node, std::size_t attribute) const;
  std::size_t degree(NodeIndex node) const { return degree_.at(node); }
  std::size_t counted_neighbors(NodeIndex node, std::size_t attribute) const;

  void set(NodeIndex node, std::size_t attribute, std::vector<double> values,
           std::size_t counted_neighbors);
  void set_degree(NodeIndex node, std::size_t degree) { degree_.at(node) = degree; }

 private:
  NetworkKind network_ = NetworkKind::behavioral;
  std::vector<std::size_t> value_counts_;
  std::vector<std::size_t> degree_;
  std::vector<std::vector<std::vector<double>>> prefs_;  // [node][attribute][value]
  std::vector<std::vector<std::size_t>> counted_;
};

PreferenceTable compute_preferences(const Snapshot& snapshot, NetworkKind kind,
                                    const AttributeSchema& schema);

/// Mean preference of nodes holding value i (row) for value j (column).
/// Rows for values held by nobody are empty. `ratio` is the mean observed to
/// expected neighbor count x / (N p), for reporting only.
struct PreferenceMatrix {
  std::size_t attribute = 0;
  int semester = 0;
  std::vector<std::size_t> holders;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<std::optional<double>>> ratio;

  bool has_row(std::size_t value) const { return holders.at(value) > 0; }
};

PreferenceMatrix average_preference_matrix(const PreferenceTable& prefs, const Snapshot& snapshot,
                                           const AttributeSchema& schema, std::size_t attribute);

enum class Trend { increase, decrease, unchanged };

std::string_view to_string(Trend trend);

struct TrendMark {
  std::size_t attribute = 0;
  std::size_t own_value = 0;
  std::size_t other_value = 0;
  int from_semester = 0;
  int to_semester = 0;
  double delta = 0.0;
  Trend trend = Trend::unchanged;
};

inline constexpr double kDefaultTrendEpsilon = 0.05;

Trend classify_trend(double delta, double epsilon = kDefaultTrendEpsilon);

/// Marks every cell whose row exists in two consecutive matrices.
std::vector<TrendMark> trend_marks(std::span<const PreferenceMatrix> matrices,
                                   double epsilon = kDefaultTrendEpsilon);

}  // namespace prefnet
