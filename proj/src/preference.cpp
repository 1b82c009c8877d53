#include "prefnet/preference.hpp"

#include <algorithm>
#include <cmath>

#include "prefnet/error.hpp"

namespace prefnet {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

ValueDistribution value_distribution(const Snapshot& snapshot, const AttributeSchema& schema) {
  if (snapshot.attribute_count() != schema.size())
    throw Error(ErrorKind::invalid_argument, "snapshot and schema disagree on attribute count");
  ValueDistribution dist;
  dist.percentage.resize(schema.size());
  dist.assigned.assign(schema.size(), 0);
  for (std::size_t a = 0; a < schema.size(); ++a) {
    std::vector<std::size_t> counts(schema.at(a).size(), 0);
    for (NodeIndex node = 0; node < snapshot.node_count(); ++node) {
      if (const auto value = snapshot.value(node, a)) {
        ++counts.at(*value);
        ++dist.assigned[a];
      }
    }
    if (dist.assigned[a] == 0)
      throw Error(ErrorKind::domain, "attribute '" + schema.at(a).name + "' is assigned to no node in semester " +
                                         std::to_string(snapshot.semester()));
    auto& shares = dist.percentage[a];
    shares.resize(counts.size());
    for (std::size_t v = 0; v < counts.size(); ++v)
      shares[v] = static_cast<double>(counts[v]) / static_cast<double>(dist.assigned[a]);
  }
  return dist;
}

double preference_score(std::size_t neighbors, double p, std::size_t holders) {
  if (holders > neighbors) throw Error(ErrorKind::invalid_argument, "holders exceed neighbor count");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_argument, "share must lie in [0, 1]");
  if (neighbors == 0 || p <= 0.0 || p >= 1.0) return 0.5;
  const double n = static_cast<double>(neighbors);
  const double mu = n * p;
  const double diff = static_cast<double>(holders) - mu;
  // Shares come from integer counts, so x == N p can miss by rounding only.
  if (std::abs(diff) <= 1e-12 * std::max(1.0, n)) return 0.5;
  return normal_cdf(diff / std::sqrt(mu * (1.0 - p)));
}

namespace {

struct NeighborCounts {
  std::size_t counted = 0;
  std::vector<std::size_t> holders;
};

NeighborCounts count_neighbors(const Snapshot& snapshot, NetworkKind kind, NodeIndex node,
                               std::size_t attribute, std::size_t values) {
  NeighborCounts counts;
  counts.holders.assign(values, 0);
  for (const auto other : snapshot.neighbors(kind, node)) {
    if (const auto value = snapshot.value(other, attribute)) {
      ++counts.counted;
      ++counts.holders.at(*value);
    }
  }
  return counts;
}

}  // namespace

double node_preference(const Snapshot& snapshot, NetworkKind kind, NodeIndex node,
                       std::size_t attribute, std::size_t value, const ValueDistribution& dist) {
  if (attribute >= dist.percentage.size() || value >= dist.percentage[attribute].size())
    throw Error(ErrorKind::invalid_argument, "attribute or value index out of range");
  const auto counts = count_neighbors(snapshot, kind, node, attribute, dist.percentage[attribute].size());
  return preference_score(counts.counted, dist.percentage[attribute][value], counts.holders[value]);
}

PreferenceTable::PreferenceTable(NetworkKind network, std::size_t nodes,
                                 std::vector<std::size_t> value_counts)
    : network_(network),
      value_counts_(std::move(value_counts)),
      degree_(nodes, 0),
      prefs_(nodes, std::vector<std::vector<double>>(value_counts_.size())),
      counted_(nodes, std::vector<std::size_t>(value_counts_.size(), 0)) {}

bool PreferenceTable::has(NodeIndex node, std::size_t attribute) const {
  return !prefs_.at(node).at(attribute).empty();
}

std::optional<double> PreferenceTable::preference(NodeIndex node, std::size_t attribute,
                                                  std::size_t value) const {
  const auto& values = prefs_.at(node).at(attribute);
  if (values.empty()) return std::nullopt;
  return values.at(value);
}

std::span<const double> PreferenceTable::preferences(NodeIndex node, std::size_t attribute) const {
  return prefs_.at(node).at(attribute);
}

std::size_t PreferenceTable::counted_neighbors(NodeIndex node, std::size_t attribute) const {
  return counted_.at(node).at(attribute);
}

void PreferenceTable::set(NodeIndex node, std::size_t attribute, std::vector<double> values,
                          std::size_t counted_neighbors) {
  if (!values.empty() && values.size() != value_counts_.at(attribute))
    throw Error(ErrorKind::invalid_argument, "preference vector has the wrong length");
  prefs_.at(node).at(attribute) = std::move(values);
  counted_.at(node).at(attribute) = counted_neighbors;
}

PreferenceTable compute_preferences(const Snapshot& snapshot, NetworkKind kind,
                                    const AttributeSchema& schema) {
  const auto dist = value_distribution(snapshot, schema);
  std::vector<std::size_t> value_counts;
  for (const auto& attribute : schema.attributes()) value_counts.push_back(attribute.size());
  PreferenceTable table(kind, snapshot.node_count(), value_counts);
  for (NodeIndex node = 0; node < snapshot.node_count(); ++node) {
    table.set_degree(node, snapshot.neighbors(kind, node).size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (!snapshot.value(node, a)) continue;
      const auto counts = count_neighbors(snapshot, kind, node, a, value_counts[a]);
      std::vector<double> values(value_counts[a]);
      for (std::size_t v = 0; v < values.size(); ++v)
        values[v] = preference_score(counts.counted, dist.percentage[a][v], counts.holders[v]);
      table.set(node, a, std::move(values), counts.counted);
    }
  }
  return table;
}

PreferenceMatrix average_preference_matrix(const PreferenceTable& prefs, const Snapshot& snapshot,
                                           const AttributeSchema& schema, std::size_t attribute) {
  if (attribute >= schema.size()) throw Error(ErrorKind::invalid_argument, "unknown attribute index");
  if (prefs.node_count() != snapshot.node_count())
    throw Error(ErrorKind::invalid_argument, "preference table does not match the snapshot");
  const auto dist = value_distribution(snapshot, schema);
  const auto& shares = dist.percentage[attribute];
  const auto values = schema.at(attribute).size();

  PreferenceMatrix matrix;
  matrix.attribute = attribute;
  matrix.semester = snapshot.semester();
  matrix.holders.assign(values, 0);
  std::vector<std::vector<double>> sum(values, std::vector<double>(values, 0.0));
  std::vector<std::vector<double>> ratio_sum(values, std::vector<double>(values, 0.0));
  std::vector<std::vector<std::size_t>> ratio_count(values, std::vector<std::size_t>(values, 0));

  for (NodeIndex node = 0; node < snapshot.node_count(); ++node) {
    const auto own = snapshot.value(node, attribute);
    if (!own || !prefs.has(node, attribute)) continue;
    ++matrix.holders[*own];
    const auto row = prefs.preferences(node, attribute);
    for (std::size_t j = 0; j < values; ++j) sum[*own][j] += row[j];

    const auto counts = count_neighbors(snapshot, prefs.network(), node, attribute, values);
    for (std::size_t j = 0; j < values; ++j) {
      const double expected = static_cast<double>(counts.counted) * shares[j];
      if (expected <= 0.0) continue;
      ratio_sum[*own][j] += static_cast<double>(counts.holders[j]) / expected;
      ++ratio_count[*own][j];
    }
  }

  matrix.mean.resize(values);
  matrix.ratio.resize(values);
  for (std::size_t i = 0; i < values; ++i) {
    if (matrix.holders[i] == 0) continue;
    matrix.mean[i].resize(values);
    matrix.ratio[i].resize(values);
    for (std::size_t j = 0; j < values; ++j) {
      matrix.mean[i][j] = sum[i][j] / static_cast<double>(matrix.holders[i]);
      if (ratio_count[i][j] > 0)
        matrix.ratio[i][j] = ratio_sum[i][j] / static_cast<double>(ratio_count[i][j]);
    }
  }
  return matrix;
}

std::string_view to_string(Trend trend) {
  switch (trend) {
    case Trend::increase: return "increase";
    case Trend::decrease: return "decrease";
    case Trend::unchanged: return "unchanged";
  }
  return "unchanged";
}

Trend classify_trend(double delta, double epsilon) {
  if (delta > epsilon) return Trend::increase;
  if (delta < -epsilon) return Trend::decrease;
  return Trend::unchanged;
}

std::vector<TrendMark> trend_marks(std::span<const PreferenceMatrix> matrices, double epsilon) {
  if (matrices.size() < 2) throw Error(ErrorKind::invalid_argument, "trend marks need at least two semesters");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be non-negative");
  std::vector<TrendMark> marks;
  for (std::size_t s = 1; s < matrices.size(); ++s) {
    const auto& before = matrices[s - 1];
    const auto& after = matrices[s];
    if (before.attribute != after.attribute || before.holders.size() != after.holders.size())
      throw Error(ErrorKind::invalid_argument, "trend marks mix different attributes");
    if (after.semester <= before.semester)
      throw Error(ErrorKind::invalid_argument, "matrices must be in semester order");
    for (std::size_t i = 0; i < before.holders.size(); ++i) {
      if (!before.has_row(i) || !after.has_row(i)) continue;
      for (std::size_t j = 0; j < before.holders.size(); ++j) {
        TrendMark mark;
        mark.attribute = before.attribute;
        mark.own_value = i;
        mark.other_value = j;
        mark.from_semester = before.semester;
        mark.to_semester = after.semester;
        mark.delta = after.mean[i][j] - before.mean[i][j];
        mark.trend = classify_trend(mark.delta, epsilon);
        marks.push_back(mark);
      }
    }
  }
  return marks;
}

}  // namespace prefnet
