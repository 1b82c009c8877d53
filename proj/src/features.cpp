#include "prefnet/features.hpp"

#include <algorithm>

#include "prefnet/error.hpp"
#include "util.hpp"

namespace prefnet {

std::string_view to_string(CombinationMethod method) {
  return method == CombinationMethod::equal_preference ? "equal" : "min";
}

std::string_view to_string(Task task) { return task == Task::formation ? "formation" : "dissolution"; }

CombinationMethod parse_method(std::string_view text) {
  if (text == "equal" || text == "equal_preference") return CombinationMethod::equal_preference;
  if (text == "min" || text == "minimum" || text == "minimum_preference")
    return CombinationMethod::minimum_preference;
  throw Error(ErrorKind::invalid_argument, "unknown method '" + std::string(text) + "' (equal|min)");
}

Task parse_task(std::string_view text) {
  if (text == "formation") return Task::formation;
  if (text == "dissolution") return Task::dissolution;
  throw Error(ErrorKind::invalid_argument, "unknown task '" + std::string(text) + "' (formation|dissolution)");
}

double combine(CombinationMethod method, double u_for_v, double v_for_u) {
  return method == CombinationMethod::equal_preference ? u_for_v * v_for_u : std::min(u_for_v, v_for_u);
}

double neutral_agreement(CombinationMethod method) { return combine(method, 0.5, 0.5); }

double agreement(CombinationMethod method, const PreferenceTable& prefs, const Snapshot& snapshot,
                 NodeIndex u, NodeIndex v, std::size_t attribute) {
  const auto value_u = snapshot.value(u, attribute);
  const auto value_v = snapshot.value(v, attribute);
  if (!value_u || !value_v || !prefs.has(u, attribute) || !prefs.has(v, attribute))
    return neutral_agreement(method);
  return combine(method, *prefs.preference(u, attribute, *value_v), *prefs.preference(v, attribute, *value_u));
}

std::vector<NodePair> formation_candidates(const Snapshot& snapshot, NetworkKind kind, unsigned hop_limit) {
  if (hop_limit < 1) throw Error(ErrorKind::invalid_argument, "hop limit must be at least 1");
  std::vector<NodePair> candidates;
  for (NodeIndex u = 0; u < snapshot.node_count(); ++u) {
    const auto dist = hop_distances(snapshot, kind, u, hop_limit);
    for (NodeIndex v = u + 1; v < snapshot.node_count(); ++v)
      if (dist[v] >= 2) candidates.push_back({u, v});
  }
  return candidates;
}

namespace {

std::optional<NodePair> counterpart(const Snapshot& from, const Snapshot& to, NodePair pair) {
  const auto u = to.find_node(from.node_id(pair.u));
  const auto v = to.find_node(from.node_id(pair.v));
  if (!u || !v) return std::nullopt;
  return NodePair::of(*u, *v);
}

bool has_edge_in(const Snapshot& from, const Snapshot& to, NodePair pair, NetworkKind kind) {
  const auto mapped = counterpart(from, to, pair);
  return mapped && to.has_edge(kind, mapped->u, mapped->v);
}

}  // namespace

std::vector<bool> label_formation(const std::vector<NodePair>& candidates, const Snapshot& current,
                                  const Snapshot& next, NetworkKind kind) {
  std::vector<bool> labels;
  labels.reserve(candidates.size());
  for (const auto& pair : candidates) labels.push_back(has_edge_in(current, next, pair, kind));
  return labels;
}

bool is_dissolving(std::uint64_t weight_now, std::optional<std::uint64_t> weight_next) {
  if (weight_now == 0) throw Error(ErrorKind::invalid_argument, "current weight must be at least 1");
  return !weight_next || 3 * *weight_next <= weight_now;
}

namespace {

std::optional<std::uint64_t> next_weight(const Snapshot& current, const Snapshot& next, NodePair pair) {
  const auto mapped = counterpart(current, next, pair);
  if (!mapped) return std::nullopt;
  return next.weight(mapped->u, mapped->v);
}

bool behavioral_dissolving(const Snapshot& current, const Snapshot& next, NodePair pair) {
  const auto now = current.weight(pair.u, pair.v);
  return now && is_dissolving(*now, next_weight(current, next, pair));
}

}  // namespace

std::vector<EdgeLabel> label_dissolution(const Snapshot& current, const Snapshot& next, NetworkKind kind) {
  std::vector<EdgeLabel> labels;
  for (const auto& pair : current.edges(kind)) {
    EdgeLabel label{pair, false};
    if (kind == NetworkKind::behavioral)
      label.dissolving = behavioral_dissolving(current, next, pair);
    else
      label.dissolving = !has_edge_in(current, next, pair, kind) || behavioral_dissolving(current, next, pair);
    labels.push_back(label);
  }
  return labels;
}

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const LabeledRow& r) { return r.positive; }));
}

std::vector<std::string> LabeledDataset::feature_names() const {
  auto names = attributes;
  names.emplace_back(kCommonNeighbors);
  return names;
}

LabeledDataset build_split(Task task, CombinationMethod method, const Snapshot& features,
                           const Snapshot& labels, NetworkKind kind, const AttributeSchema& schema,
                           const DatasetOptions& options) {
  if (labels.semester() <= features.semester())
    throw Error(ErrorKind::invalid_argument, "feature semester must precede label semester");
  LabeledDataset dataset;
  dataset.task = task;
  dataset.network = kind;
  dataset.method = method;
  dataset.attributes = schema.names();
  dataset.feature_semester = features.semester();
  dataset.label_semester = labels.semester();

  std::vector<NodePair> dyads;
  std::vector<bool> positive;
  if (task == Task::formation) {
    dyads = formation_candidates(features, kind, options.hop_limit);
    positive = label_formation(dyads, features, labels, kind);
  } else {
    for (const auto& label : label_dissolution(features, labels, kind)) {
      dyads.push_back(label.dyad);
      positive.push_back(label.dissolving);
    }
  }

  const auto prefs = compute_preferences(features, kind, schema);
  dataset.rows.reserve(dyads.size());
  for (std::size_t i = 0; i < dyads.size(); ++i) {
    const auto [u, v] = dyads[i];
    LabeledRow row;
    row.features.u = features.node_id(u);
    row.features.v = features.node_id(v);
    row.features.agreement.reserve(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a)
      row.features.agreement.push_back(agreement(method, prefs, features, u, v, a));
    row.features.common_neighbors = common_neighbors(features, kind, u, v);
    row.positive = positive[i];
    dataset.rows.push_back(std::move(row));
  }
  return dataset;
}

TaskDatasets build_dataset(Task task, CombinationMethod method, const SnapshotSeries& series,
                           int label_semester, NetworkKind kind, const DatasetOptions& options) {
  const int available = static_cast<int>(series.snapshots.size());
  if (label_semester < 3 || label_semester > available)
    throw Error(ErrorKind::domain, "label semester must lie in [3, " + std::to_string(available) + "], got " +
                                       std::to_string(label_semester) + " (needs three consecutive snapshots)");
  TaskDatasets out;
  out.train = build_split(task, method, series.semester(label_semester - 2), series.semester(label_semester - 1),
                          kind, series.schema, options);
  out.test = build_split(task, method, series.semester(label_semester - 1), series.semester(label_semester), kind,
                         series.schema, options);
  return out;
}

FeatureScaler FeatureScaler::fit(const LabeledDataset& train) {
  FeatureScaler scaler;
  if (train.rows.empty()) return scaler;
  const auto [lo, hi] = std::minmax_element(train.rows.begin(), train.rows.end(), [](const auto& a, const auto& b) {
    return a.features.common_neighbors < b.features.common_neighbors;
  });
  scaler.cn_min = static_cast<double>(lo->features.common_neighbors);
  scaler.cn_max = static_cast<double>(hi->features.common_neighbors);
  return scaler;
}

double FeatureScaler::scale_common_neighbors(double count) const {
  if (cn_max <= cn_min) return 0.0;
  return std::clamp((count - cn_min) / (cn_max - cn_min), 0.0, 1.0);
}

std::vector<double> FeatureScaler::transform(const DyadFeatures& features) const {
  auto row = features.agreement;
  row.push_back(scale_common_neighbors(static_cast<double>(features.common_neighbors)));
  return row;
}

std::string dataset_to_csv(const LabeledDataset& dataset) {
  std::string out = "u,v";
  for (const auto& name : dataset.feature_names()) out += "," + detail::csv_field(name);
  out += ",label\n";
  for (const auto& row : dataset.rows) {
    out += detail::csv_field(row.features.u) + "," + detail::csv_field(row.features.v);
    for (const double value : row.features.agreement) out += "," + detail::format_double(value);
    out += "," + std::to_string(row.features.common_neighbors);
    out += row.positive ? ",1\n" : ",0\n";
  }
  return out;
}

LabeledDataset dataset_from_csv(std::string_view text, std::string_view origin) {
  const auto fail = [&](std::size_t line, const std::string& message) -> Error {
    return Error(ErrorKind::parse, std::string(origin) + ":" + std::to_string(line) + ": " + message);
  };
  detail::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(ErrorKind::parse, std::string(origin) + ": empty dataset");
  const auto header = detail::split_csv_line(line);
  if (header.size() < 4 || header[0] != "u" || header[1] != "v" || header.back() != "label" ||
      header[header.size() - 2] != kCommonNeighbors)
    throw fail(reader.line_number(), "expected header 'u,v,<attributes>...,common_neighbors,label'");
  LabeledDataset dataset;
  dataset.attributes.assign(header.begin() + 2, header.end() - 2);
  const auto attributes = dataset.attributes.size();
  while (reader.next(line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw fail(reader.line_number(), "expected " + std::to_string(header.size()) + " fields");
    LabeledRow row;
    row.features.u = fields[0];
    row.features.v = fields[1];
    for (std::size_t a = 0; a < attributes; ++a) {
      const auto value = detail::parse_double(fields[2 + a]);
      if (!value || *value < 0.0 || *value > 1.0)
        throw fail(reader.line_number(), "agreement '" + fields[2 + a] + "' is not in [0, 1]");
      row.features.agreement.push_back(*value);
    }
    const auto cn = detail::parse_int(fields[2 + attributes]);
    if (!cn || *cn < 0) throw fail(reader.line_number(), "common_neighbors must be a non-negative integer");
    row.features.common_neighbors = static_cast<std::size_t>(*cn);
    const auto& label = fields.back();
    if (label != "0" && label != "1") throw fail(reader.line_number(), "label must be 0 or 1");
    row.positive = label == "1";
    dataset.rows.push_back(std::move(row));
  }
  return dataset;
}

}  // namespace prefnet
