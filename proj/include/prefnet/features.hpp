#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prefnet/graph.hpp"
#include "prefnet/ingest.hpp"
#include "prefnet/preference.hpp"

namespace prefnet {

enum class CombinationMethod { equal_preference, minimum_preference };
enum class Task { formation, dissolution };

std::string_view to_string(CombinationMethod method);
std::string_view to_string(Task task);
CombinationMethod parse_method(std::string_view text);
Task parse_task(std::string_view text);

/// Combines u's preference for v's value with v's preference for u's value.
double combine(CombinationMethod method, double u_for_v, double v_for_u);

/// Neutral agreement used when either node lacks a value for the attribute.
double neutral_agreement(CombinationMethod method);

double agreement(CombinationMethod method, const PreferenceTable& prefs, const Snapshot& snapshot,
                 NodeIndex u, NodeIndex v, std::size_t attribute);

/// Absent dyads whose endpoints are within `hop_limit` hops in `kind`.
std::vector<NodePair> formation_candidates(const Snapshot& snapshot, NetworkKind kind,
                                           unsigned hop_limit = 3);

/// True for each candidate that has an edge in `next` (matched by node id).
std::vector<bool> label_formation(const std::vector<NodePair>& candidates, const Snapshot& current,
                                  const Snapshot& next, NetworkKind kind);

/// Absent next semester, or volume down to at most a third.
bool is_dissolving(std::uint64_t weight_now, std::optional<std::uint64_t> weight_next);

struct EdgeLabel {
  NodePair dyad;
  bool dissolving = false;
};

/// Labels every edge of `current` in network `kind`. Cognitive edges also
/// dissolve when the behavioral edge of the same dyad does.
std::vector<EdgeLabel> label_dissolution(const Snapshot& current, const Snapshot& next,
                                         NetworkKind kind);

struct DyadFeatures {
  std::string u;
  std::string v;
  std::vector<double> agreement;  // one per schema attribute
  std::size_t common_neighbors = 0;

  bool operator==(const DyadFeatures&) const = default;
};

struct LabeledRow {
  DyadFeatures features;
  bool positive = false;

  bool operator==(const LabeledRow&) const = default;
};

struct LabeledDataset {
  Task task = Task::formation;
  NetworkKind network = NetworkKind::behavioral;
  CombinationMethod method = CombinationMethod::equal_preference;
  std::vector<std::string> attributes;
  int feature_semester = 0;
  int label_semester = 0;
  std::vector<LabeledRow> rows;

  std::size_t positives() const;
  std::size_t size() const { return rows.size(); }
  /// Attribute names followed by "common_neighbors".
  std::vector<std::string> feature_names() const;
};

inline constexpr std::string_view kCommonNeighbors = "common_neighbors";

struct DatasetOptions {
  unsigned hop_limit = 3;
};

/// Features from `features`, labels from `labels` (the following semester).
LabeledDataset build_split(Task task, CombinationMethod method, const Snapshot& features,
                           const Snapshot& labels, NetworkKind kind, const AttributeSchema& schema,
                           const DatasetOptions& options = {});

struct TaskDatasets {
  LabeledDataset train;  // semester K-2 features, K-1 labels
  LabeledDataset test;   // semester K-1 features, K labels
};

/// Datasets for predicting semester `label_semester` (K >= 3).
TaskDatasets build_dataset(Task task, CombinationMethod method, const SnapshotSeries& series,
                           int label_semester, NetworkKind kind, const DatasetOptions& options = {});

/// Min-max scaling of common_neighbors with bounds taken from a training split.
struct FeatureScaler {
  double cn_min = 0.0;
  double cn_max = 0.0;

  static FeatureScaler fit(const LabeledDataset& train);
  /// Agreement values followed by the scaled, clamped common-neighbor count.
  std::vector<double> transform(const DyadFeatures& features) const;
  double scale_common_neighbors(double count) const;
};

/// CSV: `u,v,<attr>...,common_neighbors,label` with label in {0,1}.
std::string dataset_to_csv(const LabeledDataset& dataset);
LabeledDataset dataset_from_csv(std::string_view text, std::string_view origin = "dataset.csv");

}  // namespace prefnet
