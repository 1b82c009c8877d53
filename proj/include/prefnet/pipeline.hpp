#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prefnet/features.hpp"
#include "prefnet/importance.hpp"
#include "prefnet/ingest.hpp"
#include "prefnet/ml.hpp"

namespace prefnet {

/// A model together with the scaling fitted on its training split.
struct Classifier {
  FeatureScaler scaler;
  ml::Model model;
};

std::string classifier_to_json(const Classifier& classifier);
Classifier classifier_from_json(std::string_view text);

ml::Samples to_samples(const LabeledDataset& dataset, const FeatureScaler& scaler);

struct ExperimentOptions {
  Task task = Task::formation;
  CombinationMethod method = CombinationMethod::equal_preference;
  NetworkKind network = NetworkKind::behavioral;
  int semester = 3;
  DatasetOptions dataset;
  ml::SplitSpec split;
  ml::TrainOptions train;
  std::vector<ml::ModelKind> kinds{ml::kAllModelKinds.begin(), ml::kAllModelKinds.end()};
  unsigned threads = 1;
};

struct ClassifierOutcome {
  ml::ModelKind kind = ml::ModelKind::linear_regression;
  Classifier classifier;
  ml::EvaluationReport validation;
  ml::EvaluationReport test;
  std::vector<ml::SweepPoint> sweep;
};

struct ExperimentResult {
  TaskDatasets data;
  std::vector<ClassifierOutcome> outcomes;
  /// Chosen on validation reports.
  ml::ModelKind selected = ml::ModelKind::linear_regression;

  const ClassifierOutcome& outcome(ml::ModelKind kind) const;
  const ClassifierOutcome& best() const { return outcome(selected); }
};

/// Builds the datasets, trains every requested kind on the training split
/// (minus validation), selects on validation and evaluates on the test split.
ExperimentResult run_experiment(const SnapshotSeries& series, const ExperimentOptions& options);

/// Same, starting from prebuilt datasets.
ExperimentResult run_experiment(TaskDatasets data, const ExperimentOptions& options);

/// Trains the regression used for importance (no degree-2 expansion).
ImportanceReport importance_for(const SnapshotSeries& series, ExperimentOptions options);

std::string experiment_summary_json(const ExperimentResult& result);

}  // namespace prefnet
