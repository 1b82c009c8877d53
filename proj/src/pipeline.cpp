#include "prefnet/pipeline.hpp"

#include <algorithm>

#include <json.hpp>

#include "prefnet/error.hpp"

namespace prefnet {

using ordered_json = nlohmann::ordered_json;

std::string classifier_to_json(const Classifier& classifier) {
  ordered_json root;
  root["format"] = "prefnet.classifier/1";
  root["scaler"] = {{"cn_min", classifier.scaler.cn_min}, {"cn_max", classifier.scaler.cn_max}};
  root["model"] = ordered_json::parse(ml::model_to_json(classifier.model));
  return root.dump() + "\n";
}

Classifier classifier_from_json(std::string_view text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("classifier: ") + e.what());
  }
  if (!root.is_object() || root.value("format", "") != "prefnet.classifier/1")
    throw Error(ErrorKind::parse, "classifier: expected format 'prefnet.classifier/1'");
  Classifier classifier;
  try {
    classifier.scaler.cn_min = root.at("scaler").at("cn_min").get<double>();
    classifier.scaler.cn_max = root.at("scaler").at("cn_max").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("classifier: ") + e.what());
  }
  if (!root.contains("model")) throw Error(ErrorKind::parse, "classifier: missing 'model'");
  classifier.model = ml::model_from_json(root.at("model").dump());
  return classifier;
}

ml::Samples to_samples(const LabeledDataset& dataset, const FeatureScaler& scaler) {
  ml::Samples samples;
  samples.feature_names = dataset.feature_names();
  samples.x.reserve(dataset.size());
  samples.y.reserve(dataset.size());
  for (const auto& row : dataset.rows) samples.add(scaler.transform(row.features), row.positive);
  return samples;
}

const ClassifierOutcome& ExperimentResult::outcome(ml::ModelKind kind) const {
  const auto it = std::find_if(outcomes.begin(), outcomes.end(), [&](const auto& o) { return o.kind == kind; });
  if (it == outcomes.end())
    throw Error(ErrorKind::invalid_argument, "no trained " + std::string(ml::to_string(kind)) + " model");
  return *it;
}

ExperimentResult run_experiment(TaskDatasets data, const ExperimentOptions& options) {
  if (options.kinds.empty()) throw Error(ErrorKind::invalid_argument, "no classifiers requested");
  ExperimentResult result;
  const auto scaler = FeatureScaler::fit(data.train);
  const auto split = ml::split(to_samples(data.train, scaler), options.split);
  const auto test = to_samples(data.test, scaler);
  const auto trained = ml::train_all(options.kinds, split.train, split.validation, options.train, options.threads);

  std::vector<std::pair<ml::ModelKind, ml::EvaluationReport>> reports;
  for (std::size_t i = 0; i < options.kinds.size(); ++i) {
    ClassifierOutcome outcome;
    outcome.kind = options.kinds[i];
    outcome.classifier = {scaler, trained[i].model};
    outcome.validation = trained[i].validation;
    outcome.test = ml::evaluate(trained[i].model, test);
    outcome.sweep = trained[i].sweep;
    reports.emplace_back(outcome.kind, outcome.validation);
    result.outcomes.push_back(std::move(outcome));
  }
  result.selected = ml::select_model(reports);
  result.data = std::move(data);
  return result;
}

ExperimentResult run_experiment(const SnapshotSeries& series, const ExperimentOptions& options) {
  return run_experiment(
      build_dataset(options.task, options.method, series, options.semester, options.network, options.dataset),
      options);
}

ImportanceReport importance_for(const SnapshotSeries& series, ExperimentOptions options) {
  options.kinds = {ml::ModelKind::linear_regression};
  options.train.allow_expansion = false;
  const auto result = run_experiment(series, options);
  return attribute_weights(result.best().classifier.model, options.task, options.network);
}

namespace {

ordered_json report_json(const ml::EvaluationReport& report) { return ordered_json::parse(ml::report_to_json(report)); }

ordered_json optional_json(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

ordered_json split_json(const LabeledDataset& dataset) {
  return {{"feature_semester", dataset.feature_semester},
          {"label_semester", dataset.label_semester},
          {"rows", dataset.size()},
          {"positives", dataset.positives()}};
}

}  // namespace

std::string experiment_summary_json(const ExperimentResult& result) {
  ordered_json root;
  root["task"] = to_string(result.data.train.task);
  root["network"] = to_string(result.data.train.network);
  root["method"] = to_string(result.data.train.method);
  root["train"] = split_json(result.data.train);
  root["test"] = split_json(result.data.test);
  root["selected"] = ml::to_string(result.selected);
  auto classifiers = ordered_json::array();
  for (const auto& outcome : result.outcomes) {
    auto sweep = ordered_json::array();
    for (const auto& point : outcome.sweep)
      sweep.push_back({{"setting", point.setting},
                       {"accuracy", point.accuracy},
                       {"recall", optional_json(point.recall)},
                       {"selection_score", optional_json(point.selection_score)}});
    classifiers.push_back({{"kind", ml::to_string(outcome.kind)},
                           {"validation", report_json(outcome.validation)},
                           {"test", report_json(outcome.test)},
                           {"sweep", std::move(sweep)}});
  }
  root["classifiers"] = std::move(classifiers);
  return root.dump(2) + "\n";
}

}  // namespace prefnet
