#include "prefnet/prefnet.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>

#include <json.hpp>

#include "manifest.hpp"
#include "prefnet/error.hpp"
#include "prefnet/features.hpp"
#include "prefnet/importance.hpp"
#include "prefnet/ingest.hpp"
#include "prefnet/pipeline.hpp"
#include "prefnet/preference.hpp"
#include "prefnet/survival.hpp"
#include "prefnet/synthgen.hpp"
#include "util.hpp"

struct prefnet_series {
  prefnet::SnapshotSeries series;
};

struct prefnet_dataset {
  prefnet::LabeledDataset dataset;
};

struct prefnet_model {
  prefnet::Classifier classifier;
};

namespace {

using ordered_json = nlohmann::ordered_json;
using prefnet::Error;
using prefnet::ErrorKind;

constexpr const char* kVersion = "0.1.0";

thread_local std::string last_error;

prefnet_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return PREFNET_ERROR_INVALID_ARGUMENT;
    case ErrorKind::io: return PREFNET_ERROR_IO;
    case ErrorKind::parse: return PREFNET_ERROR_PARSE;
    case ErrorKind::validation: return PREFNET_ERROR_VALIDATION;
    case ErrorKind::domain: return PREFNET_ERROR_DOMAIN;
    case ErrorKind::internal: return PREFNET_ERROR_INTERNAL;
  }
  return PREFNET_ERROR_INTERNAL;
}

template <typename F>
prefnet_status guard(F&& body) {
  last_error.clear();
  try {
    body();
    return PREFNET_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return PREFNET_ERROR_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PREFNET_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PREFNET_ERROR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return PREFNET_ERROR_INTERNAL;
  }
}

template <typename T>
void require(const T* pointer, const char* name) {
  if (pointer == nullptr) throw Error(ErrorKind::invalid_argument, std::string(name) + " must not be NULL");
}

char* duplicate(std::string_view text) {
  auto* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.data(), text.size());
  out[text.size()] = '\0';
  return out;
}

void assign(char** out, std::string_view text) {
  if (out != nullptr) *out = duplicate(text);
}

prefnet::NetworkKind network_of(prefnet_network network) {
  switch (network) {
    case PREFNET_BEHAVIORAL: return prefnet::NetworkKind::behavioral;
    case PREFNET_COGNITIVE: return prefnet::NetworkKind::cognitive;
  }
  throw Error(ErrorKind::invalid_argument, "unknown network value");
}

prefnet::Task task_of(prefnet_task task) {
  switch (task) {
    case PREFNET_FORMATION: return prefnet::Task::formation;
    case PREFNET_DISSOLUTION: return prefnet::Task::dissolution;
  }
  throw Error(ErrorKind::invalid_argument, "unknown task value");
}

prefnet::CombinationMethod method_of(prefnet_method method) {
  switch (method) {
    case PREFNET_EQUAL_PREFERENCE: return prefnet::CombinationMethod::equal_preference;
    case PREFNET_MINIMUM_PREFERENCE: return prefnet::CombinationMethod::minimum_preference;
  }
  throw Error(ErrorKind::invalid_argument, "unknown method value");
}

prefnet::ml::ModelKind kind_of(prefnet_classifier classifier) {
  const auto index = static_cast<int>(classifier);
  if (index < 0 || index >= PREFNET_CLASSIFIER_COUNT) throw Error(ErrorKind::invalid_argument, "unknown classifier value");
  return prefnet::ml::kAllModelKinds[static_cast<std::size_t>(index)];
}

prefnet_classifier classifier_of(prefnet::ml::ModelKind kind) {
  for (std::size_t i = 0; i < prefnet::ml::kAllModelKinds.size(); ++i)
    if (prefnet::ml::kAllModelKinds[i] == kind) return static_cast<prefnet_classifier>(i);
  return PREFNET_LINEAR_REGRESSION;
}

prefnet::ml::SplitSpec split_of(const prefnet_train_options& options) {
  return {options.validation_fraction, options.seed};
}

prefnet::ml::TrainOptions train_of(const prefnet_train_options& options) {
  prefnet::ml::TrainOptions out;
  out.seed = options.seed;
  out.negative_ratio = options.negative_ratio;
  out.allow_expansion = options.allow_expansion != 0;
  return out;
}

prefnet_train_options defaults() {
  prefnet_train_options options;
  prefnet_train_options_init(&options);
  return options;
}

ordered_json optional_json(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

ordered_json sweep_json(const std::vector<prefnet::ml::SweepPoint>& sweep) {
  auto out = ordered_json::array();
  for (const auto& point : sweep)
    out.push_back({{"setting", point.setting},
                   {"accuracy", point.accuracy},
                   {"recall", optional_json(point.recall)},
                   {"selection_score", optional_json(point.selection_score)}});
  return out;
}

struct Trained {
  prefnet::Classifier classifier;
  prefnet::ml::TrainResult result;
};

std::vector<Trained> train_kinds(const prefnet::LabeledDataset& dataset,
                                 const std::vector<prefnet::ml::ModelKind>& kinds,
                                 const prefnet_train_options& options) {
  const auto scaler = prefnet::FeatureScaler::fit(dataset);
  const auto split = prefnet::ml::split(prefnet::to_samples(dataset, scaler), split_of(options));
  auto results = prefnet::ml::train_all(kinds, split.train, split.validation, train_of(options), options.threads);
  std::vector<Trained> out;
  for (auto& result : results) out.push_back({{scaler, result.model}, std::move(result)});
  return out;
}

}  // namespace

extern "C" {

const char* prefnet_version(void) { return kVersion; }

const char* prefnet_last_error(void) { return last_error.c_str(); }

const char* prefnet_status_name(prefnet_status status) {
  switch (status) {
    case PREFNET_OK: return "ok";
    case PREFNET_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case PREFNET_ERROR_IO: return "io";
    case PREFNET_ERROR_PARSE: return "parse";
    case PREFNET_ERROR_VALIDATION: return "validation";
    case PREFNET_ERROR_DOMAIN: return "domain";
    case PREFNET_ERROR_INTERNAL: return "internal";
  }
  return "unknown";
}

void prefnet_string_free(char* text) { std::free(text); }

prefnet_status prefnet_parse_network(const char* name, prefnet_network* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = prefnet::parse_network(name) == prefnet::NetworkKind::behavioral ? PREFNET_BEHAVIORAL : PREFNET_COGNITIVE;
  });
}

prefnet_status prefnet_parse_task(const char* name, prefnet_task* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = prefnet::parse_task(name) == prefnet::Task::formation ? PREFNET_FORMATION : PREFNET_DISSOLUTION;
  });
}

prefnet_status prefnet_parse_method(const char* name, prefnet_method* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = prefnet::parse_method(name) == prefnet::CombinationMethod::equal_preference ? PREFNET_EQUAL_PREFERENCE
                                                                                        : PREFNET_MINIMUM_PREFERENCE;
  });
}

prefnet_status prefnet_parse_classifier(const char* name, prefnet_classifier* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = classifier_of(prefnet::ml::parse_model_kind(name));
  });
}

const char* prefnet_classifier_name(prefnet_classifier classifier) {
  switch (classifier) {
    case PREFNET_LINEAR_REGRESSION: return "regression";
    case PREFNET_LINEAR_SVM: return "svm";
    case PREFNET_KNN: return "knn";
    case PREFNET_RANDOM_FOREST: return "forest";
    case PREFNET_NAIVE_BAYES: return "bayes";
  }
  return "unknown";
}

prefnet_status prefnet_synth_default_config(char** out_json) {
  return guard([&] {
    require(out_json, "out_json");
    *out_json = duplicate(prefnet::gen_config_to_json(prefnet::default_gen_config()));
  });
}

prefnet_status prefnet_synth(const char* config_json, const char* out_dir, char** out_files_json) {
  return guard([&] {
    require(out_dir, "out_dir");
    const auto config = config_json ? prefnet::gen_config_from_json(config_json) : prefnet::default_gen_config();
    const auto files = prefnet::write_generated(prefnet::generate(config), out_dir);
    auto list = ordered_json::array();
    for (const auto& file : files) list.push_back(file.string());
    assign(out_files_json, list.dump() + "\n");
  });
}

prefnet_status prefnet_series_ingest(const prefnet_ingest_options* options, prefnet_series** out,
                                     char** out_warnings_json) {
  return guard([&] {
    require(options, "options");
    require(out, "out");
    require(options->schema_path, "schema_path");
    require(options->events_path, "events_path");
    require(options->nominations_path, "nominations_path");
    require(options->attributes_path, "attributes_path");
    prefnet::IngestWarnings warnings;
    auto series = prefnet::ingest({options->schema_path, options->events_path, options->nominations_path,
                                   options->attributes_path},
                                  {options->mutual_nominations != 0}, &warnings);
    assign(out_warnings_json, prefnet::warnings_to_json(warnings));
    *out = new prefnet_series{std::move(series)};
  });
}

prefnet_status prefnet_series_load(const char* path, prefnet_series** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new prefnet_series{prefnet::load_series(path)};
  });
}

prefnet_status prefnet_series_save(const prefnet_series* series, const char* path) {
  return guard([&] {
    require(series, "series");
    require(path, "path");
    prefnet::save_series(series->series, path);
  });
}

size_t prefnet_series_semesters(const prefnet_series* series) {
  return series ? series->series.snapshots.size() : 0;
}

void prefnet_series_free(prefnet_series* series) { delete series; }

prefnet_status prefnet_preferences(const prefnet_series* series, int semester, prefnet_network network,
                                   char** out_json) {
  return guard([&] {
    require(series, "series");
    require(out_json, "out_json");
    const auto kind = network_of(network);
    const auto& s = series->series;
    ordered_json root;
    root["network"] = prefnet::to_string(kind);
    auto semesters = ordered_json::array();
    for (const auto& snapshot : s.snapshots) {
      if (semester != 0 && snapshot.semester() != semester) continue;
      const auto table = prefnet::compute_preferences(snapshot, kind, s.schema);
      auto nodes = ordered_json::array();
      for (prefnet::NodeIndex node = 0; node < snapshot.node_count(); ++node) {
        auto attrs = ordered_json::object();
        for (std::size_t a = 0; a < s.schema.size(); ++a) {
          if (!table.has(node, a)) continue;
          const auto& attribute = s.schema.at(a);
          auto prefs = ordered_json::object();
          const auto values = table.preferences(node, a);
          for (std::size_t v = 0; v < values.size(); ++v) prefs[attribute.values[v]] = values[v];
          attrs[attribute.name] = {{"value", attribute.values[*snapshot.value(node, a)]},
                                   {"counted_neighbors", table.counted_neighbors(node, a)},
                                   {"preferences", std::move(prefs)}};
        }
        nodes.push_back({{"id", snapshot.node_id(node)}, {"degree", table.degree(node)}, {"attributes", std::move(attrs)}});
      }
      semesters.push_back({{"semester", snapshot.semester()}, {"nodes", std::move(nodes)}});
    }
    if (semester != 0 && semesters.empty()) s.semester(semester);
    root["semesters"] = std::move(semesters);
    *out_json = duplicate(root.dump(2) + "\n");
  });
}

prefnet_status prefnet_matrices(const prefnet_series* series, const char* attribute, prefnet_network network,
                                double epsilon, char** out_json, char** out_matrix_csv, char** out_trend_csv) {
  return guard([&] {
    require(series, "series");
    require(attribute, "attribute");
    const auto kind = network_of(network);
    const auto& s = series->series;
    const auto a = s.schema.find(attribute);
    if (!a) throw Error(ErrorKind::invalid_argument, "unknown attribute '" + std::string(attribute) + "'");
    const auto& values = s.schema.at(*a).values;

    std::vector<prefnet::PreferenceMatrix> matrices;
    for (const auto& snapshot : s.snapshots)
      matrices.push_back(prefnet::average_preference_matrix(prefnet::compute_preferences(snapshot, kind, s.schema),
                                                            snapshot, s.schema, *a));
    std::vector<prefnet::TrendMark> marks;
    if (matrices.size() >= 2) marks = prefnet::trend_marks(matrices, epsilon);

    ordered_json root;
    root["attribute"] = attribute;
    root["network"] = prefnet::to_string(kind);
    root["values"] = values;
    root["epsilon"] = epsilon;
    auto semesters = ordered_json::array();
    std::string matrix_csv = "semester,own_value,other_value,holders,mean_preference,ratio\n";
    for (const auto& m : matrices) {
      auto mean = ordered_json::array();
      auto ratio = ordered_json::array();
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!m.has_row(i)) {
          mean.push_back(nullptr);
          ratio.push_back(nullptr);
          continue;
        }
        auto ratio_row = ordered_json::array();
        for (std::size_t j = 0; j < values.size(); ++j) {
          ratio_row.push_back(optional_json(m.ratio[i][j]));
          matrix_csv += std::to_string(m.semester) + "," + prefnet::detail::csv_field(values[i]) + "," +
                        prefnet::detail::csv_field(values[j]) + "," + std::to_string(m.holders[i]) + "," +
                        prefnet::detail::format_double(m.mean[i][j]) + "," +
                        prefnet::detail::format_optional(m.ratio[i][j]) + "\n";
        }
        mean.push_back(m.mean[i]);
        ratio.push_back(std::move(ratio_row));
      }
      semesters.push_back({{"semester", m.semester}, {"holders", m.holders}, {"mean_preference", std::move(mean)},
                           {"ratio", std::move(ratio)}});
    }
    root["semesters"] = std::move(semesters);
    auto trends = ordered_json::array();
    std::string trend_csv = "own_value,other_value,from_semester,to_semester,delta,trend\n";
    for (const auto& mark : marks) {
      const auto& own = values[mark.own_value];
      const auto& other = values[mark.other_value];
      trends.push_back({{"own_value", own},
                        {"other_value", other},
                        {"from_semester", mark.from_semester},
                        {"to_semester", mark.to_semester},
                        {"delta", mark.delta},
                        {"trend", prefnet::to_string(mark.trend)}});
      trend_csv += prefnet::detail::csv_field(own) + "," + prefnet::detail::csv_field(other) + "," +
                   std::to_string(mark.from_semester) + "," + std::to_string(mark.to_semester) + "," +
                   prefnet::detail::format_double(mark.delta) + "," + std::string(prefnet::to_string(mark.trend)) + "\n";
    }
    root["trends"] = std::move(trends);
    assign(out_json, root.dump(2) + "\n");
    assign(out_matrix_csv, matrix_csv);
    assign(out_trend_csv, trend_csv);
  });
}

void prefnet_dataset_options_init(prefnet_dataset_options* options) {
  if (options == nullptr) return;
  options->task = PREFNET_FORMATION;
  options->method = PREFNET_EQUAL_PREFERENCE;
  options->network = PREFNET_BEHAVIORAL;
  options->semester = 3;
  options->hop_limit = 3;
}

prefnet_status prefnet_dataset_build(const prefnet_series* series, const prefnet_dataset_options* options,
                                     prefnet_dataset** out_train, prefnet_dataset** out_test) {
  return guard([&] {
    require(series, "series");
    require(options, "options");
    require(out_train, "out_train");
    require(out_test, "out_test");
    auto data = prefnet::build_dataset(task_of(options->task), method_of(options->method), series->series,
                                       options->semester, network_of(options->network), {options->hop_limit});
    auto train = std::make_unique<prefnet_dataset>(prefnet_dataset{std::move(data.train)});
    auto test = std::make_unique<prefnet_dataset>(prefnet_dataset{std::move(data.test)});
    *out_train = train.release();
    *out_test = test.release();
  });
}

prefnet_status prefnet_dataset_to_csv(const prefnet_dataset* dataset, char** out_csv) {
  return guard([&] {
    require(dataset, "dataset");
    require(out_csv, "out_csv");
    *out_csv = duplicate(prefnet::dataset_to_csv(dataset->dataset));
  });
}

prefnet_status prefnet_dataset_from_csv(const char* csv, prefnet_dataset** out) {
  return guard([&] {
    require(csv, "csv");
    require(out, "out");
    *out = new prefnet_dataset{prefnet::dataset_from_csv(csv)};
  });
}

size_t prefnet_dataset_rows(const prefnet_dataset* dataset) { return dataset ? dataset->dataset.size() : 0; }

size_t prefnet_dataset_positives(const prefnet_dataset* dataset) {
  return dataset ? dataset->dataset.positives() : 0;
}

void prefnet_dataset_free(prefnet_dataset* dataset) { delete dataset; }

void prefnet_train_options_init(prefnet_train_options* options) {
  if (options == nullptr) return;
  options->validation_fraction = 0.20;
  options->seed = 1;
  options->negative_ratio = 10.0;
  options->allow_expansion = 1;
  options->threads = 1;
}

prefnet_status prefnet_train(const prefnet_dataset* train, prefnet_classifier classifier,
                             const prefnet_train_options* options, prefnet_model** out_model,
                             char** out_validation_json) {
  return guard([&] {
    require(train, "train");
    require(out_model, "out_model");
    const auto opts = options ? *options : defaults();
    auto trained = train_kinds(train->dataset, {kind_of(classifier)}, opts);
    assign(out_validation_json, prefnet::ml::report_to_json(trained.front().result.validation));
    *out_model = new prefnet_model{std::move(trained.front().classifier)};
  });
}

prefnet_status prefnet_train_many(const prefnet_dataset* train, const prefnet_classifier* classifiers, size_t count,
                                  const prefnet_train_options* options, prefnet_model** out_models,
                                  prefnet_classifier* out_selected, char** out_summary_json) {
  return guard([&] {
    require(train, "train");
    require(classifiers, "classifiers");
    require(out_models, "out_models");
    if (count == 0) throw Error(ErrorKind::invalid_argument, "no classifiers requested");
    const auto opts = options ? *options : defaults();
    std::vector<prefnet::ml::ModelKind> kinds;
    for (size_t i = 0; i < count; ++i) kinds.push_back(kind_of(classifiers[i]));
    auto trained = train_kinds(train->dataset, kinds, opts);

    std::vector<std::pair<prefnet::ml::ModelKind, prefnet::ml::EvaluationReport>> reports;
    auto list = ordered_json::array();
    for (std::size_t i = 0; i < trained.size(); ++i) {
      reports.emplace_back(kinds[i], trained[i].result.validation);
      list.push_back({{"kind", prefnet_classifier_name(classifier_of(kinds[i]))},
                      {"validation", ordered_json::parse(prefnet::ml::report_to_json(trained[i].result.validation))},
                      {"sweep", sweep_json(trained[i].result.sweep)}});
    }
    const auto selected = prefnet::ml::select_model(reports);
    ordered_json summary;
    summary["selected"] = prefnet_classifier_name(classifier_of(selected));
    summary["classifiers"] = std::move(list);
    assign(out_summary_json, summary.dump(2) + "\n");
    if (out_selected) *out_selected = classifier_of(selected);
    for (std::size_t i = 0; i < trained.size(); ++i) out_models[i] = new prefnet_model{std::move(trained[i].classifier)};
  });
}

prefnet_status prefnet_model_to_json(const prefnet_model* model, char** out_json) {
  return guard([&] {
    require(model, "model");
    require(out_json, "out_json");
    *out_json = duplicate(prefnet::classifier_to_json(model->classifier));
  });
}

prefnet_status prefnet_model_from_json(const char* json, prefnet_model** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    *out = new prefnet_model{prefnet::classifier_from_json(json)};
  });
}

prefnet_classifier prefnet_model_kind(const prefnet_model* model) {
  return model ? classifier_of(model->classifier.model.kind) : PREFNET_LINEAR_REGRESSION;
}

size_t prefnet_model_dims(const prefnet_model* model) {
  return model ? model->classifier.model.feature_names.size() : 0;
}

prefnet_status prefnet_model_predict(const prefnet_model* model, const double* features, size_t count, int* out_label,
                                     double* out_score) {
  return guard([&] {
    require(model, "model");
    require(features, "features");
    const auto prediction = model->classifier.model.predict(std::span<const double>(features, count));
    if (out_label) *out_label = prediction.positive ? 1 : 0;
    if (out_score) *out_score = prediction.score;
  });
}

void prefnet_model_free(prefnet_model* model) { delete model; }

prefnet_status prefnet_evaluate(const prefnet_model* model, const prefnet_dataset* test, char** out_report_json,
                                char** out_roc_csv) {
  return guard([&] {
    require(model, "model");
    require(test, "test");
    const auto samples = prefnet::to_samples(test->dataset, model->classifier.scaler);
    const auto report = prefnet::ml::evaluate(model->classifier.model, samples);
    assign(out_report_json, prefnet::ml::report_to_json(report));
    assign(out_roc_csv, prefnet::ml::roc_to_csv(report.roc));
  });
}

prefnet_status prefnet_importance(const prefnet_model* regression, prefnet_task task, prefnet_network network,
                                  char** out_json) {
  return guard([&] {
    require(regression, "regression");
    require(out_json, "out_json");
    const auto report = prefnet::attribute_weights(regression->classifier.model, task_of(task), network_of(network));
    ordered_json root;
    root["task"] = prefnet::to_string(report.task);
    root["network"] = prefnet::to_string(report.network);
    auto features = ordered_json::array();
    for (const auto& f : report.features)
      features.push_back({{"feature", f.feature}, {"coefficient", f.coefficient}, {"weight", f.weight}, {"rank", f.rank}});
    root["features"] = std::move(features);
    *out_json = duplicate(root.dump(2) + "\n");
  });
}

prefnet_status prefnet_importance_tables(const prefnet_series* series, const prefnet_task* tasks,
                                         const prefnet_network* networks, size_t cells, prefnet_method method,
                                         int semester, const prefnet_train_options* options, unsigned top_k,
                                         char** out_weights_csv, char** out_ranks_csv, char** out_comparison_json) {
  return guard([&] {
    require(series, "series");
    require(tasks, "tasks");
    require(networks, "networks");
    if (cells == 0) throw Error(ErrorKind::invalid_argument, "no (task, network) cells requested");
    const auto opts = options ? *options : defaults();
    std::vector<prefnet::ImportanceReport> reports;
    for (size_t i = 0; i < cells; ++i) {
      prefnet::ExperimentOptions experiment;
      experiment.task = task_of(tasks[i]);
      experiment.network = network_of(networks[i]);
      experiment.method = method_of(method);
      experiment.semester = semester;
      experiment.split = split_of(opts);
      experiment.train = train_of(opts);
      reports.push_back(prefnet::importance_for(series->series, experiment));
    }
    assign(out_weights_csv, prefnet::importance_weights_csv(reports));
    assign(out_ranks_csv, prefnet::importance_ranks_csv(reports));
    assign(out_comparison_json, prefnet::comparison_to_json(prefnet::compare_rankings(reports, top_k)));
  });
}

prefnet_status prefnet_survival(const prefnet_series* series, prefnet_network network, double threshold,
                                char** out_csv, char** out_json) {
  return guard([&] {
    require(series, "series");
    const auto report = prefnet::survival_rates(series->series.snapshots, network_of(network), threshold);
    assign(out_csv, prefnet::survival_to_csv(report));
    assign(out_json, prefnet::survival_to_json(report));
  });
}

prefnet_status prefnet_parse_grid(const char* text, double** out_values, size_t* out_count) {
  return guard([&] {
    require(text, "text");
    require(out_values, "out_values");
    require(out_count, "out_count");
    const auto grid = prefnet::parse_grid(text);
    auto* values = static_cast<double*>(std::malloc(std::max<std::size_t>(grid.size(), 1) * sizeof(double)));
    if (values == nullptr) throw std::bad_alloc();
    std::copy(grid.begin(), grid.end(), values);
    *out_values = values;
    *out_count = grid.size();
  });
}

void prefnet_doubles_free(double* values) { std::free(values); }

prefnet_status prefnet_survival_sweep(const prefnet_series* series, prefnet_network network, const double* grid,
                                      size_t count, char** out_csv) {
  return guard([&] {
    require(series, "series");
    require(out_csv, "out_csv");
    if (count > 0) require(grid, "grid");
    const auto reports = prefnet::sweep_threshold(series->series.snapshots, network_of(network),
                                                  std::span<const double>(grid, count));
    *out_csv = duplicate(prefnet::sweep_to_csv(reports));
  });
}

prefnet_status prefnet_manifest_record(const char* out_dir, const char* subcommand, const char* options_json,
                                       uint64_t seed, const char* const* inputs, size_t input_count,
                                       const char* const* outputs, size_t output_count) {
  return guard([&] {
    require(out_dir, "out_dir");
    require(subcommand, "subcommand");
    if (input_count > 0) require(inputs, "inputs");
    if (output_count > 0) require(outputs, "outputs");
    prefnet::detail::ManifestRun run;
    run.subcommand = subcommand;
    run.options_json = options_json ? options_json : "{}";
    run.seed = seed;
    for (size_t i = 0; i < input_count; ++i) run.inputs.emplace_back(inputs[i]);
    for (size_t i = 0; i < output_count; ++i) run.outputs.emplace_back(outputs[i]);
    prefnet::detail::record_manifest(out_dir, run, kVersion);
  });
}

prefnet_status prefnet_sha256_file(const char* path, char** out_hex) {
  return guard([&] {
    require(path, "path");
    require(out_hex, "out_hex");
    *out_hex = duplicate(prefnet::detail::sha256_file(path));
  });
}

}  // extern "C"
