#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prefnet/prefnet.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitParse = 4,
  kExitValidation = 5,
  kExitDomain = 6,
  kExitInternal = 7,
};

struct Failure : std::runtime_error {
  Failure(int exit_code, std::string code, const std::string& message)
      : std::runtime_error(message), exit_code(exit_code), code(std::move(code)) {}
  int exit_code;
  std::string code;
};

int exit_code_for(prefnet_status status) {
  switch (status) {
    case PREFNET_OK: return kExitOk;
    case PREFNET_ERROR_INVALID_ARGUMENT: return kExitUsage;
    case PREFNET_ERROR_IO: return kExitIo;
    case PREFNET_ERROR_PARSE: return kExitParse;
    case PREFNET_ERROR_VALIDATION: return kExitValidation;
    case PREFNET_ERROR_DOMAIN: return kExitDomain;
    case PREFNET_ERROR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void check(prefnet_status status) {
  if (status != PREFNET_OK) throw Failure(exit_code_for(status), prefnet_status_name(status), prefnet_last_error());
}

[[noreturn]] void usage(const std::string& message) { throw Failure(kExitUsage, "usage", message); }

class CString {
 public:
  CString() = default;
  CString(const CString&) = delete;
  CString& operator=(const CString&) = delete;
  ~CString() { prefnet_string_free(text_); }
  char** out() { return &text_; }
  std::string str() const { return text_ ? text_ : ""; }

 private:
  char* text_ = nullptr;
};

struct SeriesDeleter {
  void operator()(prefnet_series* p) const { prefnet_series_free(p); }
};
struct DatasetDeleter {
  void operator()(prefnet_dataset* p) const { prefnet_dataset_free(p); }
};
struct ModelDeleter {
  void operator()(prefnet_model* p) const { prefnet_model_free(p); }
};
using Series = std::unique_ptr<prefnet_series, SeriesDeleter>;
using Dataset = std::unique_ptr<prefnet_dataset, DatasetDeleter>;
using Model = std::unique_ptr<prefnet_model, ModelDeleter>;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kExitIo, "io", "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Failure(kExitParse, "parse", origin + ": " + e.what());
  }
}

struct Binding {
  std::string key;
  CLI::Option* option;
  std::function<void(const json&)> load;
  std::function<json()> save;
};

std::string key_of(const std::string& names) {
  auto first = names.substr(0, names.find(','));
  first.erase(0, first.find_first_not_of('-'));
  for (auto& c : first)
    if (c == '-') c = '_';
  return first;
}

struct Command {
  CLI::App* app = nullptr;
  std::vector<Binding> bindings;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;

  template <typename T>
  CLI::Option* add(const std::string& names, T& value, const std::string& help) {
    CLI::Option* option;
    if constexpr (std::is_same_v<T, bool>)
      option = app->add_flag(names, value, help);
    else
      option = app->add_option(names, value, help)->capture_default_str();
    const auto key = key_of(names);
    bindings.push_back({key, option,
                        [&value, key](const json& j) {
                          try {
                            value = j.get<T>();
                          } catch (const json::exception&) {
                            usage("config key '" + key + "' has the wrong type");
                          }
                        },
                        [&value] { return json(value); }});
    return option;
  }

  void apply_config() {
    if (config_path.empty()) return;
    const auto config = parse_json(read_text(config_path), config_path);
    if (!config.is_object()) throw Failure(kExitParse, "parse", config_path + ": expected a JSON object");
    inputs.push_back(config_path);
    for (const auto& [raw_key, value] : config.items()) {
      auto key = raw_key;
      for (auto& c : key)
        if (c == '-') c = '_';
      auto it = std::find_if(bindings.begin(), bindings.end(), [&](const Binding& b) { return b.key == key; });
      if (it == bindings.end()) usage(config_path + ": unknown config key '" + raw_key + "'");
      if (it->option->count() == 0) it->load(value);
    }
  }

  std::string options_json() const {
    json out = json::object();
    for (const auto& binding : bindings) out[binding.key] = binding.save();
    return out.dump();
  }

  fs::path output(const std::string& name) {
    const auto path = fs::path(out_dir) / name;
    outputs.push_back(path.string());
    return path;
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = output(name);
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size())))
      throw Failure(kExitIo, "io", "cannot write '" + path.string() + "'");
  }

  void prepare_out() {
    if (out_dir.empty()) usage("--out is required");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Failure(kExitIo, "io", "cannot create '" + out_dir + "': " + ec.message());
  }

  void finish() {
    std::vector<const char*> in;
    for (const auto& s : inputs) in.push_back(s.c_str());
    std::vector<const char*> out;
    for (const auto& s : outputs) out.push_back(s.c_str());
    check(prefnet_manifest_record(out_dir.c_str(), app->get_name().c_str(), options_json().c_str(), seed, in.data(),
                                  in.size(), out.data(), out.size()));
    json report = {{"subcommand", app->get_name()}, {"outputs", outputs}};
    std::cout << report.dump() << "\n";
  }
};

void require_value(const std::string& value, const std::string& flag) {
  if (value.empty()) usage(flag + " is required");
}

prefnet_network network_of(const std::string& name) {
  require_value(name, "--network");
  prefnet_network out;
  check(prefnet_parse_network(name.c_str(), &out));
  return out;
}

prefnet_task task_of(const std::string& name) {
  require_value(name, "--task");
  prefnet_task out;
  check(prefnet_parse_task(name.c_str(), &out));
  return out;
}

prefnet_method method_of(const std::string& name) {
  prefnet_method out;
  check(prefnet_parse_method(name.c_str(), &out));
  return out;
}

std::vector<prefnet_classifier> classifiers_of(const std::string& name) {
  if (name == "all") {
    std::vector<prefnet_classifier> all;
    for (int i = 0; i < PREFNET_CLASSIFIER_COUNT; ++i) all.push_back(static_cast<prefnet_classifier>(i));
    return all;
  }
  prefnet_classifier out;
  check(prefnet_parse_classifier(name.c_str(), &out));
  return {out};
}

Series load_series(Command& command, const std::string& path) {
  require_value(path, "--snapshot");
  prefnet_series* raw = nullptr;
  check(prefnet_series_load(path.c_str(), &raw));
  command.inputs.push_back(path);
  return Series(raw);
}

Dataset load_dataset(Command& command, const std::string& path) {
  prefnet_dataset* raw = nullptr;
  check(prefnet_dataset_from_csv(read_text(path).c_str(), &raw));
  command.inputs.push_back(path);
  return Dataset(raw);
}

struct DatasetFlags {
  std::string snapshot;
  std::string task;
  std::string method = "equal";
  std::string network;
  int semester = 3;
  unsigned hop_limit = 3;

  void bind(Command& command) {
    command.add("--snapshot,--snapshots", snapshot, "Snapshot series JSON from `prefnet ingest`");
    command.add("--task", task, "formation or dissolution");
    command.add("--method", method, "equal or min");
    command.add("--network", network, "behavioral or cognitive");
    command.add("--semester", semester, "Label semester K of the test split (K >= 3)");
    command.add("--hop-limit", hop_limit, "Maximum hop distance of formation candidates");
  }

  std::pair<Dataset, Dataset> build(Command& command) const {
    auto series = load_series(command, snapshot);
    prefnet_dataset_options options;
    prefnet_dataset_options_init(&options);
    options.task = task_of(task);
    options.method = method_of(method);
    options.network = network_of(network);
    options.semester = semester;
    options.hop_limit = hop_limit;
    prefnet_dataset* train = nullptr;
    prefnet_dataset* test = nullptr;
    check(prefnet_dataset_build(series.get(), &options, &train, &test));
    return {Dataset(train), Dataset(test)};
  }
};

struct TrainFlags {
  std::string classifier = "all";
  std::uint64_t seed = 1;
  double validation_fraction = 0.2;
  double negative_ratio = 10.0;
  bool no_expansion = false;
  unsigned threads = 1;

  void bind(Command& command) {
    command.add("--classifier", classifier, "regression, svm, knn, forest, bayes or all");
    command.add("--seed", seed, "Random seed");
    command.add("--validation-fraction", validation_fraction, "Share of training rows held out for validation");
    command.add("--negative-ratio", negative_ratio, "Negatives kept per positive when fitting (<= 0 keeps all)");
    command.add("--no-expansion", no_expansion, "Disable the degree-2 feature expansion sweep");
    command.add("--threads", threads, "Classifiers trained concurrently");
  }

  prefnet_train_options options() const {
    prefnet_train_options out;
    prefnet_train_options_init(&out);
    out.seed = seed;
    out.validation_fraction = validation_fraction;
    out.negative_ratio = negative_ratio;
    out.allow_expansion = no_expansion ? 0 : 1;
    out.threads = threads == 0 ? 1 : threads;
    return out;
  }
};

struct Trained {
  std::vector<prefnet_classifier> kinds;
  std::vector<Model> models;
  json summary;
};

Trained train_models(const prefnet_dataset* train, const TrainFlags& flags) {
  Trained out;
  out.kinds = classifiers_of(flags.classifier);
  const auto options = flags.options();
  std::vector<prefnet_model*> raw(out.kinds.size(), nullptr);
  prefnet_classifier selected;
  CString summary;
  check(prefnet_train_many(train, out.kinds.data(), out.kinds.size(), &options, raw.data(), &selected,
                           summary.out()));
  for (auto* model : raw) out.models.emplace_back(model);
  out.summary = parse_json(summary.str(), "training summary");
  return out;
}

std::string model_json(const prefnet_model* model) {
  CString text;
  check(prefnet_model_to_json(model, text.out()));
  return text.str();
}

void run_synth(Command& command, const std::string& config, const CLI::Option* seed_option, std::uint64_t seed,
               const CLI::Option* nodes_option, unsigned nodes) {
  json gen;
  if (config.empty()) {
    CString defaults;
    check(prefnet_synth_default_config(defaults.out()));
    gen = parse_json(defaults.str(), "default config");
  } else {
    gen = parse_json(read_text(config), config);
    command.inputs.push_back(config);
  }
  if (!gen.is_object()) throw Failure(kExitParse, "parse", config + ": expected a JSON object");
  if (seed_option->count() > 0) gen["seed"] = seed;
  if (nodes_option->count() > 0) gen["nodes"] = nodes;
  command.seed = gen.value("seed", std::uint64_t{0});
  command.prepare_out();
  CString files;
  check(prefnet_synth(gen.dump().c_str(), command.out_dir.c_str(), files.out()));
  for (const auto& file : parse_json(files.str(), "synth output")) command.outputs.push_back(file.get<std::string>());
  command.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personal preference link prediction for attribute-rich temporal networks", "prefnet"};
  app.set_version_flag("--version", std::string(prefnet_version()));
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& help, bool takes_config = true) -> Command& {
    auto command = std::make_unique<Command>();
    command->app = app.add_subcommand(name, help);
    command->app->add_option("--out", command->out_dir, "Output directory");
    if (takes_config) command->app->add_option("--config", command->config_path, "JSON file of flag values");
    commands.push_back(std::move(command));
    return *commands.back();
  };

  auto& synth = make("synth", "Generate a synthetic dataset", false);
  std::string synth_config;
  std::uint64_t synth_seed = 0;
  unsigned synth_nodes = 0;
  synth.app->add_option("--config", synth_config, "Generator config JSON");
  auto* synth_seed_option = synth.add("--seed", synth_seed, "Override the generator seed");
  auto* synth_nodes_option = synth.add("--nodes", synth_nodes, "Override the node count");

  auto& ingest = make("ingest", "Build per-semester snapshots from raw files");
  std::string data_dir, schema_path, events_path, nominations_path, attributes_path;
  bool mutual = false;
  ingest.add("--data", data_dir, "Directory holding schema.json, events.csv, nominations.csv, attributes.csv");
  ingest.add("--schema", schema_path, "Schema JSON");
  ingest.add("--events", events_path, "Call and text events CSV");
  ingest.add("--nominations", nominations_path, "Friend nominations CSV");
  ingest.add("--attributes", attributes_path, "Survey attributes CSV");
  ingest.add("--mutual", mutual, "Cognitive edges require mutual nomination");

  auto& prefs = make("prefs", "Per-node attribute preferences");
  std::string prefs_snapshot, prefs_network;
  int prefs_semester = 0;
  prefs.add("--snapshot,--snapshots", prefs_snapshot, "Snapshot series JSON");
  prefs.add("--network", prefs_network, "behavioral or cognitive");
  prefs.add("--semester", prefs_semester, "Semester to emit (0 emits all)");

  auto& matrix = make("matrix", "Average preference matrices and trends for one attribute");
  std::string matrix_snapshot, matrix_attribute, matrix_network;
  double matrix_epsilon = 0.05;
  matrix.add("--snapshot,--snapshots", matrix_snapshot, "Snapshot series JSON");
  matrix.add("--attribute", matrix_attribute, "Attribute name");
  matrix.add("--network", matrix_network, "behavioral or cognitive");
  matrix.add("--epsilon", matrix_epsilon, "Smallest change marked as a trend");

  auto& dataset = make("dataset", "Labeled train and test edge features");
  DatasetFlags dataset_flags;
  dataset_flags.bind(dataset);

  auto& train = make("train", "Train classifiers with validation sweeps");
  DatasetFlags train_data;
  TrainFlags train_flags;
  std::string train_csv;
  train_data.bind(train);
  train_flags.bind(train);
  train.add("--train-csv", train_csv, "Training CSV from `prefnet dataset` instead of --snapshot");

  auto& evaluate = make("evaluate", "Train and evaluate classifiers on the test split");
  DatasetFlags evaluate_data;
  TrainFlags evaluate_flags;
  std::string evaluate_train_csv, evaluate_test_csv;
  std::vector<std::string> evaluate_models;
  evaluate_data.bind(evaluate);
  evaluate_flags.bind(evaluate);
  evaluate.add("--train-csv", evaluate_train_csv, "Training CSV instead of --snapshot");
  evaluate.add("--test-csv", evaluate_test_csv, "Test CSV instead of --snapshot");
  evaluate.add("--model", evaluate_models, "Saved model JSON to evaluate instead of training");

  auto& importance = make("importance", "Regression attribute weights and ranks");
  std::string importance_snapshot, importance_method = "equal";
  int importance_semester = 3;
  unsigned top_k = 5;
  std::vector<std::string> cells{"formation:behavioral", "formation:cognitive", "dissolution:behavioral",
                                 "dissolution:cognitive"};
  TrainFlags importance_flags;
  importance.add("--snapshot,--snapshots", importance_snapshot, "Snapshot series JSON");
  importance.add("--method", importance_method, "equal or min");
  importance.add("--semester", importance_semester, "Label semester K of the test split");
  importance.add("--cells", cells, "task:network pairs forming the table columns");
  importance.add("--top-k", top_k, "Ranks compared across columns");
  importance.add("--seed", importance_flags.seed, "Random seed");
  importance.add("--validation-fraction", importance_flags.validation_fraction, "Validation share");
  importance.add("--negative-ratio", importance_flags.negative_ratio, "Negatives kept per positive");

  auto& survival = make("survival", "Strong and weak edge survival rates");
  std::string survival_snapshot, survival_network, sweep;
  double threshold = 0.75;
  survival.add("--snapshot,--snapshots", survival_snapshot, "Snapshot series JSON");
  survival.add("--network", survival_network, "behavioral or cognitive");
  survival.add("--ts", threshold, "Agreement fraction above which an edge is strong");
  survival.add("--sweep", sweep, "Threshold grid a:b:step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", {{"code", "usage"}, {"exit_code", kExitUsage}, {"message", e.what()}}}}.dump() << "\n";
    return kExitUsage;
  }

  try {
    for (auto& command : commands)
      if (command->app->parsed()) command->apply_config();

    if (synth.app->parsed()) {
      run_synth(synth, synth_config, synth_seed_option, synth_seed, synth_nodes_option, synth_nodes);
    } else if (ingest.app->parsed()) {
      const auto pick = [&](const std::string& explicit_path, const char* name, const char* flag) {
        if (!explicit_path.empty()) return explicit_path;
        if (data_dir.empty()) usage(std::string(flag) + " or --data is required");
        return (fs::path(data_dir) / name).string();
      };
      const auto schema = pick(schema_path, "schema.json", "--schema");
      const auto events = pick(events_path, "events.csv", "--events");
      const auto nominations = pick(nominations_path, "nominations.csv", "--nominations");
      const auto attributes = pick(attributes_path, "attributes.csv", "--attributes");
      ingest.prepare_out();
      const prefnet_ingest_options options{schema.c_str(), events.c_str(), nominations.c_str(), attributes.c_str(),
                                           mutual ? 1 : 0};
      prefnet_series* raw = nullptr;
      CString warnings;
      check(prefnet_series_ingest(&options, &raw, warnings.out()));
      Series series(raw);
      ingest.inputs.insert(ingest.inputs.end(), {schema, events, nominations, attributes});
      const auto path = ingest.output("snapshots.json");
      check(prefnet_series_save(series.get(), path.string().c_str()));
      ingest.write("ingest_warnings.json", warnings.str());
      ingest.finish();
    } else if (prefs.app->parsed()) {
      const auto network = network_of(prefs_network);
      auto series = load_series(prefs, prefs_snapshot);
      prefs.prepare_out();
      CString out;
      check(prefnet_preferences(series.get(), prefs_semester, network, out.out()));
      prefs.write("preferences.json", out.str());
      prefs.finish();
    } else if (matrix.app->parsed()) {
      require_value(matrix_attribute, "--attribute");
      const auto network = network_of(matrix_network);
      auto series = load_series(matrix, matrix_snapshot);
      matrix.prepare_out();
      CString out_json, out_matrix, out_trends;
      check(prefnet_matrices(series.get(), matrix_attribute.c_str(), network, matrix_epsilon, out_json.out(),
                             out_matrix.out(), out_trends.out()));
      matrix.write("matrix_" + matrix_attribute + ".json", out_json.str());
      matrix.write("matrix_" + matrix_attribute + ".csv", out_matrix.str());
      matrix.write("trends_" + matrix_attribute + ".csv", out_trends.str());
      matrix.finish();
    } else if (dataset.app->parsed()) {
      auto [train_set, test_set] = dataset_flags.build(dataset);
      dataset.prepare_out();
      CString train_text, test_text;
      check(prefnet_dataset_to_csv(train_set.get(), train_text.out()));
      check(prefnet_dataset_to_csv(test_set.get(), test_text.out()));
      dataset.write("train.csv", train_text.str());
      dataset.write("test.csv", test_text.str());
      dataset.finish();
    } else if (train.app->parsed()) {
      train.seed = train_flags.seed;
      Dataset train_set = train_csv.empty() ? train_data.build(train).first : load_dataset(train, train_csv);
      train.prepare_out();
      auto trained = train_models(train_set.get(), train_flags);
      for (std::size_t i = 0; i < trained.kinds.size(); ++i)
        train.write(std::string("model_") + prefnet_classifier_name(trained.kinds[i]) + ".json",
                    model_json(trained.models[i].get()));
      train.write("validation.json", trained.summary.dump(2) + "\n");
      train.finish();
    } else if (evaluate.app->parsed()) {
      evaluate.seed = evaluate_flags.seed;
      Dataset train_set, test_set;
      if (!evaluate_test_csv.empty()) {
        test_set = load_dataset(evaluate, evaluate_test_csv);
        if (evaluate_models.empty()) {
          if (evaluate_train_csv.empty()) usage("--train-csv or --model is required with --test-csv");
          train_set = load_dataset(evaluate, evaluate_train_csv);
        }
      } else {
        std::tie(train_set, test_set) = evaluate_data.build(evaluate);
      }
      evaluate.prepare_out();

      std::vector<Model> models;
      std::vector<prefnet_classifier> kinds;
      json root = json::object();
      if (evaluate_models.empty()) {
        auto trained = train_models(train_set.get(), evaluate_flags);
        models = std::move(trained.models);
        kinds = trained.kinds;
        root["selected"] = trained.summary["selected"];
        for (std::size_t i = 0; i < kinds.size(); ++i) root["validation"][prefnet_classifier_name(kinds[i])] =
            trained.summary["classifiers"][i]["validation"];
      } else {
        for (const auto& path : evaluate_models) {
          prefnet_model* raw = nullptr;
          check(prefnet_model_from_json(read_text(path).c_str(), &raw));
          evaluate.inputs.push_back(path);
          models.emplace_back(raw);
          kinds.push_back(prefnet_model_kind(raw));
        }
      }
      for (std::size_t i = 0; i < models.size(); ++i) {
        const std::string name = prefnet_classifier_name(kinds[i]);
        CString report, roc;
        check(prefnet_evaluate(models[i].get(), test_set.get(), report.out(), roc.out()));
        evaluate.write("report_" + name + ".json", report.str());
        evaluate.write("roc_" + name + ".csv", roc.str());
        root["test"][name] = parse_json(report.str(), "evaluation report");
      }
      evaluate.write("evaluation.json", root.dump(2) + "\n");
      evaluate.finish();
    } else if (importance.app->parsed()) {
      importance.seed = importance_flags.seed;
      std::vector<prefnet_task> tasks;
      std::vector<prefnet_network> networks;
      for (const auto& cell : cells) {
        const auto colon = cell.find(':');
        if (colon == std::string::npos) usage("--cells entries must look like task:network, got '" + cell + "'");
        tasks.push_back(task_of(cell.substr(0, colon)));
        networks.push_back(network_of(cell.substr(colon + 1)));
      }
      const auto method = method_of(importance_method);
      auto series = load_series(importance, importance_snapshot);
      importance.prepare_out();
      const auto options = importance_flags.options();
      CString weights, ranks, comparison;
      check(prefnet_importance_tables(series.get(), tasks.data(), networks.data(), tasks.size(), method,
                                      importance_semester, &options, top_k, weights.out(), ranks.out(),
                                      comparison.out()));
      importance.write("importance_weights.csv", weights.str());
      importance.write("importance_ranks.csv", ranks.str());
      importance.write("importance_comparison.json", comparison.str());
      importance.finish();
    } else if (survival.app->parsed()) {
      const auto network = network_of(survival_network);
      auto series = load_series(survival, survival_snapshot);
      survival.prepare_out();
      CString csv, report;
      check(prefnet_survival(series.get(), network, threshold, csv.out(), report.out()));
      survival.write("survival.csv", csv.str());
      survival.write("survival.json", report.str());
      if (!sweep.empty()) {
        double* grid = nullptr;
        std::size_t count = 0;
        check(prefnet_parse_grid(sweep.c_str(), &grid, &count));
        std::unique_ptr<double, void (*)(double*)> owned(grid, prefnet_doubles_free);
        CString sweep_csv;
        check(prefnet_survival_sweep(series.get(), network, grid, count, sweep_csv.out()));
        survival.write("survival_sweep.csv", sweep_csv.str());
      }
      survival.finish();
    }
  } catch (const Failure& e) {
    std::cerr << json{{"error", {{"code", e.code}, {"exit_code", e.exit_code}, {"message", e.what()}}}}.dump() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"code", "internal"}, {"exit_code", kExitInternal}, {"message", e.what()}}}}.dump()
              << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
