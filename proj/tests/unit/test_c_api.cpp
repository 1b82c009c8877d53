#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "prefnet/prefnet.h"

namespace fs = std::filesystem;

namespace {

std::string take(char* text) {
  std::string out = text ? text : "";
  prefnet_string_free(text);
  return out;
}

struct Workspace {
  fs::path dir;
  Workspace() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("prefnet_capi_" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string file(const char* name) const { return (dir / name).string(); }
};

const char* kSmallConfig = R"({"nodes": 80, "seed": 5, "mean_degree": 6,
  "attributes": [{"name": "dominant", "values": ["a", "b"], "homophily": 5},
                 {"name": "x0", "values": ["p", "q", "r"], "homophily": 1}]})";

prefnet_series* ingest(const Workspace& ws) {
  char* files = nullptr;
  REQUIRE(prefnet_synth(kSmallConfig, ws.dir.string().c_str(), &files) == PREFNET_OK);
  prefnet_string_free(files);
  const auto schema = ws.file("schema.json"), events = ws.file("events.csv"),
             nominations = ws.file("nominations.csv"), attributes = ws.file("attributes.csv");
  prefnet_ingest_options options{schema.c_str(), events.c_str(), nominations.c_str(), attributes.c_str(), 0};
  prefnet_series* series = nullptr;
  char* warnings = nullptr;
  REQUIRE(prefnet_series_ingest(&options, &series, &warnings) == PREFNET_OK);
  prefnet_string_free(warnings);
  return series;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(prefnet_version()).size() > 0);
  CHECK(std::string(prefnet_status_name(PREFNET_OK)) == "ok");
  CHECK(std::string(prefnet_status_name(PREFNET_ERROR_IO)) == "io");
}

TEST_CASE("enum parsing") {
  prefnet_network network{};
  CHECK(prefnet_parse_network("cognitive", &network) == PREFNET_OK);
  CHECK(network == PREFNET_COGNITIVE);
  CHECK(prefnet_parse_network("telepathic", &network) == PREFNET_ERROR_INVALID_ARGUMENT);
  CHECK(std::string(prefnet_last_error()).find("telepathic") != std::string::npos);
  prefnet_classifier kind{};
  CHECK(prefnet_parse_classifier("random_forest", &kind) == PREFNET_OK);
  CHECK(kind == PREFNET_RANDOM_FOREST);
  CHECK(std::string(prefnet_classifier_name(PREFNET_KNN)) == "knn");
}

TEST_CASE("null arguments are rejected") {
  CHECK(prefnet_parse_task(nullptr, nullptr) == PREFNET_ERROR_INVALID_ARGUMENT);
  CHECK(prefnet_series_load(nullptr, nullptr) == PREFNET_ERROR_INVALID_ARGUMENT);
  CHECK(prefnet_preferences(nullptr, 0, PREFNET_BEHAVIORAL, nullptr) == PREFNET_ERROR_INVALID_ARGUMENT);
  CHECK(prefnet_series_semesters(nullptr) == 0);
  prefnet_series_free(nullptr);
  prefnet_dataset_free(nullptr);
  prefnet_model_free(nullptr);
  prefnet_string_free(nullptr);
  prefnet_doubles_free(nullptr);
}

TEST_CASE("error kinds map to statuses") {
  prefnet_series* series = nullptr;
  CHECK(prefnet_series_load("/nonexistent/snapshots.json", &series) == PREFNET_ERROR_IO);
  CHECK(series == nullptr);
  CHECK(std::string(prefnet_last_error()).find("/nonexistent/snapshots.json") != std::string::npos);

  prefnet_model* model = nullptr;
  CHECK(prefnet_model_from_json("{not json", &model) == PREFNET_ERROR_PARSE);
  CHECK(model == nullptr);

  Workspace ws;
  char* files = nullptr;
  CHECK(prefnet_synth(R"({"nodes": 1})", ws.dir.string().c_str(), &files) == PREFNET_ERROR_VALIDATION);
  CHECK(files == nullptr);

  double* grid = nullptr;
  size_t count = 0;
  CHECK(prefnet_parse_grid("0.5:0.9:0.1", &grid, &count) == PREFNET_OK);
  CHECK(count == 5);
  prefnet_doubles_free(grid);
  CHECK(prefnet_parse_grid("0.5:x", &grid, &count) != PREFNET_OK);
}

TEST_CASE("last error is per thread and cleared by success") {
  prefnet_network network{};
  CHECK(prefnet_parse_network("bogus", &network) != PREFNET_OK);
  CHECK(std::string(prefnet_last_error()).size() > 0);
  CHECK(prefnet_parse_network("behavioral", &network) == PREFNET_OK);
  CHECK(std::string(prefnet_last_error()).empty());
}

TEST_CASE("ingest, train and evaluate through the C interface") {
  Workspace ws;
  prefnet_series* series = ingest(ws);
  CHECK(prefnet_series_semesters(series) == 4);

  const auto saved = ws.file("snapshots.json");
  REQUIRE(prefnet_series_save(series, saved.c_str()) == PREFNET_OK);
  prefnet_series* loaded = nullptr;
  REQUIRE(prefnet_series_load(saved.c_str(), &loaded) == PREFNET_OK);
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(prefnet_preferences(series, 0, PREFNET_BEHAVIORAL, &a) == PREFNET_OK);
  REQUIRE(prefnet_preferences(loaded, 0, PREFNET_BEHAVIORAL, &b) == PREFNET_OK);
  CHECK(take(a) == take(b));
  prefnet_series_free(loaded);

  prefnet_dataset_options dataset_options;
  prefnet_dataset_options_init(&dataset_options);
  CHECK(dataset_options.semester == 3);
  prefnet_dataset* train = nullptr;
  prefnet_dataset* test = nullptr;
  REQUIRE(prefnet_dataset_build(series, &dataset_options, &train, &test) == PREFNET_OK);
  CHECK(prefnet_dataset_rows(train) > 0);
  CHECK(prefnet_dataset_positives(test) > 0);

  char* csv = nullptr;
  REQUIRE(prefnet_dataset_to_csv(train, &csv) == PREFNET_OK);
  const auto train_csv = take(csv);
  prefnet_dataset* reparsed = nullptr;
  REQUIRE(prefnet_dataset_from_csv(train_csv.c_str(), &reparsed) == PREFNET_OK);
  CHECK(prefnet_dataset_rows(reparsed) == prefnet_dataset_rows(train));
  prefnet_dataset_free(reparsed);

  prefnet_train_options train_options;
  prefnet_train_options_init(&train_options);
  prefnet_model* model = nullptr;
  char* validation = nullptr;
  REQUIRE(prefnet_train(train, PREFNET_LINEAR_REGRESSION, &train_options, &model, &validation) == PREFNET_OK);
  CHECK(take(validation).find("accuracy") != std::string::npos);
  CHECK(prefnet_model_kind(model) == PREFNET_LINEAR_REGRESSION);

  std::vector<double> features(prefnet_model_dims(model), 0.5);
  int label = -1;
  double score = 0.0;
  CHECK(prefnet_model_predict(model, features.data(), features.size(), &label, &score) == PREFNET_OK);
  CHECK((label == 0 || label == 1));
  CHECK(prefnet_model_predict(model, features.data(), features.size() + 1, &label, &score) ==
        PREFNET_ERROR_INVALID_ARGUMENT);

  char* model_json = nullptr;
  REQUIRE(prefnet_model_to_json(model, &model_json) == PREFNET_OK);
  const auto model_text = take(model_json);
  prefnet_model* restored = nullptr;
  REQUIRE(prefnet_model_from_json(model_text.c_str(), &restored) == PREFNET_OK);

  char* report_a = nullptr;
  char* roc_a = nullptr;
  char* report_b = nullptr;
  char* roc_b = nullptr;
  REQUIRE(prefnet_evaluate(model, test, &report_a, &roc_a) == PREFNET_OK);
  REQUIRE(prefnet_evaluate(restored, test, &report_b, &roc_b) == PREFNET_OK);
  CHECK(take(report_a) == take(report_b));
  const auto roc = take(roc_a);
  CHECK(roc == take(roc_b));
  CHECK(roc.find("fpr") != std::string::npos);

  char* importance = nullptr;
  REQUIRE(prefnet_importance(model, PREFNET_FORMATION, PREFNET_BEHAVIORAL, &importance) == PREFNET_OK);
  CHECK(take(importance).find("dominant") != std::string::npos);

  prefnet_model_free(restored);
  prefnet_model_free(model);
  prefnet_dataset_free(train);
  prefnet_dataset_free(test);
  prefnet_series_free(series);
}

TEST_CASE("train_many is identical for one and many threads") {
  Workspace ws;
  prefnet_series* series = ingest(ws);
  prefnet_dataset_options dataset_options;
  prefnet_dataset_options_init(&dataset_options);
  prefnet_dataset* train = nullptr;
  prefnet_dataset* test = nullptr;
  REQUIRE(prefnet_dataset_build(series, &dataset_options, &train, &test) == PREFNET_OK);

  const prefnet_classifier kinds[PREFNET_CLASSIFIER_COUNT] = {PREFNET_LINEAR_REGRESSION, PREFNET_LINEAR_SVM,
                                                              PREFNET_KNN, PREFNET_RANDOM_FOREST,
                                                              PREFNET_NAIVE_BAYES};
  std::vector<std::string> summaries;
  std::vector<std::string> models;
  for (unsigned threads : {1u, 4u}) {
    prefnet_train_options options;
    prefnet_train_options_init(&options);
    options.threads = threads;
    prefnet_model* out[PREFNET_CLASSIFIER_COUNT] = {};
    prefnet_classifier selected{};
    char* summary = nullptr;
    REQUIRE(prefnet_train_many(train, kinds, PREFNET_CLASSIFIER_COUNT, &options, out, &selected, &summary) ==
            PREFNET_OK);
    summaries.push_back(take(summary));
    std::string all;
    for (auto* model : out) {
      char* json = nullptr;
      REQUIRE(prefnet_model_to_json(model, &json) == PREFNET_OK);
      all += take(json);
      prefnet_model_free(model);
    }
    models.push_back(all);
  }
  CHECK(summaries[0] == summaries[1]);
  CHECK(models[0] == models[1]);

  prefnet_dataset_free(train);
  prefnet_dataset_free(test);
  prefnet_series_free(series);
}

TEST_CASE("dataset build rejects an early label semester") {
  Workspace ws;
  prefnet_series* series = ingest(ws);
  prefnet_dataset_options options;
  prefnet_dataset_options_init(&options);
  options.semester = 2;
  prefnet_dataset* train = nullptr;
  prefnet_dataset* test = nullptr;
  CHECK(prefnet_dataset_build(series, &options, &train, &test) == PREFNET_ERROR_DOMAIN);
  CHECK(train == nullptr);
  CHECK(test == nullptr);
  prefnet_series_free(series);
}

TEST_CASE("survival and manifest helpers") {
  Workspace ws;
  prefnet_series* series = ingest(ws);
  char* csv = nullptr;
  char* json = nullptr;
  REQUIRE(prefnet_survival(series, PREFNET_BEHAVIORAL, 0.75, &csv, &json) == PREFNET_OK);
  CHECK(take(csv).find("strong") != std::string::npos);
  CHECK(take(json).find("0.75") != std::string::npos);
  CHECK(prefnet_survival(series, PREFNET_BEHAVIORAL, 1.5, &csv, &json) != PREFNET_OK);

  char* hex = nullptr;
  const auto schema = ws.file("schema.json");
  REQUIRE(prefnet_sha256_file(schema.c_str(), &hex) == PREFNET_OK);
  CHECK(take(hex).size() == 64);

  const char* inputs[] = {schema.c_str()};
  const auto out = ws.file("report.json");
  const char* outputs[] = {out.c_str()};
  REQUIRE(prefnet_manifest_record(ws.dir.string().c_str(), "test", "{}", 1, inputs, 1, outputs, 1) == PREFNET_OK);
  CHECK(fs::exists(ws.dir / "manifest.json"));
  prefnet_series_free(series);
}
