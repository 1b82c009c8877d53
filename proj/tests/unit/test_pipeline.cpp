#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <string>

#include "prefnet/error.hpp"
#include "prefnet/pipeline.hpp"
#include "prefnet/synthgen.hpp"
#include "support.hpp"

using namespace prefnet;
using support::ingest_generated;

namespace {

const char* kPlanted = R"({"attributes": [
  {"name": "dominant", "values": ["a", "b"], "homophily": 10},
  {"name": "x0", "values": ["p", "q", "r"], "homophily": 1},
  {"name": "x1", "values": ["p", "q", "r"], "homophily": 1}],
  "formation_rate": 3e-05, "closure_exponent": 8, "distant_weight": 0.01, "mean_degree": 8})";

// No closure effect, so common_neighbors carries little signal.
const char* kHomophilyOnly = R"({"attributes": [
  {"name": "dominant", "values": ["a", "b"], "homophily": 10},
  {"name": "x0", "values": ["p", "q", "r"], "homophily": 1},
  {"name": "x1", "values": ["p", "q", "r"], "homophily": 1}],
  "formation_rate": 0.0005, "closure_exponent": 0, "distant_weight": 1})";

SnapshotSeries series_from(const char* config_json, std::uint64_t seed) {
  auto config = gen_config_from_json(config_json);
  config.seed = seed;
  return ingest_generated(generate(config));
}

const SnapshotSeries& planted_series() {
  static const SnapshotSeries series = series_from(kPlanted, 3);
  return series;
}

const ExperimentResult& planted_result() {
  static const ExperimentResult result = run_experiment(planted_series(), ExperimentOptions{});
  return result;
}

}  // namespace

TEST_CASE("every classifier recovers a planted formation signal") {
  const auto& result = planted_result();
  REQUIRE(result.outcomes.size() == ml::kAllModelKinds.size());
  for (const auto& outcome : result.outcomes) {
    INFO(ml::to_string(outcome.kind));
    REQUIRE(outcome.test.selection_score.has_value());
    CHECK(*outcome.test.selection_score > 5.0 * 0.9 + 0.9);
  }
}

TEST_CASE("selection picks the best validation score") {
  const auto& result = planted_result();
  const double chosen = *result.best().validation.selection_score;
  for (const auto& outcome : result.outcomes) CHECK(*outcome.validation.selection_score <= chosen);
}

TEST_CASE("classifier json round trip preserves predictions") {
  const auto& result = planted_result();
  const auto test = to_samples(result.data.test, result.best().classifier.scaler);
  for (const auto& outcome : result.outcomes) {
    INFO(ml::to_string(outcome.kind));
    const auto text = classifier_to_json(outcome.classifier);
    const auto restored = classifier_from_json(text);
    CHECK(classifier_to_json(restored) == text);
    for (std::size_t i = 0; i < test.x.size(); i += 97)
      CHECK(restored.model.score(test.x[i]) == outcome.classifier.model.score(test.x[i]));
  }
}

TEST_CASE("classifier json rejects foreign documents") {
  CHECK_THROWS_AS(classifier_from_json("{"), Error);
  CHECK_THROWS_AS(classifier_from_json(R"({"format":"other"})"), Error);
}

TEST_CASE("summary is identical across thread counts") {
  ExperimentOptions options;
  options.threads = 4;
  const auto threaded = run_experiment(planted_series(), options);
  CHECK(experiment_summary_json(threaded) == experiment_summary_json(planted_result()));
}

TEST_CASE("planted attribute ranks first in importance") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto report = importance_for(series_from(kHomophilyOnly, seed), ExperimentOptions{});
    const auto it = std::find_if(report.features.begin(), report.features.end(),
                                 [](const auto& f) { return f.feature == "dominant"; });
    REQUIRE(it != report.features.end());
    CHECK(it->rank == 1);
    CHECK(it->weight == 1.0);
  }
}

TEST_CASE("empty classifier list is rejected") {
  ExperimentOptions options;
  options.kinds.clear();
  CHECK_THROWS_AS(run_experiment(planted_series(), options), Error);
}
