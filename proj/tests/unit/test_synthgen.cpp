#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "prefnet/error.hpp"
#include "prefnet/features.hpp"
#include "prefnet/preference.hpp"
#include "prefnet/synthgen.hpp"
#include "support.hpp"

using namespace prefnet;

namespace {

AttributeSpec attribute(const std::string& name, std::size_t k, double homophily) {
  AttributeSpec spec{name, {}, std::vector<double>(k, 1.0 / static_cast<double>(k)), {}, false};
  for (std::size_t i = 0; i < k; ++i) spec.values.push_back(name + "_" + std::to_string(i));
  spec.affinity.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) spec.affinity[i][i] = homophily;
  return spec;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// Chi-square statistic of value-pair edge counts against random labeling.
double mixing_statistic(const std::vector<NodePair>& edges, const std::vector<std::size_t>& label, std::size_t k) {
  const double n = static_cast<double>(label.size());
  std::vector<double> count(k, 0.0);
  for (auto l : label) count[l] += 1.0;
  std::vector<std::vector<double>> observed(k, std::vector<double>(k, 0.0));
  for (const auto& e : edges) {
    const auto a = std::min(label[e.u], label[e.v]), b = std::max(label[e.u], label[e.v]);
    observed[a][b] += 1.0;
  }
  const double m = static_cast<double>(edges.size());
  double chi = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      const double p = a == b ? count[a] * (count[a] - 1) / (n * (n - 1)) : 2 * count[a] * count[b] / (n * (n - 1));
      const double expected = m * p;
      if (expected > 0) chi += (observed[a][b] - expected) * (observed[a][b] - expected) / expected;
    }
  return chi;
}

}  // namespace

TEST_CASE("generation is byte-identical for a fixed seed") {
  auto config = default_gen_config();
  config.seed = 7;
  const auto a = generate(config);
  const auto b = generate(config);
  CHECK(a.schema_json == b.schema_json);
  CHECK(a.events_csv == b.events_csv);
  CHECK(a.nominations_csv == b.nominations_csv);
  CHECK(a.attributes_csv == b.attributes_csv);
  CHECK(a.ledger_json == b.ledger_json);
  config.seed = 8;
  CHECK(generate(config).events_csv != a.events_csv);

  support::TempDir one("gen1"), two("gen2");
  const auto files = write_generated(a, one.path());
  write_generated(b, two.path());
  CHECK(files.size() == 5);
  for (const auto& file : files) CHECK(slurp(file) == slurp(two.path() / file.filename()));
}

TEST_CASE("generated files ingest cleanly") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto config = default_gen_config();
    config.seed = seed;
    IngestWarnings warnings;
    const auto series = support::ingest_generated(generate(config), &warnings);
    CHECK(warnings.total() == 0);
    CHECK(series.snapshots.size() == 4);
    const auto income = series.schema.index_of("parental_income");
    for (const auto& s : series.snapshots) {
      CHECK(s.node_count() == 200);
      for (NodeIndex n = 0; n < s.node_count(); ++n) {
        CHECK(s.value(n, income) == series.snapshots[0].value(n, income));
        CHECK(s.value(n, income).has_value());
      }
      for (const auto& [pair, weight] : s.behavioral_edges()) CHECK(weight >= 1);
    }
  }
}

TEST_CASE("config validation and JSON") {
  auto config = default_gen_config();
  config.mean_degree = 250;
  CHECK_THROWS_AS(validate(config), Error);
  config = default_gen_config();
  config.attributes[0].distribution[0] += 0.1;
  CHECK_THROWS_AS(validate(config), Error);
  config = default_gen_config();
  config.dissolution.weak_rate = 1.5;
  CHECK_THROWS_AS(validate(config), Error);

  const auto text = gen_config_to_json(default_gen_config());
  CHECK(gen_config_to_json(gen_config_from_json(text)) == text);
  CHECK_THROWS_AS(gen_config_from_json(R"({"nodez": 5})"), Error);
  CHECK_THROWS_AS(gen_config_from_json(R"({"nodes": -5})"), Error);
  CHECK_THROWS_AS(gen_config_from_json("{"), Error);
  const auto scalar = gen_config_from_json(
      R"({"nodes": 50, "mean_degree": 4, "attributes": [{"name": "a", "values": ["x", "y", "z"], "homophily": 3}]})");
  CHECK(scalar.nodes == 50);
  CHECK(scalar.attributes[0].affinity == std::vector<std::vector<double>>{{3, 1, 1}, {1, 3, 1}, {1, 1, 3}});
  CHECK(scalar.attributes[0].distribution[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("dyad affinity multiplies both directions over attributes") {
  GenConfig config;
  config.attributes = {attribute("a", 2, 5.0), attribute("b", 3, 2.0)};
  config.attributes[0].affinity[0][1] = 0.5;
  CHECK(dyad_affinity(config, {0, 1}, {0, 1}) == 25.0 * 4.0);
  CHECK(dyad_affinity(config, {0, 1}, {1, 2}) == 0.5 * 1.0 * 1.0);
}

TEST_CASE("empirical attribute distributions converge") {
  const auto base = default_gen_config();
  std::vector<std::vector<double>> pooled;
  for (const auto& a : base.attributes) pooled.emplace_back(a.values.size(), 0.0);
  const int seeds = 20;
  for (int seed = 1; seed <= seeds; ++seed) {
    auto config = base;
    config.seed = static_cast<std::uint64_t>(seed);
    config.semesters = 1;
    config.volume = {1.0, 2.0, 0.3};
    const auto series = support::ingest_generated(generate(config));
    const auto dist = value_distribution(series.snapshots[0], series.schema);
    for (std::size_t a = 0; a < pooled.size(); ++a)
      for (std::size_t v = 0; v < pooled[a].size(); ++v) pooled[a][v] += dist.percentage[a][v] / seeds;
  }
  for (std::size_t a = 0; a < pooled.size(); ++a) {
    double l1 = 0.0;
    for (std::size_t v = 0; v < pooled[a].size(); ++v) l1 += std::abs(pooled[a][v] - base.attributes[a].distribution[v]);
    CAPTURE(base.attributes[a].name);
    CHECK(l1 <= 0.05);
  }
}

TEST_CASE("uniform affinities give uniform mixing") {
  int accepted = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenConfig config;
    config.seed = seed;
    config.semesters = 1;
    config.attributes = {attribute("a", 3, 1.0)};
    config.volume = {1.0, 2.0, 0.3};
    const auto series = support::ingest_generated(generate(config));
    const auto& s = series.snapshots[0];
    std::vector<std::size_t> label(s.node_count());
    for (NodeIndex n = 0; n < s.node_count(); ++n) label[n] = *s.value(n, 0);
    const auto edges = s.edges(NetworkKind::behavioral);
    const double observed = mixing_statistic(edges, label, 3);
    std::mt19937_64 rng(seed * 7919);
    int extreme = 0;
    const int permutations = 200;
    for (int i = 0; i < permutations; ++i) {
      std::shuffle(label.begin(), label.end(), rng);
      extreme += mixing_statistic(edges, label, 3) >= observed;
    }
    const double p = (1.0 + extreme) / (1.0 + permutations);
    accepted += p > 0.01;
  }
  CHECK(accepted >= 95);
}

TEST_CASE("planted homophily shows in the edge census and in preferences") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    GenConfig config;
    config.seed = seed;
    config.attributes = {attribute("dominant", 2, 5.0), attribute("noise", 3, 1.0)};
    config.semesters = 1;
    config.volume = {1.0, 2.0, 0.3};
    const auto series = support::ingest_generated(generate(config));
    const auto& s = series.snapshots[0];
    std::size_t same = 0, holders0 = 0;
    for (NodeIndex n = 0; n < s.node_count(); ++n) holders0 += *s.value(n, 0) == 0;
    const auto edges = s.edges(NetworkKind::behavioral);
    for (const auto& e : edges) same += *s.value(e.u, 0) == *s.value(e.v, 0);
    const double n = static_cast<double>(s.node_count()), h = static_cast<double>(holders0);
    const double expected_same = (h * (h - 1) + (n - h) * (n - h - 1)) / (n * (n - 1));
    CHECK(static_cast<double>(same) / static_cast<double>(edges.size()) > expected_same + 0.2);

    const auto prefs = compute_preferences(s, NetworkKind::behavioral, series.schema);
    double own = 0.0;
    for (NodeIndex node = 0; node < s.node_count(); ++node) own += *prefs.preference(node, 0, *s.value(node, 0));
    CHECK(own / n > 0.5);
  }
}

TEST_CASE("ledger outcomes cover every tie and match dissolution labels") {
  GenConfig config;
  config.seed = 5;
  config.attributes = {attribute("a", 2, 1.0), attribute("b", 2, 1.0), attribute("c", 3, 1.0),
                       attribute("d", 2, 1.0)};
  config.dissolution = {0.5, 0.2, 0.6, 0.5, 0.1};
  const auto data = generate(config);
  const auto series = support::ingest_generated(data);
  std::size_t checked = 0, agree = 0;
  for (int k = 2; k <= config.semesters; ++k) {
    const auto& before = series.semester(k - 1);
    const auto& after = series.semester(k);
    std::size_t outcomes = 0;
    for (const auto& e : data.ledger) {
      if (e.semester != k || e.outcome == TieOutcome::formed) continue;
      ++outcomes;
      const auto u = before.index_of(e.u), v = before.index_of(e.v);
      const auto now = before.weight(u, v);
      REQUIRE(now.has_value());
      const bool dissolving = is_dissolving(*now, after.weight(u, v));
      const bool planted = e.outcome != TieOutcome::survived;
      agree += dissolving == planted;
      ++checked;
      if (e.outcome == TieOutcome::removed) CHECK_FALSE(after.weight(u, v).has_value());
      if (e.outcome != TieOutcome::removed) CHECK(after.weight(u, v).has_value());
    }
    CHECK(outcomes == before.edge_count(NetworkKind::behavioral));
  }
  REQUIRE(checked > 1000);
  CHECK(static_cast<double>(agree) / static_cast<double>(checked) >= 0.95);
}

TEST_CASE("formation classes are imbalanced on the order of one to fifty") {
  auto config = default_gen_config();
  const auto series = support::ingest_generated(generate(config));
  for (int k : {3, 4}) {
    const auto data = build_dataset(Task::formation, CombinationMethod::equal_preference, series, k,
                                    NetworkKind::behavioral);
    const double ratio = static_cast<double>(data.test.size() - data.test.positives()) /
                         static_cast<double>(data.test.positives());
    CAPTURE(ratio);
    CHECK(ratio >= 15.0);
    CHECK(ratio <= 150.0);
  }
}
