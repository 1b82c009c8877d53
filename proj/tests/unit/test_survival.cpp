#include <doctest.h>

#include <random>

#include "prefnet/error.hpp"
#include "prefnet/survival.hpp"
#include "support.hpp"

using namespace prefnet;
using support::Edge;

namespace {

std::vector<AttributeRow> profiles(std::mt19937_64& rng, std::size_t n, std::size_t attributes, double missing) {
  std::bernoulli_distribution absent(missing);
  std::vector<AttributeRow> rows(n);
  for (auto& row : rows)
    for (std::size_t a = 0; a < attributes; ++a)
      row.push_back(absent(rng) ? std::nullopt : std::optional<std::size_t>(rng() % 2));
  return rows;
}

std::vector<Snapshot> random_series(std::uint64_t seed, std::size_t n, int semesters, double missing = 0.0) {
  std::mt19937_64 rng(seed);
  const auto rows = profiles(rng, n, 6, missing);
  std::vector<Snapshot> out;
  auto edges = support::random_edges(n, 0.2, rng);
  for (int k = 1; k <= semesters; ++k) {
    std::vector<Edge> next;
    for (const auto& e : edges)
      if (rng() % 10 < 7) next.push_back(e);
    for (const auto& e : support::random_edges(n, 0.05, rng)) next.push_back(e);
    std::map<NodePair, Edge> unique;
    for (const auto& e : next) unique[NodePair::of(e.a, e.b)] = e;
    edges.clear();
    for (const auto& [pair, e] : unique) edges.push_back(e);
    out.push_back(support::make_snapshot(k, n, rows, edges, edges));
  }
  return out;
}

}  // namespace

TEST_CASE("agreement fraction") {
  std::vector<AttributeRow> rows(4);
  for (std::size_t a = 0; a < 18; ++a) {
    rows[0].push_back(a % 2);
    rows[1].push_back(a % 2);
    rows[2].push_back(a < 14 ? a % 2 : 1 - a % 2);
    rows[3].push_back(1 - a % 2);
  }
  const auto s = support::make_snapshot(1, 4, rows, {});
  CHECK(agreement_fraction(s, 0, 1) == 1.0);
  CHECK(agreement_fraction(s, 0, 3) == 0.0);
  CHECK(agreement_fraction(s, 0, 2) == doctest::Approx(14.0 / 18.0));
  CHECK(agreement_fraction(s, 0, 2) > 0.75);

  const auto gaps = support::make_snapshot(1, 2, {{0, std::nullopt, 1}, {0, 1, std::nullopt}}, {});
  CHECK(agreement_fraction(gaps, 0, 1) == 1.0);
  const auto blank = support::make_snapshot(1, 2, {{std::nullopt, 1}, {0, std::nullopt}}, {});
  CHECK_THROWS_AS(agreement_fraction(blank, 0, 1), Error);
}

TEST_CASE("survival when every edge persists") {
  std::mt19937_64 rng(1);
  const auto rows = profiles(rng, 20, 4, 0.0);
  const auto edges = support::random_edges(20, 0.3, rng);
  const std::vector<Snapshot> series{support::make_snapshot(1, 20, rows, edges),
                                     support::make_snapshot(2, 20, rows, edges)};
  const auto report = survival_rates(series, NetworkKind::behavioral, 0.5);
  CHECK(report.semesters[0].has_next);
  CHECK_FALSE(report.semesters[1].has_next);
  if (report.strong_total > 0) CHECK(report.strong_rate == 1.0);
  if (report.weak_total > 0) CHECK(report.weak_rate == 1.0);
  CHECK_THROWS_AS(survival_rates(std::span(series).first(1), NetworkKind::behavioral), Error);
  CHECK_THROWS_AS(survival_rates(series, NetworkKind::behavioral, 1.5), Error);
}

TEST_CASE("survival rates equal brute-force edge tracking") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto series = random_series(seed, 30, 4, seed % 2 ? 0.1 : 0.0);
    for (double t : {0.0, 0.3, 0.5, 0.75, 0.9}) {
      const auto report = survival_rates(series, NetworkKind::behavioral, t);
      std::size_t strong_total = 0, strong_kept = 0, weak_total = 0, weak_kept = 0;
      for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const auto& row = report.semesters[k];
        std::size_t strong = 0, weak = 0, unclassified = 0, s_kept = 0, w_kept = 0, aged = 0, aged_strong = 0;
        for (const auto& pair : s.edges(NetworkKind::behavioral)) {
          std::size_t equal = 0, comparable = 0;
          for (std::size_t a = 0; a < 6; ++a) {
            const auto x = s.value(pair.u, a), y = s.value(pair.v, a);
            if (!x || !y) continue;
            ++comparable;
            equal += *x == *y;
          }
          if (comparable == 0) {
            ++unclassified;
            continue;
          }
          const bool is_strong = static_cast<double>(equal) / static_cast<double>(comparable) > t;
          (is_strong ? strong : weak) += 1;
          if (k + 1 < series.size() && series[k + 1].has_edge(NetworkKind::behavioral, pair.u, pair.v))
            (is_strong ? s_kept : w_kept) += 1;
          if (k > 0 && series[k - 1].has_edge(NetworkKind::behavioral, pair.u, pair.v)) {
            ++aged;
            aged_strong += is_strong;
          }
        }
        CHECK(row.strong == strong);
        CHECK(row.weak == weak);
        CHECK(row.unclassified == unclassified);
        CHECK(row.strong + row.weak + row.unclassified == row.edges);
        CHECK(row.edges == s.edge_count(NetworkKind::behavioral));
        if (k > 0) {
          CHECK(row.aged_edges == aged);
          CHECK(row.aged_strong == aged_strong);
        }
        if (k + 1 < series.size()) {
          CHECK(row.strong_survived == s_kept);
          CHECK(row.weak_survived == w_kept);
          if (strong) CHECK(*row.strong_rate == static_cast<double>(s_kept) / static_cast<double>(strong));
          if (weak) CHECK(*row.weak_rate == static_cast<double>(w_kept) / static_cast<double>(weak));
          strong_total += strong;
          weak_total += weak;
          strong_kept += s_kept;
          weak_kept += w_kept;
        }
      }
      CHECK(report.strong_total == strong_total);
      CHECK(report.weak_total == weak_total);
      CHECK(report.strong_survived == strong_kept);
      CHECK(report.weak_survived == weak_kept);
    }
  }
}

TEST_CASE("threshold sweep") {
  const auto series = random_series(42, 40, 3);
  const std::vector<double> three{0.5, 0.75, 0.9};
  CHECK(sweep_threshold(series, NetworkKind::cognitive, three).size() == 3);
  CHECK_THROWS_AS(sweep_threshold(series, NetworkKind::cognitive, std::vector<double>{}), Error);

  const auto grid = parse_grid("0:1:0.05");
  CHECK(grid.size() == 21);
  CHECK(grid[15] == 0.75);
  const auto reports = sweep_threshold(series, NetworkKind::behavioral, grid);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    CHECK(reports[i].strong_total <= reports[i - 1].strong_total);
    for (std::size_t k = 0; k < series.size(); ++k)
      CHECK(reports[i].semesters[k].strong <= reports[i - 1].semesters[k].strong);
  }
  CHECK(reports.back().strong_total == 0);
  CHECK_FALSE(reports.back().strong_rate.has_value());
  CHECK_FALSE(reports.back().gap().has_value());

  CHECK(parse_grid("0.5:0.9:0.2") == std::vector<double>{0.5, 0.7, 0.9});
  CHECK_THROWS_AS(parse_grid("0.5:0.4:0.1"), Error);
  CHECK_THROWS_AS(parse_grid("a:b:c"), Error);
  CHECK_THROWS_AS(parse_grid("0:1:0"), Error);
}

TEST_CASE("threshold zero makes every edge with any agreement strong") {
  std::vector<AttributeRow> rows{{0, 0}, {0, 1}, {1, 1}, {0, 0}};
  const std::vector<Snapshot> series{support::make_snapshot(1, 4, rows, {{0, 1}, {1, 2}, {0, 3}}),
                                     support::make_snapshot(2, 4, rows, {{0, 1}})};
  const auto report = survival_rates(series, NetworkKind::behavioral, 0.0);
  CHECK(report.strong_total == 3);
  CHECK(report.weak_total == 0);
  CHECK_FALSE(report.weak_rate.has_value());
  CHECK(*report.strong_rate == doctest::Approx(1.0 / 3.0));
  const auto csv = survival_to_csv(report);
  CHECK(csv.find("all,") != std::string::npos);
  CHECK(survival_to_json(report).find("\"weak_rate\": null") != std::string::npos);
}
