#include <doctest.h>

#include <cmath>
#include <random>

#include "prefnet/error.hpp"
#include "prefnet/preference.hpp"
#include "support.hpp"

using namespace prefnet;

namespace {

const auto kViews = support::make_schema({{"political_views", {"conservative", "moderate", "liberal"}}});

std::vector<AttributeRow> rows_of(const std::vector<std::optional<std::size_t>>& values) {
  std::vector<AttributeRow> rows;
  for (const auto& v : values) rows.push_back({v});
  return rows;
}

/// Independent recomputation straight from the definitions.
struct BruteForce {
  const Snapshot& s;
  const AttributeSchema& schema;
  NetworkKind kind;

  double p(std::size_t a, std::size_t value) const {
    std::size_t holders = 0, assigned = 0;
    for (NodeIndex n = 0; n < s.node_count(); ++n) {
      const auto v = s.attributes(n)[a];
      if (!v) continue;
      ++assigned;
      holders += *v == value;
    }
    return static_cast<double>(holders) / static_cast<double>(assigned);
  }

  std::optional<double> preference(NodeIndex node, std::size_t a, std::size_t value) const {
    if (!s.attributes(node)[a]) return std::nullopt;
    std::size_t n = 0, x = 0;
    for (NodeIndex w = 0; w < s.node_count(); ++w) {
      if (w == node || !s.has_edge(kind, node, w)) continue;
      const auto v = s.attributes(w)[a];
      if (!v) continue;
      ++n;
      x += *v == value;
    }
    const double share = p(a, value);
    if (n == 0 || share == 0.0 || share == 1.0) return 0.5;
    if (std::abs(static_cast<double>(x) - n * share) <= 1e-12 * std::max<double>(1.0, n)) return 0.5;
    return support::preference_oracle(n, share, x);
  }
};

Snapshot random_snapshot(std::mt19937_64& rng, std::size_t n, const AttributeSchema& schema, double density,
                         double missing) {
  std::bernoulli_distribution absent(missing);
  std::vector<AttributeRow> rows(n);
  for (auto& row : rows)
    for (std::size_t a = 0; a < schema.size(); ++a)
      row.push_back(absent(rng) ? std::nullopt : std::optional<std::size_t>(rng() % schema.at(a).size()));
  for (std::size_t a = 0; a < schema.size(); ++a) rows[0][a] = 0;
  return support::make_snapshot(1, n, rows, support::random_edges(n, density, rng),
                                support::random_edges(n, density / 2, rng));
}

}  // namespace

TEST_CASE("normal CDF matches the high-precision oracle") {
  for (double z = -8.0; z <= 8.0; z += 0.01) CHECK(std::abs(normal_cdf(z) - support::phi_oracle(z)) <= 1e-12);
  CHECK(normal_cdf(0.0) == 0.5);
}

TEST_CASE("preference score examples") {
  CHECK(preference_score(10, 0.5, 5) == 0.5);
  CHECK(preference_score(0, 0.3, 0) == 0.5);
  CHECK(preference_score(10, 0.5, 8) == doctest::Approx(0.9712).epsilon(1e-4));
  CHECK(std::abs(preference_score(10, 0.5, 8) - support::phi_oracle(3.0 / std::sqrt(2.5))) <= 1e-12);
  CHECK(std::abs(preference_score(12, 0.25, 0) - support::phi_oracle(-2.0)) <= 1e-12);
  CHECK(preference_score(12, 0.25, 0) == doctest::Approx(0.02275).epsilon(1e-3));
}

TEST_CASE("degenerate preference scores are exactly neutral") {
  for (std::size_t n = 0; n <= 20; ++n)
    for (std::size_t x = 0; x <= n; ++x) {
      CHECK(preference_score(n, 0.0, x) == 0.5);
      CHECK(preference_score(n, 1.0, x) == 0.5);
    }
  for (std::size_t n = 1; n <= 20; ++n)
    for (std::size_t d = 1; d <= 20; ++d)
      for (std::size_t num = 1; num < d; ++num) {
        const double p = static_cast<double>(num) / static_cast<double>(d);
        if ((n * num) % d == 0) CHECK(preference_score(n, p, n * num / d) == 0.5);
      }
}

TEST_CASE("preference strictly increases with the neighbor count") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> share(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    const double p = share(rng);
    for (std::size_t x = 0; x < n; ++x) {
      const double lo = preference_score(n, p, x), hi = preference_score(n, p, x + 1);
      CHECK(lo >= 0.0);
      CHECK(hi <= 1.0);
      if (hi < 1.0 && lo > 0.0) CHECK(hi > lo);
      CHECK(hi >= lo);
    }
  }
}

TEST_CASE("value distribution") {
  std::vector<std::optional<std::size_t>> values;
  for (int i = 0; i < 5; ++i) values.push_back(2);
  for (int i = 0; i < 3; ++i) values.push_back(1);
  for (int i = 0; i < 2; ++i) values.push_back(0);
  const auto ten = support::make_snapshot(1, 10, rows_of(values), {});
  const auto d = value_distribution(ten, kViews);
  CHECK(d.percentage[0] == std::vector<double>{0.2, 0.3, 0.5});
  CHECK(d.assigned[0] == 10);

  const auto same = support::make_snapshot(1, 4, rows_of({1, 1, 1, 1}), {});
  CHECK(value_distribution(same, kViews).percentage[0] == std::vector<double>{0.0, 1.0, 0.0});

  std::vector<std::optional<std::size_t>> many(200, std::optional<std::size_t>(0));
  for (int i = 0; i < 7; ++i) many[static_cast<std::size_t>(i) * 13] = 2;
  many[199] = std::nullopt;
  const auto big = support::make_snapshot(1, 200, rows_of(many), {});
  CHECK(value_distribution(big, kViews).percentage[0][2] == doctest::Approx(7.0 / 199.0));

  const auto none = support::make_snapshot(1, 3, rows_of({std::nullopt, std::nullopt, std::nullopt}), {});
  try {
    value_distribution(none, kViews);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("political_views") != std::string::npos);
  }
}

TEST_CASE("preference table cardinality, isolation and the neutral population") {
  const auto binary = support::make_schema({{"smoking", {"no", "yes"}}});
  const auto three = support::make_snapshot(1, 3, rows_of({0, 1, 0}), {{0, 1}});
  const auto table = compute_preferences(three, NetworkKind::behavioral, binary);
  std::size_t entries = 0;
  for (NodeIndex n = 0; n < 3; ++n) entries += table.preferences(n, 0).size();
  CHECK(entries == 6);
  CHECK(table.preferences(2, 0)[0] == 0.5);
  CHECK(table.preferences(2, 0)[1] == 0.5);
  CHECK(table.degree(2) == 0);

  // Population half and half; node 0 sees two of each among four neighbors.
  const auto balanced = support::make_snapshot(1, 10, rows_of({0, 0, 0, 1, 1, 0, 0, 1, 1, 1}),
                                               {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const auto neutral = compute_preferences(balanced, NetworkKind::behavioral, binary);
  CHECK(neutral.preferences(0, 0)[0] == 0.5);
  CHECK(neutral.preferences(0, 0)[1] == 0.5);
  CHECK(neutral.counted_neighbors(0, 0) == 4);
}

TEST_CASE("preference table equals a brute-force recomputation") {
  const auto schema = support::make_schema(
      {{"a", {"x", "y"}}, {"b", {"p", "q", "r"}}, {"c", {"u", "v", "w", "z"}}});
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    const auto s = random_snapshot(rng, 40, schema, 0.08, 0.15);
    for (auto kind : {NetworkKind::behavioral, NetworkKind::cognitive}) {
      const auto table = compute_preferences(s, kind, schema);
      const BruteForce oracle{s, schema, kind};
      const auto dist = value_distribution(s, schema);
      for (NodeIndex n = 0; n < s.node_count(); ++n)
        for (std::size_t a = 0; a < schema.size(); ++a) {
          CHECK(table.has(n, a) == s.attributes(n)[a].has_value());
          for (std::size_t v = 0; v < schema.at(a).size(); ++v) {
            const auto expected = oracle.preference(n, a, v);
            const auto got = table.preference(n, a, v);
            REQUIRE(got.has_value() == expected.has_value());
            if (!got) continue;
            CHECK(*got >= 0.0);
            CHECK(*got <= 1.0);
            CHECK(std::abs(*got - *expected) <= 1e-12);
            CHECK(std::abs(node_preference(s, kind, n, a, v, dist) - *expected) <= 1e-12);
          }
        }
    }
  }
}

TEST_CASE("average preference matrices") {
  const auto isolated = support::make_snapshot(1, 6, rows_of({0, 1, 2, 0, 1, 2}), {});
  const auto m = average_preference_matrix(compute_preferences(isolated, NetworkKind::behavioral, kViews), isolated,
                                           kViews, 0);
  for (const auto& row : m.mean)
    for (double v : row) CHECK(v == 0.5);

  // Node 0 holds conservative; all its neighbors are liberal.
  const auto star = support::make_snapshot(1, 8, rows_of({0, 2, 2, 2, 1, 1, 2, 1}), {{0, 1}, {0, 2}, {0, 3}});
  const auto sm = average_preference_matrix(compute_preferences(star, NetworkKind::behavioral, kViews), star, kViews, 0);
  CHECK(sm.holders[0] == 1);
  CHECK(std::max_element(sm.mean[0].begin(), sm.mean[0].end()) - sm.mean[0].begin() == 2);

  const auto sparse = support::make_snapshot(1, 4, rows_of({1, 1, 2, 2}), {});
  const auto empty_row =
      average_preference_matrix(compute_preferences(sparse, NetworkKind::behavioral, kViews), sparse, kViews, 0);
  CHECK_FALSE(empty_row.has_row(0));
  CHECK(empty_row.mean[0].empty());
  CHECK_THROWS_AS(average_preference_matrix(compute_preferences(sparse, NetworkKind::behavioral, kViews), sparse,
                                            kViews, 3),
                  Error);
}

TEST_CASE("matrices equal brute-force group means") {
  const auto schema = support::make_schema({{"a", {"x", "y", "z"}}, {"b", {"p", "q"}}});
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_snapshot(rng, 50, schema, 0.1, 0.1);
    const auto table = compute_preferences(s, NetworkKind::behavioral, schema);
    const auto dist = value_distribution(s, schema);
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const auto m = average_preference_matrix(table, s, schema, a);
      const auto k = schema.at(a).size();
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<NodeIndex> group;
        for (NodeIndex n = 0; n < s.node_count(); ++n)
          if (s.attributes(n)[a] == std::optional<std::size_t>(i)) group.push_back(n);
        CHECK(m.holders[i] == group.size());
        if (group.empty()) continue;
        for (std::size_t j = 0; j < k; ++j) {
          double sum = 0.0, ratio_sum = 0.0;
          std::size_t ratio_count = 0;
          for (auto n : group) {
            sum += *table.preference(n, a, j);
            const double expected = static_cast<double>(table.counted_neighbors(n, a)) * dist.percentage[a][j];
            if (expected > 0.0) {
              std::size_t x = 0;
              for (auto w : s.neighbors(NetworkKind::behavioral, n)) x += s.attributes(w)[a] == std::optional(j);
              ratio_sum += static_cast<double>(x) / expected;
              ++ratio_count;
            }
          }
          CHECK(std::abs(m.mean[i][j] - sum / static_cast<double>(group.size())) <= 1e-12);
          CHECK(m.mean[i][j] >= 0.0);
          CHECK(m.mean[i][j] <= 1.0);
          if (ratio_count == 0)
            CHECK_FALSE(m.ratio[i][j].has_value());
          else
            CHECK(std::abs(*m.ratio[i][j] - ratio_sum / static_cast<double>(ratio_count)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("trend classification") {
  CHECK(classify_trend(0.0) == Trend::unchanged);
  CHECK(classify_trend(0.2, 0.05) == Trend::increase);
  CHECK(classify_trend(-0.04, 0.05) == Trend::unchanged);
  CHECK(classify_trend(-0.2, 0.05) == Trend::decrease);
  CHECK(classify_trend(0.05, 0.05) == Trend::unchanged);

  PreferenceMatrix first{0, 1, {1, 1}, {{0.5, 0.5}, {0.2, 0.8}}, {}};
  PreferenceMatrix second{0, 2, {1, 1}, {{0.7, 0.3}, {0.2, 0.78}}, {}};
  const std::vector<PreferenceMatrix> pair{first, second};
  const auto marks = trend_marks(pair, 0.05);
  REQUIRE(marks.size() == 4);
  CHECK(marks[0].trend == Trend::increase);
  CHECK(marks[1].trend == Trend::decrease);
  CHECK(marks[2].trend == Trend::unchanged);
  CHECK(marks[3].trend == Trend::unchanged);
  CHECK(marks[0].from_semester == 1);
  CHECK(marks[0].to_semester == 2);

  auto other = second;
  other.attribute = 1;
  const std::vector<PreferenceMatrix> mismatched{first, other};
  CHECK_THROWS_AS(trend_marks(mismatched), Error);
  const std::vector<PreferenceMatrix> single{first};
  CHECK_THROWS_AS(trend_marks(single), Error);
}
