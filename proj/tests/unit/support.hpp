#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "prefnet/graph.hpp"
#include "prefnet/ingest.hpp"
#include "prefnet/schema.hpp"
#include "prefnet/synthgen.hpp"

namespace support {

using prefnet::NodeIndex;
using prefnet::NodePair;

/// Normal CDF in 50-digit arithmetic.
inline double phi_oracle(double z) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big x = big(z) / boost::multiprecision::sqrt(big(2));
  return static_cast<double>(big(0.5) * boost::math::erfc(-x));
}

inline double preference_oracle(std::size_t n, double p, std::size_t x) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big mu = big(n) * big(p);
  const big sigma = boost::multiprecision::sqrt(mu * (big(1) - big(p)));
  const big z = (big(x) - mu) / sigma;
  return static_cast<double>(big(0.5) * boost::math::erfc(-z / boost::multiprecision::sqrt(big(2))));
}

inline prefnet::AttributeSchema make_schema(const std::vector<std::pair<std::string, std::vector<std::string>>>& spec) {
  std::vector<prefnet::Attribute> attributes;
  for (const auto& [name, values] : spec) attributes.push_back({name, values});
  return prefnet::AttributeSchema(std::move(attributes));
}

inline std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("n" + std::to_string(100 + i));
  return out;
}

struct Edge {
  NodeIndex a;
  NodeIndex b;
  std::uint64_t weight = 1;
};

inline prefnet::Snapshot make_snapshot(int semester, std::size_t n, std::vector<prefnet::AttributeRow> attributes,
                                       const std::vector<Edge>& behavioral,
                                       const std::vector<Edge>& cognitive = {}) {
  if (attributes.empty()) attributes.assign(n, prefnet::AttributeRow{});
  std::map<NodePair, std::uint64_t> b;
  for (const auto& e : behavioral) b[NodePair::of(e.a, e.b)] = e.weight;
  std::set<NodePair> c;
  for (const auto& e : cognitive) c.insert(NodePair::of(e.a, e.b));
  return prefnet::Snapshot(semester, ids(n), std::move(attributes), std::move(b), std::move(c));
}

inline std::vector<Edge> random_edges(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<Edge> out;
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j = i + 1; j < n; ++j)
      if (coin(rng)) out.push_back({i, j, 1 + rng() % 50});
  return out;
}

/// All-pairs hop distances; unreachable pairs hold a large sentinel.
inline std::vector<std::vector<int>> floyd_warshall(std::size_t n, const std::vector<Edge>& edges) {
  constexpr int kFar = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kFar));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) d[e.a][e.b] = d[e.b][e.a] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline prefnet::SnapshotSeries ingest_generated(const prefnet::GeneratedData& data,
                                               prefnet::IngestWarnings* warnings = nullptr) {
  const auto schema = prefnet::parse_schema_text(data.schema_json);
  const auto events = prefnet::parse_events_text(data.events_csv, schema.calendar);
  const auto nominations = prefnet::parse_nominations_text(data.nominations_csv, schema.calendar);
  const auto attributes = prefnet::parse_attributes_text(data.attributes_csv, schema);
  return prefnet::build_snapshots(events, nominations, attributes, schema, {}, warnings);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("prefnet_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace support
