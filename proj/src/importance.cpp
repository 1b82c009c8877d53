#include "prefnet/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "prefnet/error.hpp"
#include "util.hpp"

namespace prefnet {

std::vector<double> normalized_weights(std::span<const double> coefficients) {
  double largest = 0.0;
  for (const double c : coefficients) {
    if (!std::isfinite(c)) throw Error(ErrorKind::invalid_argument, "coefficients must be finite");
    largest = std::max(largest, std::abs(c));
  }
  std::vector<double> weights(coefficients.size(), 0.0);
  if (largest == 0.0) return weights;
  for (std::size_t i = 0; i < coefficients.size(); ++i) weights[i] = std::abs(coefficients[i]) / largest;
  return weights;
}

std::vector<int> rank_weights(std::span<const double> weights) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  std::vector<int> ranks(weights.size(), 0);
  for (std::size_t position = 0; position < order.size(); ++position)
    ranks[order[position]] = static_cast<int>(position) + 1;
  return ranks;
}

ImportanceReport attribute_weights(const ml::Model& model, Task task, NetworkKind network) {
  if (model.kind != ml::ModelKind::linear_regression)
    throw Error(ErrorKind::invalid_argument, "importance weights need a linear regression model, got " +
                                                 std::string(ml::to_string(model.kind)));
  const auto& params = std::get<ml::LinearParams>(model.params);
  if (params.expanded)
    throw Error(ErrorKind::invalid_argument, "importance weights need a model on unexpanded features");
  const auto weights = normalized_weights(params.coefficients);
  const auto ranks = rank_weights(weights);
  ImportanceReport report;
  report.task = task;
  report.network = network;
  for (std::size_t i = 0; i < weights.size(); ++i)
    report.features.push_back({model.feature_names.at(i), params.coefficients[i], weights[i], ranks[i]});
  return report;
}

namespace {

std::string cell_label(Task task, NetworkKind network) {
  return std::string(to_string(task)) + "_" + std::string(to_string(network));
}

void check_same_features(std::span<const ImportanceReport> reports) {
  if (reports.empty()) throw Error(ErrorKind::invalid_argument, "no importance reports given");
  for (const auto& report : reports) {
    if (report.features.size() != reports.front().features.size())
      throw Error(ErrorKind::invalid_argument, "importance reports have different feature sets");
    for (std::size_t i = 0; i < report.features.size(); ++i)
      if (report.features[i].feature != reports.front().features[i].feature)
        throw Error(ErrorKind::invalid_argument, "importance reports have different feature sets");
  }
}

}  // namespace

RankingComparison compare_rankings(std::span<const ImportanceReport> reports, std::size_t top_k) {
  check_same_features(reports);
  if (top_k == 0) throw Error(ErrorKind::invalid_argument, "top_k must be at least 1");
  RankingComparison comparison;
  comparison.top_k = top_k;
  for (std::size_t c = 0; c < reports.size(); ++c) {
    auto features = reports[c].features;
    std::sort(features.begin(), features.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    RankingCell cell{reports[c].task, reports[c].network, {}};
    for (std::size_t i = 0; i < std::min(top_k, features.size()); ++i) {
      cell.top.push_back(features[i].feature);
      comparison.membership[features[i].feature].push_back(c);
    }
    comparison.cells.push_back(std::move(cell));
  }
  for (const auto& feature : comparison.cells.front().top)
    if (comparison.membership.at(feature).size() == comparison.cells.size()) comparison.shared_by_all.push_back(feature);
  return comparison;
}

namespace {

template <typename Cell>
std::string importance_csv(std::span<const ImportanceReport> reports, Cell cell) {
  check_same_features(reports);
  std::string out = "feature";
  for (const auto& report : reports) out += "," + cell_label(report.task, report.network);
  out += "\n";
  for (std::size_t i = 0; i < reports.front().features.size(); ++i) {
    out += detail::csv_field(reports.front().features[i].feature);
    for (const auto& report : reports) out += "," + cell(report.features[i]);
    out += "\n";
  }
  return out;
}

}  // namespace

std::string importance_weights_csv(std::span<const ImportanceReport> reports) {
  return importance_csv(reports, [](const FeatureImportance& f) { return detail::format_double(f.weight); });
}

std::string importance_ranks_csv(std::span<const ImportanceReport> reports) {
  return importance_csv(reports, [](const FeatureImportance& f) { return std::to_string(f.rank); });
}

std::string comparison_to_json(const RankingComparison& comparison) {
  nlohmann::ordered_json root;
  root["top_k"] = comparison.top_k;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& cell : comparison.cells)
    cells.push_back({{"task", to_string(cell.task)}, {"network", to_string(cell.network)}, {"top", cell.top}});
  root["cells"] = std::move(cells);
  auto membership = nlohmann::ordered_json::object();
  for (const auto& [feature, indices] : comparison.membership) {
    auto labels = nlohmann::ordered_json::array();
    for (const auto i : indices) labels.push_back(cell_label(comparison.cells[i].task, comparison.cells[i].network));
    membership[feature] = std::move(labels);
  }
  root["membership"] = std::move(membership);
  root["shared_by_all"] = comparison.shared_by_all;
  return root.dump(2) + "\n";
}

}  // namespace prefnet
