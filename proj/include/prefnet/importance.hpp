#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "prefnet/features.hpp"
#include "prefnet/ml.hpp"

namespace prefnet {

struct FeatureImportance {
  std::string feature;
  double coefficient = 0.0;
  double weight = 0.0;  // |coefficient| / max |coefficient|
  int rank = 0;         // 1 = most important
};

struct ImportanceReport {
  Task task = Task::formation;
  NetworkKind network = NetworkKind::behavioral;
  std::vector<FeatureImportance> features;  // in model feature order
};

/// Max-abs normalized magnitudes. An all-zero input yields all-zero weights.
std::vector<double> normalized_weights(std::span<const double> coefficients);
/// Rank by descending weight, ties by position.
std::vector<int> rank_weights(std::span<const double> weights);

/// Requires a linear regression model on unexpanded features.
ImportanceReport attribute_weights(const ml::Model& model, Task task, NetworkKind network);

struct RankingCell {
  Task task = Task::formation;
  NetworkKind network = NetworkKind::behavioral;
  std::vector<std::string> top;  // best first
};

struct RankingComparison {
  std::size_t top_k = 5;
  std::vector<RankingCell> cells;
  /// For every feature in any top-k list, the indices of the cells listing it.
  std::map<std::string, std::vector<std::size_t>> membership;
  /// Features in every cell's top-k, in first-cell order.
  std::vector<std::string> shared_by_all;
};

RankingComparison compare_rankings(std::span<const ImportanceReport> reports, std::size_t top_k = 5);

/// One row per feature, one column per report: normalized weights or ranks.
std::string importance_weights_csv(std::span<const ImportanceReport> reports);
std::string importance_ranks_csv(std::span<const ImportanceReport> reports);
std::string comparison_to_json(const RankingComparison& comparison);

}  // namespace prefnet
