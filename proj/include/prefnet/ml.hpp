#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace prefnet::ml {

enum class ModelKind { linear_regression, linear_svm, knn, random_forest, naive_bayes };

inline constexpr std::array<ModelKind, 5> kAllModelKinds = {
    ModelKind::linear_regression, ModelKind::linear_svm, ModelKind::knn,
    ModelKind::random_forest, ModelKind::naive_bayes};

std::string_view to_string(ModelKind kind);
/// Accepts the canonical names and the short CLI names (regression, svm, knn, forest, bayes).
ModelKind parse_model_kind(std::string_view text);

/// Dense feature rows with 0/1 labels.
struct Samples {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> x;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
  std::size_t dims() const { return feature_names.size(); }
  std::size_t positives() const;
  void add(std::vector<double> row, bool positive);
};

struct SplitSpec {
  double validation_fraction = 0.20;
  std::uint64_t seed = 1;
};

struct Split {
  Samples train;
  Samples validation;
};

/// Stratified, seeded train/validation split. Requires >= 10 rows and both classes.
Split split(const Samples& samples, const SplitSpec& spec);

/// Original features, then squares and pairwise products (i <= j).
std::vector<double> expand_degree2(std::span<const double> features);
std::vector<std::string> expand_degree2_names(const std::vector<std::string>& names);

struct LeastSquaresFit {
  std::vector<double> coefficients;
  double intercept = 0.0;
};

/// Ridge-regularized least squares with an unpenalized intercept, solved
/// through the normal equations.
LeastSquaresFit fit_least_squares(const std::vector<std::vector<double>>& x,
                                  std::span<const double> y, double ridge);

struct LinearParams {
  std::vector<double> coefficients;
  double intercept = 0.0;
  bool expanded = false;
};

struct SvmParams {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;
  double positive_weight = 1.0;
  bool expanded = false;
};

struct KnnParams {
  int k = 1;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double positive_fraction = 0.0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double leaf_fraction(std::span<const double> x) const;
  bool votes_positive(std::span<const double> x) const { return leaf_fraction(x) >= 0.5; }
};

struct ForestParams {
  std::vector<DecisionTree> trees;
};

struct BayesParams {
  double prior_positive = 0.5;
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> variance;
};

using ModelParams = std::variant<LinearParams, SvmParams, KnnParams, ForestParams, BayesParams>;

struct Prediction {
  bool positive = false;
  double score = 0.0;
};

/// A trained classifier. Label is `score >= threshold`; the score is the
/// regression output, the SVM margin, or the positive vote fraction.
struct Model {
  ModelKind kind = ModelKind::linear_regression;
  std::vector<std::string> feature_names;
  double threshold = 0.5;
  ModelParams params;

  double score(std::span<const double> features) const;
  Prediction predict(std::span<const double> features) const;
};

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  std::optional<double> threshold;  // empty for the all-negative start point
};

inline double selection_score(double recall, double accuracy) { return 5.0 * recall + accuracy; }

struct EvaluationReport {
  Confusion confusion;
  double accuracy = 0.0;
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> selection_score;
  std::vector<RocPoint> roc;
  std::optional<double> auc;
};

Confusion count_confusion(std::span<const double> scores, std::span<const int> labels,
                          double threshold);
/// Metrics only; no ROC.
EvaluationReport metrics_from(const Confusion& confusion);
/// Sweeps every distinct score. Empty when either class is missing.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
std::optional<double> roc_auc(const std::vector<RocPoint>& roc);

EvaluationReport evaluate_scores(std::span<const double> scores, std::span<const int> labels,
                                 double threshold);
EvaluationReport evaluate(const Model& model, const Samples& test);

struct TrainOptions {
  std::uint64_t seed = 1;
  /// Negatives kept per positive in the fitting rows; <= 0 keeps everything.
  double negative_ratio = 10.0;
  /// Let the validation sweep try degree-2 features for regression and SVM.
  bool allow_expansion = true;
  double ridge = 1e-8;
};

struct SweepPoint {
  std::string setting;
  double accuracy = 0.0;
  std::optional<double> recall;
  std::optional<double> selection_score;
};

struct TrainResult {
  Model model;
  EvaluationReport validation;
  std::vector<SweepPoint> sweep;
};

TrainResult train(ModelKind kind, const Samples& train, const Samples& validation,
                  const TrainOptions& options);

/// Trains each kind on its own seed stream; results come back in input order
/// regardless of `threads`.
std::vector<TrainResult> train_all(std::span<const ModelKind> kinds, const Samples& train,
                                   const Samples& validation, const TrainOptions& options,
                                   unsigned threads);

/// Highest selection score, then higher accuracy, then earlier kind order.
ModelKind select_model(std::span<const std::pair<ModelKind, EvaluationReport>> reports);

std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);
std::string report_to_json(const EvaluationReport& report);
std::string roc_to_csv(const std::vector<RocPoint>& roc);

}  // namespace prefnet::ml
