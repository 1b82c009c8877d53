#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "prefnet/error.hpp"
#include "prefnet/ml.hpp"
#include "util.hpp"

namespace prefnet::ml {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear_regression: return "linear_regression";
    case ModelKind::linear_svm: return "linear_svm";
    case ModelKind::knn: return "knn";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::naive_bayes: return "naive_bayes";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "linear_regression" || text == "regression") return ModelKind::linear_regression;
  if (text == "linear_svm" || text == "svm") return ModelKind::linear_svm;
  if (text == "knn") return ModelKind::knn;
  if (text == "random_forest" || text == "forest") return ModelKind::random_forest;
  if (text == "naive_bayes" || text == "bayes") return ModelKind::naive_bayes;
  throw Error(ErrorKind::invalid_argument,
              "unknown classifier '" + std::string(text) + "' (regression|svm|knn|forest|bayes)");
}

std::size_t Samples::positives() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
}

void Samples::add(std::vector<double> row, bool positive) {
  if (row.size() != feature_names.size())
    throw Error(ErrorKind::invalid_argument, "sample has " + std::to_string(row.size()) + " features, expected " +
                                                 std::to_string(feature_names.size()));
  x.push_back(std::move(row));
  y.push_back(positive ? 1 : 0);
}

Split split(const Samples& samples, const SplitSpec& spec) {
  if (!(spec.validation_fraction > 0.0 && spec.validation_fraction < 1.0))
    throw Error(ErrorKind::invalid_argument, "validation fraction must lie strictly between 0 and 1");
  if (samples.size() < 10) throw Error(ErrorKind::invalid_argument, "split needs at least 10 rows");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) by_class[samples.y[i] != 0].push_back(i);
  if (by_class[0].empty() || by_class[1].empty())
    throw Error(ErrorKind::invalid_argument, "split needs both classes");

  // Largest-remainder allocation of the validation rows across classes.
  const auto total = static_cast<std::size_t>(std::llround(spec.validation_fraction * static_cast<double>(samples.size())));
  std::array<std::size_t, 2> quota{};
  std::array<double, 2> remainder{};
  for (int c = 0; c < 2; ++c) {
    const double exact = spec.validation_fraction * static_cast<double>(by_class[c].size());
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - std::floor(exact);
  }
  while (quota[0] + quota[1] < total) {
    const int c = remainder[1] > remainder[0] ? 1 : 0;
    ++quota[c];
    remainder[c] = -1.0;
  }
  for (int c = 0; c < 2; ++c) {
    const auto n = by_class[c].size();
    if (n >= 2) quota[c] = std::clamp<std::size_t>(quota[c], 1, n - 1);
    else quota[c] = 0;
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<bool> in_validation(samples.size(), false);
  for (int c = 0; c < 2; ++c) {
    auto indices = by_class[c];
    std::shuffle(indices.begin(), indices.end(), rng);
    for (std::size_t i = 0; i < quota[c]; ++i) in_validation[indices[i]] = true;
  }
  Split out;
  out.train.feature_names = samples.feature_names;
  out.validation.feature_names = samples.feature_names;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& target = in_validation[i] ? out.validation : out.train;
    target.x.push_back(samples.x[i]);
    target.y.push_back(samples.y[i]);
  }
  return out;
}

std::vector<double> expand_degree2(std::span<const double> features) {
  std::vector<double> out(features.begin(), features.end());
  out.reserve(features.size() * (features.size() + 3) / 2);
  for (std::size_t i = 0; i < features.size(); ++i)
    for (std::size_t j = i; j < features.size(); ++j) out.push_back(features[i] * features[j]);
  return out;
}

std::vector<std::string> expand_degree2_names(const std::vector<std::string>& names) {
  auto out = names;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i; j < names.size(); ++j) out.push_back(names[i] + "*" + names[j]);
  return out;
}

LeastSquaresFit fit_least_squares(const std::vector<std::vector<double>>& x, std::span<const double> y,
                                  double ridge) {
  if (x.empty() || x.size() != y.size())
    throw Error(ErrorKind::invalid_argument, "least squares needs matching, non-empty rows and targets");
  if (!(ridge >= 0.0)) throw Error(ErrorKind::invalid_argument, "ridge must be non-negative");
  const auto n = x.size();
  const auto d = x.front().size();
  Eigen::MatrixXd design(n, d);
  Eigen::VectorXd target(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != d) throw Error(ErrorKind::invalid_argument, "ragged design matrix");
    for (std::size_t j = 0; j < d; ++j) design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[i][j];
    target(static_cast<Eigen::Index>(i)) = y[i];
  }
  // Centering removes the intercept from the system so the ridge term never touches it.
  const Eigen::RowVectorXd mean = design.colwise().mean();
  const double y_mean = target.mean();
  design.rowwise() -= mean;
  target.array() -= y_mean;

  LeastSquaresFit fit;
  fit.coefficients.assign(d, 0.0);
  if (d > 0) {
    Eigen::MatrixXd gram = design.transpose() * design;
    gram.diagonal().array() += ridge;
    const Eigen::VectorXd rhs = design.transpose() * target;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorKind::domain, "design matrix is numerically singular; increase the ridge term");
    const Eigen::VectorXd w = llt.solve(rhs);
    if (!w.allFinite()) throw Error(ErrorKind::domain, "least squares solution is not finite");
    for (std::size_t j = 0; j < d; ++j) fit.coefficients[j] = w(static_cast<Eigen::Index>(j));
    fit.intercept = y_mean - mean.dot(w);
  } else {
    fit.intercept = y_mean;
  }
  return fit;
}

double DecisionTree::leaf_fraction(std::span<const double> x) const {
  if (nodes.empty()) throw Error(ErrorKind::internal, "empty decision tree");
  std::size_t at = 0;
  while (nodes[at].feature >= 0) {
    const auto& node = nodes[at];
    at = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
  }
  return nodes[at].positive_fraction;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double linear_score(const std::vector<double>& w, double bias, bool expanded, std::span<const double> x) {
  if (!expanded) return dot(w, x) + bias;
  const auto z = expand_degree2(x);
  return dot(w, z) + bias;
}

}  // namespace

double Model::score(std::span<const double> features) const {
  if (features.size() != feature_names.size())
    throw Error(ErrorKind::invalid_argument, "feature vector has " + std::to_string(features.size()) +
                                                 " entries, model expects " + std::to_string(feature_names.size()));
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearParams>) {
          return linear_score(p.coefficients, p.intercept, p.expanded, features);
        } else if constexpr (std::is_same_v<T, SvmParams>) {
          return linear_score(p.weights, p.bias, p.expanded, features);
        } else if constexpr (std::is_same_v<T, KnnParams>) {
          const auto k = static_cast<std::size_t>(p.k);
          if (p.rows.empty() || k == 0) throw Error(ErrorKind::internal, "knn model has no rows");
          std::vector<std::pair<double, std::size_t>> dist(p.rows.size());
          for (std::size_t i = 0; i < p.rows.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < features.size(); ++j) {
              const double diff = p.rows[i][j] - features[j];
              s += diff * diff;
            }
            dist[i] = {s, i};
          }
          const auto used = std::min(k, dist.size());
          std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(used - 1), dist.end());
          std::size_t positive = 0;
          for (std::size_t i = 0; i < used; ++i) positive += p.labels[dist[i].second] != 0;
          return static_cast<double>(positive) / static_cast<double>(used);
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          if (p.trees.empty()) throw Error(ErrorKind::internal, "forest has no trees");
          std::size_t votes = 0;
          for (const auto& tree : p.trees) votes += tree.votes_positive(features);
          return static_cast<double>(votes) / static_cast<double>(p.trees.size());
        } else {
          double log_odds = std::log(p.prior_positive) - std::log1p(-p.prior_positive);
          for (std::size_t j = 0; j < features.size(); ++j) {
            for (int c = 0; c < 2; ++c) {
              const double var = p.variance[c][j];
              const double diff = features[j] - p.mean[c][j];
              const double ll = -0.5 * (std::log(2.0 * M_PI * var) + diff * diff / var);
              log_odds += c == 1 ? ll : -ll;
            }
          }
          return 1.0 / (1.0 + std::exp(-log_odds));
        }
      },
      params);
}

Prediction Model::predict(std::span<const double> features) const {
  const double s = score(features);
  return {s >= threshold, s};
}

Confusion count_confusion(std::span<const double> scores, std::span<const int> labels, double threshold) {
  if (scores.size() != labels.size()) throw Error(ErrorKind::invalid_argument, "scores and labels differ in length");
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] != 0;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

EvaluationReport metrics_from(const Confusion& confusion) {
  if (confusion.total() == 0) throw Error(ErrorKind::invalid_argument, "cannot evaluate an empty set");
  EvaluationReport report;
  report.confusion = confusion;
  report.accuracy = static_cast<double>(confusion.tp + confusion.tn) / static_cast<double>(confusion.total());
  if (confusion.tp + confusion.fn > 0)
    report.recall = static_cast<double>(confusion.tp) / static_cast<double>(confusion.tp + confusion.fn);
  if (confusion.tp + confusion.fp > 0)
    report.precision = static_cast<double>(confusion.tp) / static_cast<double>(confusion.tp + confusion.fp);
  if (report.recall) report.selection_score = ml::selection_score(*report.recall, report.accuracy);
  return report;
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorKind::invalid_argument, "scores and labels differ in length");
  const auto positives = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; }));
  const auto negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) return {};
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<RocPoint> roc{{0.0, 0.0, std::nullopt}};
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] != 0 ? tp : fp) += 1;
      ++i;
    }
    roc.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                   static_cast<double>(tp) / static_cast<double>(positives), s});
  }
  return roc;
}

std::optional<double> roc_auc(const std::vector<RocPoint>& roc) {
  if (roc.size() < 2) return std::nullopt;
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i)
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
  return area;
}

EvaluationReport evaluate_scores(std::span<const double> scores, std::span<const int> labels, double threshold) {
  auto report = metrics_from(count_confusion(scores, labels, threshold));
  report.roc = roc_curve(scores, labels);
  report.auc = roc_auc(report.roc);
  return report;
}

EvaluationReport evaluate(const Model& model, const Samples& test) {
  if (test.dims() != model.feature_names.size() || test.feature_names != model.feature_names)
    throw Error(ErrorKind::invalid_argument, "test features do not match the model's feature names");
  std::vector<double> scores;
  scores.reserve(test.size());
  for (const auto& row : test.x) scores.push_back(model.score(row));
  return evaluate_scores(scores, test.y, model.threshold);
}

ModelKind select_model(std::span<const std::pair<ModelKind, EvaluationReport>> reports) {
  if (reports.empty()) throw Error(ErrorKind::invalid_argument, "no models to select from");
  const auto rank = [](ModelKind kind) {
    return std::find(kAllModelKinds.begin(), kAllModelKinds.end(), kind) - kAllModelKinds.begin();
  };
  const auto better = [&](const std::pair<ModelKind, EvaluationReport>& a, const std::pair<ModelKind, EvaluationReport>& b) {
    const double sa = a.second.selection_score.value_or(-1.0);
    const double sb = b.second.selection_score.value_or(-1.0);
    if (sa != sb) return sa > sb;
    if (a.second.accuracy != b.second.accuracy) return a.second.accuracy > b.second.accuracy;
    return rank(a.first) < rank(b.first);
  };
  const auto* best = &reports.front();
  for (const auto& entry : reports)
    if (better(entry, *best)) best = &entry;
  return best->first;
}

namespace {

ordered_json params_json(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> ordered_json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearParams>) {
          return {{"coefficients", p.coefficients}, {"intercept", p.intercept}, {"expanded", p.expanded}};
        } else if constexpr (std::is_same_v<T, SvmParams>) {
          return {{"weights", p.weights},
                  {"bias", p.bias},
                  {"lambda", p.lambda},
                  {"positive_weight", p.positive_weight},
                  {"expanded", p.expanded}};
        } else if constexpr (std::is_same_v<T, KnnParams>) {
          return {{"k", p.k}, {"rows", p.rows}, {"labels", p.labels}};
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          ordered_json trees = ordered_json::array();
          for (const auto& tree : p.trees) {
            ordered_json nodes = ordered_json::array();
            for (const auto& n : tree.nodes)
              nodes.push_back(ordered_json::array({n.feature, n.threshold, n.left, n.right, n.positive_fraction}));
            trees.push_back(std::move(nodes));
          }
          return {{"trees", std::move(trees)}};
        } else {
          return {{"prior_positive", p.prior_positive},
                  {"mean", {p.mean[0], p.mean[1]}},
                  {"variance", {p.variance[0], p.variance[1]}}};
        }
      },
      params);
}

ModelParams params_from(ModelKind kind, const ordered_json& j, std::size_t dims) {
  const auto width = [&](const std::vector<double>& v, bool expanded, const char* what) {
    const auto want = expanded ? dims * (dims + 3) / 2 : dims;
    if (v.size() != want) throw Error(ErrorKind::validation, std::string("model ") + what + " has the wrong length");
  };
  switch (kind) {
    case ModelKind::linear_regression: {
      LinearParams p{j.at("coefficients").get<std::vector<double>>(), j.at("intercept").get<double>(),
                     j.at("expanded").get<bool>()};
      width(p.coefficients, p.expanded, "coefficients");
      return p;
    }
    case ModelKind::linear_svm: {
      SvmParams p{j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(), j.at("lambda").get<double>(),
                  j.at("positive_weight").get<double>(), j.at("expanded").get<bool>()};
      width(p.weights, p.expanded, "weights");
      return p;
    }
    case ModelKind::knn: {
      KnnParams p{j.at("k").get<int>(), j.at("rows").get<std::vector<std::vector<double>>>(),
                  j.at("labels").get<std::vector<int>>()};
      if (p.k < 1 || p.rows.empty() || p.rows.size() != p.labels.size())
        throw Error(ErrorKind::validation, "knn model is inconsistent");
      for (const auto& row : p.rows)
        if (row.size() != dims) throw Error(ErrorKind::validation, "knn row has the wrong length");
      return p;
    }
    case ModelKind::random_forest: {
      ForestParams p;
      for (const auto& tree_json : j.at("trees")) {
        DecisionTree tree;
        for (const auto& n : tree_json)
          tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(), n.at(3).get<int>(),
                                n.at(4).get<double>()});
        const auto count = static_cast<int>(tree.nodes.size());
        if (count == 0) throw Error(ErrorKind::validation, "forest contains an empty tree");
        for (const auto& n : tree.nodes)
          if (n.feature >= static_cast<int>(dims) ||
              (n.feature >= 0 && (n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count)))
            throw Error(ErrorKind::validation, "forest tree references an invalid node");
        p.trees.push_back(std::move(tree));
      }
      if (p.trees.empty()) throw Error(ErrorKind::validation, "forest has no trees");
      return p;
    }
    case ModelKind::naive_bayes: {
      BayesParams p;
      p.prior_positive = j.at("prior_positive").get<double>();
      for (int c = 0; c < 2; ++c) {
        p.mean[c] = j.at("mean").at(c).get<std::vector<double>>();
        p.variance[c] = j.at("variance").at(c).get<std::vector<double>>();
        width(p.mean[c], false, "means");
        width(p.variance[c], false, "variances");
      }
      return p;
    }
  }
  throw Error(ErrorKind::internal, "unhandled model kind");
}

}  // namespace

std::string model_to_json(const Model& model) {
  ordered_json root;
  root["format"] = "prefnet.model/1";
  root["kind"] = to_string(model.kind);
  root["feature_names"] = model.feature_names;
  root["threshold"] = model.threshold;
  root["params"] = params_json(model.params);
  return root.dump() + "\n";
}

Model model_from_json(std::string_view text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("model: ") + e.what());
  }
  if (!root.is_object() || root.value("format", "") != "prefnet.model/1")
    throw Error(ErrorKind::parse, "model: expected format 'prefnet.model/1'");
  try {
    Model model;
    model.kind = parse_model_kind(root.at("kind").get<std::string>());
    model.feature_names = root.at("feature_names").get<std::vector<std::string>>();
    model.threshold = root.at("threshold").get<double>();
    model.params = params_from(model.kind, root.at("params"), model.feature_names.size());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("model: ") + e.what());
  }
}

namespace {

ordered_json optional_json(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  ordered_json root;
  root["confusion"] = {{"tp", report.confusion.tp},
                       {"fp", report.confusion.fp},
                       {"tn", report.confusion.tn},
                       {"fn", report.confusion.fn}};
  root["accuracy"] = report.accuracy;
  root["recall"] = optional_json(report.recall);
  root["precision"] = optional_json(report.precision);
  root["selection_score"] = optional_json(report.selection_score);
  root["auc"] = optional_json(report.auc);
  root["roc_points"] = report.roc.size();
  return root.dump(2) + "\n";
}

std::string roc_to_csv(const std::vector<RocPoint>& roc) {
  std::string out = "fpr,tpr,threshold\n";
  for (const auto& point : roc)
    out += detail::format_double(point.fpr) + "," + detail::format_double(point.tpr) + "," +
           detail::format_optional(point.threshold) + "\n";
  return out;
}

}  // namespace prefnet::ml
