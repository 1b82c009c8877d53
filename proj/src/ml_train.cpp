#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>

#include "prefnet/error.hpp"
#include "prefnet/ml.hpp"
#include "util.hpp"

namespace prefnet::ml {

namespace {

constexpr std::array<double, 4> kSvmLambdas = {1e-1, 1e-2, 1e-3, 1e-4};
constexpr int kMaxK = 25;
constexpr std::array<std::size_t, 3> kTreeCounts = {10, 50, 100};
constexpr std::size_t kMinLeaf = 2;

std::size_t kind_index(ModelKind kind) {
  return static_cast<std::size_t>(std::find(kAllModelKinds.begin(), kAllModelKinds.end(), kind) - kAllModelKinds.begin());
}

/// Keeps every positive and at most `ratio` negatives per positive, in original order.
Samples downsample(const Samples& train, double ratio, std::uint64_t seed) {
  const auto positives = train.positives();
  const auto negatives = train.size() - positives;
  if (ratio <= 0.0) return train;
  const auto keep = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(positives)));
  if (negatives <= keep) return train;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < train.size(); ++i)
    if (train.y[i] == 0) neg.push_back(i);
  std::mt19937_64 rng(seed);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<bool> kept(train.size(), false);
  for (std::size_t i = 0; i < train.size(); ++i) kept[i] = train.y[i] != 0;
  for (std::size_t i = 0; i < keep; ++i) kept[neg[i]] = true;
  Samples out;
  out.feature_names = train.feature_names;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!kept[i]) continue;
    out.x.push_back(train.x[i]);
    out.y.push_back(train.y[i]);
  }
  return out;
}

std::vector<std::vector<double>> expand_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(expand_degree2(row));
  return out;
}

/// Strict improvement on selection score, then on accuracy.
bool improves(const EvaluationReport& candidate, const EvaluationReport& incumbent) {
  const double a = candidate.selection_score.value_or(-1.0);
  const double b = incumbent.selection_score.value_or(-1.0);
  if (a != b) return a > b;
  return candidate.accuracy > incumbent.accuracy;
}

SweepPoint sweep_point(std::string setting, const EvaluationReport& report) {
  return {std::move(setting), report.accuracy, report.recall, report.selection_score};
}

std::string setting_number(double value) { return detail::format_double(value); }

struct Choice {
  double threshold = 0.0;
  EvaluationReport report;
};

/// Best threshold for `score >= t` over midpoints of the distinct scores, clamped to [0, 1].
Choice sweep_threshold(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> candidates;
  if (!sorted.empty()) candidates.push_back(sorted.front());
  for (std::size_t i = 1; i < sorted.size(); ++i) candidates.push_back((sorted[i - 1] + sorted[i]) / 2.0);
  if (!sorted.empty()) candidates.push_back(std::nextafter(sorted.back(), INFINITY));
  for (auto& t : candidates) t = std::clamp(t, 0.0, 1.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.empty()) candidates.push_back(0.5);

  // Scores sorted ascending with suffix counts make each candidate O(log n).
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> ascending(scores.size());
  std::vector<std::size_t> suffix_pos(scores.size() + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) ascending[i] = scores[order[i]];
  for (std::size_t i = order.size(); i-- > 0;) suffix_pos[i] = suffix_pos[i + 1] + (labels[order[i]] != 0);
  const auto positives = suffix_pos[0];
  const auto negatives = scores.size() - positives;

  Choice best;
  bool first = true;
  for (const double t : candidates) {
    const auto at = static_cast<std::size_t>(std::lower_bound(ascending.begin(), ascending.end(), t) - ascending.begin());
    Confusion c;
    c.tp = suffix_pos[at];
    c.fp = (scores.size() - at) - c.tp;
    c.fn = positives - c.tp;
    c.tn = negatives - c.fp;
    auto report = metrics_from(c);
    if (first || improves(report, best.report)) {
      best = {t, std::move(report)};
      first = false;
    }
  }
  return best;
}

std::vector<double> scores_of(const Model& model, const Samples& samples) {
  std::vector<double> scores;
  scores.reserve(samples.size());
  for (const auto& row : samples.x) scores.push_back(model.score(row));
  return scores;
}

TrainResult train_regression(const Samples& fit, const Samples& validation, const TrainOptions& options) {
  TrainResult result;
  bool have = false;
  std::vector<double> targets(fit.y.begin(), fit.y.end());
  for (const bool expanded : {false, true}) {
    if (expanded && !options.allow_expansion) continue;
    const auto ls = fit_least_squares(expanded ? expand_rows(fit.x) : fit.x, targets, options.ridge);
    Model model;
    model.kind = ModelKind::linear_regression;
    model.feature_names = fit.feature_names;
    model.params = LinearParams{ls.coefficients, ls.intercept, expanded};
    const auto choice = sweep_threshold(scores_of(model, validation), validation.y);
    model.threshold = choice.threshold;
    result.sweep.push_back(sweep_point(
        std::string("degree=") + (expanded ? "2" : "1") + " threshold=" + setting_number(choice.threshold),
        choice.report));
    if (!have || improves(choice.report, result.validation)) {
      result.model = std::move(model);
      result.validation = choice.report;
      have = true;
    }
  }
  return result;
}

SvmParams pegasos(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double lambda,
                  bool balanced, std::uint64_t seed) {
  const auto n = x.size();
  const auto d = x.front().size();
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < n; ++i) (y[i] != 0 ? pos : neg).push_back(i);
  const double positive_weight = balanced ? static_cast<double>(neg.size()) / static_cast<double>(pos.size()) : 1.0;
  // Weighted sampling: pick a class in proportion to its total weight, then a row uniformly.
  const double positive_mass = positive_weight * static_cast<double>(pos.size());
  const double p_positive = positive_mass / (positive_mass + static_cast<double>(neg.size()));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t iterations = std::clamp<std::size_t>(20 * n, 50000, 400000);
  const double radius = 1.0 / std::sqrt(lambda);
  std::vector<double> w(d + 1, 0.0);  // last entry is the bias on a constant-1 feature
  std::vector<double> avg(d + 1, 0.0);
  std::size_t averaged = 0;
  for (std::size_t t = 1; t <= iterations; ++t) {
    const auto& cls = unit(rng) < p_positive ? pos : neg;
    const auto i = cls[static_cast<std::size_t>(unit(rng) * static_cast<double>(cls.size())) % cls.size()];
    const double label = y[i] != 0 ? 1.0 : -1.0;
    const double eta = 1.0 / (lambda * static_cast<double>(t));
    double margin = w[d];
    for (std::size_t j = 0; j < d; ++j) margin += w[j] * x[i][j];
    margin *= label;
    const double shrink = 1.0 - eta * lambda;
    for (auto& v : w) v *= shrink;
    if (margin < 1.0) {
      for (std::size_t j = 0; j < d; ++j) w[j] += eta * label * x[i][j];
      w[d] += eta * label;
    }
    double norm = 0.0;
    for (const double v : w) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > radius)
      for (auto& v : w) v *= radius / norm;
    if (t > iterations / 2) {
      for (std::size_t j = 0; j <= d; ++j) avg[j] += w[j];
      ++averaged;
    }
  }
  for (auto& v : avg) v /= static_cast<double>(averaged);
  SvmParams params;
  params.bias = avg[d];
  avg.pop_back();
  params.weights = std::move(avg);
  params.lambda = lambda;
  params.positive_weight = positive_weight;
  return params;
}

TrainResult train_svm(const Samples& fit, const Samples& validation, const TrainOptions& options,
                      std::uint64_t seed) {
  TrainResult result;
  bool have = false;
  std::uint64_t config = 0;
  for (const bool expanded : {false, true}) {
    if (expanded && !options.allow_expansion) continue;
    const auto rows = expanded ? expand_rows(fit.x) : fit.x;
    for (const bool balanced : {false, true}) {
      for (const double lambda : kSvmLambdas) {
        Model model;
        model.kind = ModelKind::linear_svm;
        model.feature_names = fit.feature_names;
        model.threshold = 0.0;
        auto params = pegasos(rows, fit.y, lambda, balanced, detail::mix_seed(seed, 100 + config++));
        params.expanded = expanded;
        model.params = std::move(params);
        const auto report = metrics_from(count_confusion(scores_of(model, validation), validation.y, 0.0));
        result.sweep.push_back(sweep_point(std::string("degree=") + (expanded ? "2" : "1") + " lambda=" +
                                               setting_number(lambda) + " weight=" + (balanced ? "balanced" : "1"),
                                           report));
        if (!have || improves(report, result.validation)) {
          result.model = std::move(model);
          result.validation = report;
          have = true;
        }
      }
    }
  }
  return result;
}

TrainResult train_knn(const Samples& fit, const Samples& validation) {
  const auto n = fit.size();
  const auto k_cap = std::min<std::size_t>(kMaxK, n);
  // Positive counts among the j nearest fitting rows, per validation row.
  std::vector<std::vector<std::size_t>> nearest_pos(validation.size(), std::vector<std::size_t>(k_cap + 1, 0));
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t r = 0; r < validation.size(); ++r) {
    const auto& q = validation.x[r];
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double diff = fit.x[i][j] - q[j];
        s += diff * diff;
      }
      dist[i] = {s, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_cap), dist.end());
    for (std::size_t j = 0; j < k_cap; ++j) nearest_pos[r][j + 1] = nearest_pos[r][j] + (fit.y[dist[j].second] != 0);
  }

  TrainResult result;
  bool have = false;
  for (std::size_t k = 1; k <= k_cap; k += 2) {
    std::vector<double> scores(validation.size());
    for (std::size_t r = 0; r < validation.size(); ++r)
      scores[r] = static_cast<double>(nearest_pos[r][k]) / static_cast<double>(k);
    // Vote thresholds from a simple majority down to a single vote.
    for (std::size_t votes = (k + 1) / 2; votes >= 1; --votes) {
      const double threshold = static_cast<double>(votes) / static_cast<double>(k);
      const auto report = metrics_from(count_confusion(scores, validation.y, threshold));
      result.sweep.push_back(sweep_point("k=" + std::to_string(k) + ",votes=" + std::to_string(votes), report));
      if (!have || improves(report, result.validation)) {
        Model model;
        model.kind = ModelKind::knn;
        model.feature_names = fit.feature_names;
        model.threshold = threshold;
        model.params = KnnParams{static_cast<int>(k), {}, {}};
        result.model = std::move(model);
        result.validation = report;
        have = true;
      }
    }
  }
  auto& params = std::get<KnnParams>(result.model.params);
  params.rows = fit.x;
  params.labels = fit.y;
  return result;
}

double gini(double n, double positives) {
  if (n <= 0.0) return 0.0;
  const double p = positives / n;
  return 2.0 * p * (1.0 - p);
}

DecisionTree grow_tree(const Samples& fit, std::vector<std::size_t> sample, std::size_t mtry, std::mt19937_64& rng) {
  const auto dims = fit.dims();
  DecisionTree tree;
  struct Pending {
    int node;
    std::vector<std::size_t> rows;
  };
  std::vector<Pending> stack;
  tree.nodes.push_back({});
  stack.push_back({0, std::move(sample)});
  std::vector<std::size_t> features(dims);
  std::iota(features.begin(), features.end(), 0);

  while (!stack.empty()) {
    auto [node_id, rows] = std::move(stack.back());
    stack.pop_back();
    const auto m = rows.size();
    std::size_t positives = 0;
    for (const auto r : rows) positives += fit.y[r] != 0;
    auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.positive_fraction = static_cast<double>(positives) / static_cast<double>(m);
    if (positives == 0 || positives == m || m < 2 * kMinLeaf) continue;

    // Random feature subset by partial Fisher-Yates.
    for (std::size_t i = 0; i < mtry; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, dims - 1);
      std::swap(features[i], features[pick(rng)]);
    }
    const double parent = gini(static_cast<double>(m), static_cast<double>(positives));
    double best_impurity = parent - 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> sorted = rows;
    for (std::size_t fi = 0; fi < mtry; ++fi) {
      const auto f = features[fi];
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) { return fit.x[a][f] < fit.x[b][f]; });
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        left_pos += fit.y[sorted[i]] != 0;
        const double lo = fit.x[sorted[i]][f];
        const double hi = fit.x[sorted[i + 1]][f];
        if (lo == hi) continue;
        const auto nl = i + 1;
        const auto nr = m - nl;
        if (nl < kMinLeaf || nr < kMinLeaf) continue;
        const double impurity =
            (static_cast<double>(nl) * gini(static_cast<double>(nl), static_cast<double>(left_pos)) +
             static_cast<double>(nr) * gini(static_cast<double>(nr), static_cast<double>(positives - left_pos))) /
            static_cast<double>(m);
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = lo + (hi - lo) / 2.0;
          if (best_threshold >= hi) best_threshold = lo;
        }
      }
    }
    if (best_feature < 0) continue;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (const auto r : rows)
      (fit.x[r][static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right).push_back(r);
    const int left_id = static_cast<int>(tree.nodes.size());
    const int right_id = left_id + 1;
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    auto& split_node = tree.nodes[static_cast<std::size_t>(node_id)];
    split_node.feature = best_feature;
    split_node.threshold = best_threshold;
    split_node.left = left_id;
    split_node.right = right_id;
    stack.push_back({right_id, std::move(right)});
    stack.push_back({left_id, std::move(left)});
  }
  return tree;
}

TrainResult train_forest(const Samples& fit, const Samples& validation, std::uint64_t seed) {
  const auto n = fit.size();
  const auto mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(fit.dims())))));
  std::vector<DecisionTree> trees;
  trees.reserve(kTreeCounts.back());
  for (std::size_t t = 0; t < kTreeCounts.back(); ++t) {
    std::mt19937_64 rng(detail::mix_seed(seed, 100 + t));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = pick(rng);
    trees.push_back(grow_tree(fit, std::move(sample), mtry, rng));
  }
  // Cumulative positive votes per validation row over the tree sequence.
  std::vector<std::vector<std::size_t>> votes(validation.size(), std::vector<std::size_t>(trees.size() + 1, 0));
  for (std::size_t r = 0; r < validation.size(); ++r)
    for (std::size_t t = 0; t < trees.size(); ++t)
      votes[r][t + 1] = votes[r][t] + trees[t].votes_positive(validation.x[r]);

  TrainResult result;
  bool have = false;
  std::size_t chosen = 0;
  for (const auto count : kTreeCounts) {
    std::vector<double> scores(validation.size());
    for (std::size_t r = 0; r < validation.size(); ++r)
      scores[r] = static_cast<double>(votes[r][count]) / static_cast<double>(count);
    const auto report = metrics_from(count_confusion(scores, validation.y, 0.5));
    result.sweep.push_back(sweep_point("trees=" + std::to_string(count), report));
    if (!have || improves(report, result.validation)) {
      result.validation = report;
      chosen = count;
      have = true;
    }
  }
  trees.resize(chosen);
  result.model.kind = ModelKind::random_forest;
  result.model.feature_names = fit.feature_names;
  result.model.threshold = 0.5;
  result.model.params = ForestParams{std::move(trees)};
  return result;
}

TrainResult train_bayes(const Samples& fit, const Samples& validation) {
  const auto d = fit.dims();
  BayesParams params;
  std::array<std::size_t, 2> count{};
  for (int c = 0; c < 2; ++c) {
    params.mean[c].assign(d, 0.0);
    params.variance[c].assign(d, 0.0);
  }
  for (std::size_t i = 0; i < fit.size(); ++i) {
    const int c = fit.y[i] != 0;
    ++count[c];
    for (std::size_t j = 0; j < d; ++j) params.mean[c][j] += fit.x[i][j];
  }
  for (int c = 0; c < 2; ++c)
    for (auto& m : params.mean[c]) m /= static_cast<double>(count[c]);
  for (std::size_t i = 0; i < fit.size(); ++i) {
    const int c = fit.y[i] != 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = fit.x[i][j] - params.mean[c][j];
      params.variance[c][j] += diff * diff;
    }
  }
  for (int c = 0; c < 2; ++c)
    for (auto& v : params.variance[c]) v /= static_cast<double>(count[c]);

  // Variance floor relative to the widest feature, as in common implementations.
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& row : fit.x) mean += row[j];
    mean /= static_cast<double>(fit.size());
    double var = 0.0;
    for (const auto& row : fit.x) var += (row[j] - mean) * (row[j] - mean);
    max_var = std::max(max_var, var / static_cast<double>(fit.size()));
  }
  const double epsilon = max_var > 0.0 ? 1e-9 * max_var : 1e-9;
  for (int c = 0; c < 2; ++c)
    for (auto& v : params.variance[c]) v += epsilon;
  params.prior_positive = static_cast<double>(count[1]) / static_cast<double>(fit.size());

  TrainResult result;
  result.model.kind = ModelKind::naive_bayes;
  result.model.feature_names = fit.feature_names;
  result.model.threshold = 0.5;
  result.model.params = std::move(params);
  result.validation = metrics_from(count_confusion(scores_of(result.model, validation), validation.y, 0.5));
  result.sweep.push_back(sweep_point("gaussian", result.validation));
  return result;
}

}  // namespace

TrainResult train(ModelKind kind, const Samples& train, const Samples& validation, const TrainOptions& options) {
  if (train.feature_names != validation.feature_names)
    throw Error(ErrorKind::invalid_argument, "training and validation features differ");
  if (validation.size() == 0) throw Error(ErrorKind::invalid_argument, "validation set is empty");
  const auto positives = train.positives();
  if (positives == 0 || positives == train.size())
    throw Error(ErrorKind::invalid_argument, "training rows need both classes");
  const auto seed = detail::mix_seed(options.seed, kind_index(kind));
  const auto fit = downsample(train, options.negative_ratio, detail::mix_seed(seed, 0));

  TrainResult result;
  switch (kind) {
    case ModelKind::linear_regression: result = train_regression(fit, validation, options); break;
    case ModelKind::linear_svm: result = train_svm(fit, validation, options, seed); break;
    case ModelKind::knn: result = train_knn(fit, validation); break;
    case ModelKind::random_forest: result = train_forest(fit, validation, seed); break;
    case ModelKind::naive_bayes: result = train_bayes(fit, validation); break;
  }
  // The sweep selects on metrics alone; the stored report also carries the ROC.
  result.validation = evaluate(result.model, validation);
  return result;
}

std::vector<TrainResult> train_all(std::span<const ModelKind> kinds, const Samples& train_set,
                                   const Samples& validation, const TrainOptions& options, unsigned threads) {
  std::vector<TrainResult> results(kinds.size());
  const std::size_t wave = std::max(1u, threads);
  for (std::size_t start = 0; start < kinds.size(); start += wave) {
    const auto end = std::min(kinds.size(), start + wave);
    if (wave == 1) {
      results[start] = train(kinds[start], train_set, validation, options);
      continue;
    }
    std::vector<std::future<TrainResult>> jobs;
    for (std::size_t i = start; i < end; ++i)
      jobs.push_back(std::async(std::launch::async, [&, i] { return train(kinds[i], train_set, validation, options); }));
    for (std::size_t i = start; i < end; ++i) results[i] = jobs[i - start].get();
  }
  return results;
}

}  // namespace prefnet::ml
