#include "surveyq/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "trainers.hpp"

namespace surveyq {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LogReg: return "LogReg";
    case ModelKind::LinearSvm: return "LinearSVM";
    case ModelKind::SgdLogReg: return "SgdLogReg";
    case ModelKind::RandomForest: return "RandomForest";
    case ModelKind::GradBoost: return "GradBoost";
    case ModelKind::Knn: return "KNN";
    case ModelKind::GaussianNb: return "GaussianNB";
  }
  return "?";
}

std::optional<ModelKind> model_kind_from_string(const std::string& name) {
  if (name == "LogReg" || name == "LR") return ModelKind::LogReg;
  if (name == "LinearSVM" || name == "SVM") return ModelKind::LinearSvm;
  if (name == "SgdLogReg" || name == "SGD") return ModelKind::SgdLogReg;
  if (name == "RandomForest" || name == "RF") return ModelKind::RandomForest;
  if (name == "GradBoost" || name == "GB") return ModelKind::GradBoost;
  if (name == "KNN") return ModelKind::Knn;
  if (name == "GaussianNB" || name == "GNB") return ModelKind::GaussianNb;
  return std::nullopt;
}

const std::vector<ModelKind>& all_model_kinds() {
  static const std::vector<ModelKind> kinds = {
      ModelKind::LogReg,     ModelKind::LinearSvm, ModelKind::SgdLogReg, ModelKind::RandomForest,
      ModelKind::GradBoost,  ModelKind::Knn,       ModelKind::GaussianNb};
  return kinds;
}

const std::vector<ModelKind>& importance_capable_kinds() {
  static const std::vector<ModelKind> kinds = {ModelKind::LogReg, ModelKind::LinearSvm,
                                               ModelKind::SgdLogReg, ModelKind::RandomForest,
                                               ModelKind::GradBoost};
  return kinds;
}

bool has_embedded_importance(ModelKind kind) {
  return kind != ModelKind::Knn && kind != ModelKind::GaussianNb;
}

void Hyperparams::validate() const {
  auto check_linear = [](const LinearHyperparams& hp, const char* name, bool needs_lr) {
    if (needs_lr && hp.learning_rate <= 0.0)
      throw std::invalid_argument(std::string(name) + ": learning rate must be positive");
    if (hp.l2 < 0.0) throw std::invalid_argument(std::string(name) + ": l2 must be nonnegative");
    if (hp.max_epochs <= 0)
      throw std::invalid_argument(std::string(name) + ": max epochs must be positive");
    if (hp.tolerance < 0.0)
      throw std::invalid_argument(std::string(name) + ": tolerance must be nonnegative");
  };
  check_linear(logreg, "logreg", true);
  check_linear(sgd, "sgd", true);
  check_linear(svm, "svm", false);
  if (svm.l2 <= 0.0) throw std::invalid_argument("svm: l2 must be positive (sets the step size)");
  if (forest.trees <= 0) throw std::invalid_argument("forest: tree count must be positive");
  if (forest.max_depth <= 0) throw std::invalid_argument("forest: max depth must be positive");
  if (forest.features_per_split < 0)
    throw std::invalid_argument("forest: features per split must be nonnegative");
  if (forest.threads <= 0) throw std::invalid_argument("forest: threads must be positive");
  if (boost.rounds <= 0) throw std::invalid_argument("boost: rounds must be positive");
  if (boost.shrinkage <= 0.0) throw std::invalid_argument("boost: shrinkage must be positive");
  if (boost.max_depth <= 0) throw std::invalid_argument("boost: max depth must be positive");
  if (knn.k <= 0) throw std::invalid_argument("knn: k must be positive");
  if (gnb.variance_smoothing < 0.0)
    throw std::invalid_argument("gnb: variance smoothing must be nonnegative");
}

double DecisionTree::predict(std::span<const double> x) const {
  const TreeNode* node = &nodes[0];
  while (!node->is_leaf()) {
    node = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? &nodes[node->left]
                                                                         : &nodes[node->right];
  }
  return node->value;
}

TrainedModel::TrainedModel(ModelKind kind, ModelParams params,
                           std::vector<std::string> feature_names)
    : kind_(kind), params_(std::move(params)), feature_names_(std::move(feature_names)) {}

TrainedModel train(ModelKind kind, const Dataset& data, const Hyperparams& hp, Rng rng) {
  hp.validate();
  if (data.rows() == 0) throw std::invalid_argument("train: empty training set");
  if (!data.normalized()) throw std::invalid_argument("train: training set is not normalized");
  const ClassCounts counts = class_counts(data);
  if (counts.negatives == 0 || counts.positives == 0)
    throw std::invalid_argument("train: training set contains a single class");

  std::vector<std::string> names;
  names.reserve(data.cols());
  for (const auto& f : data.schema().features()) names.push_back(f.name);

  switch (kind) {
    case ModelKind::LogReg:
      return TrainedModel(kind, detail::train_logreg(data, hp.logreg), std::move(names));
    case ModelKind::LinearSvm:
      return TrainedModel(kind, detail::train_linear_svm(data, hp.svm, rng), std::move(names));
    case ModelKind::SgdLogReg:
      return TrainedModel(kind, detail::train_sgd_logreg(data, hp.sgd, rng), std::move(names));
    case ModelKind::RandomForest:
      return TrainedModel(kind, detail::train_forest(data, hp.forest, rng), std::move(names));
    case ModelKind::GradBoost:
      return TrainedModel(kind, detail::train_gradboost(data, hp.boost), std::move(names));
    case ModelKind::Knn:
      return TrainedModel(kind, detail::train_knn(data, hp.knn), std::move(names));
    case ModelKind::GaussianNb:
      return TrainedModel(kind, detail::train_gnb(data, hp.gnb), std::move(names));
  }
  throw std::invalid_argument("train: unknown model kind");
}

namespace {

double knn_score(const KnnModel& m, std::span<const double> x) {
  // (distance, index) pairs; ties on distance resolve to the lower index.
  std::vector<std::pair<double, std::size_t>> dist(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* point = m.points.data() + r * m.cols;
    double acc = 0.0;
    if (m.metric == DistanceMetric::Euclidean) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        const double delta = point[j] - x[j];
        acc += delta * delta;
      }
    } else {
      for (std::size_t j = 0; j < m.cols; ++j) acc += std::abs(point[j] - x[j]);
    }
    dist[r] = {acc, r};
  }
  const std::size_t k = static_cast<std::size_t>(m.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::size_t votes = 0;
  for (std::size_t i = 0; i < k; ++i) votes += static_cast<std::size_t>(m.labels[dist[i].second]);
  return static_cast<double>(votes) / static_cast<double>(k);
}

double gnb_score(const GnbModel& m, std::span<const double> x) {
  std::array<double, 2> log_post = m.log_prior;
  for (int c : {0, 1}) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = m.variance[c][j];
      const double delta = x[j] - m.mean[c][j];
      log_post[c] += -0.5 * (std::log(2.0 * M_PI * var) + delta * delta / var);
    }
  }
  return sigmoid(log_post[1] - log_post[0]);
}

}  // namespace

Prediction predict(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.feature_count())
    throw std::invalid_argument("predict: expected " + std::to_string(model.feature_count()) +
                                " features, got " + std::to_string(x.size()));
  double score = 0.0;
  switch (model.kind()) {
    case ModelKind::LogReg:
    case ModelKind::LinearSvm:
    case ModelKind::SgdLogReg: {
      const auto& m = std::get<LinearModel>(model.params());
      double z = m.intercept;
      for (std::size_t j = 0; j < x.size(); ++j) z += m.weights[j] * x[j];
      score = sigmoid(z);
      break;
    }
    case ModelKind::RandomForest: {
      const auto& m = std::get<ForestModel>(model.params());
      std::size_t votes = 0;
      for (const auto& tree : m.trees) votes += tree.predict(x) >= 0.5 ? 1 : 0;
      score = static_cast<double>(votes) / static_cast<double>(m.trees.size());
      break;
    }
    case ModelKind::GradBoost: {
      const auto& m = std::get<BoostModel>(model.params());
      double z = m.base_score;
      for (const auto& tree : m.trees) z += m.shrinkage * tree.predict(x);
      score = sigmoid(z);
      break;
    }
    case ModelKind::Knn:
      score = knn_score(std::get<KnnModel>(model.params()), x);
      break;
    case ModelKind::GaussianNb:
      score = gnb_score(std::get<GnbModel>(model.params()), x);
      break;
  }
  return {score >= 0.5 ? 1 : 0, score};
}

namespace {

FeatureImportance normalize_importance(std::vector<double> raw) {
  double total = 0.0;
  for (double v : raw) total += v;
  if (total <= 0.0) {
    // Degenerate model (no informative weight anywhere): uniform.
    std::fill(raw.begin(), raw.end(), 1.0 / static_cast<double>(raw.size()));
    return {std::move(raw)};
  }
  for (double& v : raw) v /= total;
  return {std::move(raw)};
}

}  // namespace

std::optional<FeatureImportance> importance(const TrainedModel& model) {
  switch (model.kind()) {
    case ModelKind::LogReg:
    case ModelKind::LinearSvm:
    case ModelKind::SgdLogReg: {
      const auto& m = std::get<LinearModel>(model.params());
      std::vector<double> raw(m.weights.size());
      for (std::size_t j = 0; j < raw.size(); ++j) raw[j] = std::abs(m.weights[j]);
      return normalize_importance(std::move(raw));
    }
    case ModelKind::RandomForest:
      return normalize_importance(std::get<ForestModel>(model.params()).split_gain);
    case ModelKind::GradBoost:
      return normalize_importance(std::get<BoostModel>(model.params()).split_gain);
    case ModelKind::Knn:
    case ModelKind::GaussianNb:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::size_t> top_k(const FeatureImportance& imp, std::size_t k) {
  const std::size_t p = imp.weights.size();
  if (k < 1 || k > p)
    throw std::invalid_argument("top_k: k=" + std::to_string(k) + " out of range [1, " +
                                std::to_string(p) + "]");
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (imp.weights[a] != imp.weights[b]) return imp.weights[a] > imp.weights[b];
    return a < b;
  });
  order.resize(k);
  return order;
}

}  // namespace surveyq
