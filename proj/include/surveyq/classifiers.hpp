#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "surveyq/dataset.hpp"
#include "surveyq/rng.hpp"

namespace surveyq {

enum class ModelKind {
  LogReg,
  LinearSvm,
  SgdLogReg,
  RandomForest,
  GradBoost,
  Knn,
  GaussianNb,
};

std::string to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(const std::string& name);

/// All seven classifiers, in reporting order.
const std::vector<ModelKind>& all_model_kinds();

/// The five kinds that expose an embedded feature importance.
const std::vector<ModelKind>& importance_capable_kinds();
bool has_embedded_importance(ModelKind kind);

enum class DistanceMetric { Euclidean, Manhattan };

struct LinearHyperparams {
  double learning_rate = 0.1;
  double l2 = 1e-3;
  int max_epochs = 500;
  double tolerance = 1e-6;
};

struct ForestHyperparams {
  int trees = 100;
  int max_depth = 8;
  int features_per_split = 0;  // 0 selects ceil(sqrt(p))
  bool bootstrap = true;
  int threads = 1;  // parallel tree builds; results identical for any value
};

struct BoostHyperparams {
  int rounds = 100;
  double shrinkage = 0.1;
  int max_depth = 3;
};

struct KnnHyperparams {
  int k = 5;
  DistanceMetric metric = DistanceMetric::Euclidean;
};

struct GnbHyperparams {
  /// Added to every class variance, as a fraction of the largest column
  /// variance in the training data.
  double variance_smoothing = 1e-9;
};

/// Per-kind training knobs; defaults reproduce the reference pipeline.
struct Hyperparams {
  LinearHyperparams logreg{0.1, 1e-3, 500, 1e-6};
  LinearHyperparams svm{0.0, 1e-3, 500, 1e-6};  // Pegasos: step size is 1/(l2*t)
  LinearHyperparams sgd{0.05, 1e-3, 50, 1e-6};
  ForestHyperparams forest{};
  BoostHyperparams boost{};
  KnnHyperparams knn{};
  GnbHyperparams gnb{};

  /// Throws std::invalid_argument on nonpositive counts or negative rates.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Learned parameter blocks
// ---------------------------------------------------------------------------

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
};

/// Binary tree stored as a flat node array; root at index 0. Leaves have
/// feature == -1 and carry `value` (positive fraction for classification
/// trees, additive score for boosted regression trees).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  double value = 0.0;
  int left = -1;
  int right = -1;
  bool is_leaf() const noexcept { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  double predict(std::span<const double> x) const;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  /// Total Gini impurity decrease per feature, accumulated over all splits.
  std::vector<double> split_gain;
};

struct BoostModel {
  std::vector<DecisionTree> trees;
  double base_score = 0.0;
  double shrinkage = 0.1;
  /// Total squared-error reduction per feature over all splits.
  std::vector<double> split_gain;
};

struct KnnModel {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> points;  // row-major copy of the training matrix
  std::vector<int> labels;
  int k = 5;
  DistanceMetric metric = DistanceMetric::Euclidean;
};

struct GnbModel {
  std::array<double, 2> log_prior{0.0, 0.0};
  // Indexed [class][feature].
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> variance;
};

using ModelParams = std::variant<LinearModel, ForestModel, BoostModel, KnnModel, GnbModel>;

/**
 * A fitted classifier: kind, learned parameters, and the feature names it
 * was trained against. Value type; serializable via model_io.
 */
class TrainedModel {
 public:
  TrainedModel(ModelKind kind, ModelParams params, std::vector<std::string> feature_names);

  ModelKind kind() const noexcept { return kind_; }
  const ModelParams& params() const noexcept { return params_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }

 private:
  ModelKind kind_;
  ModelParams params_;
  std::vector<std::string> feature_names_;
};

struct Prediction {
  int label = 0;       // 1 iff score >= 0.5
  double score = 0.0;  // continuous output in [0,1]
};

/// Normalized per-feature importance weights: nonnegative, sum to 1.
struct FeatureImportance {
  std::vector<double> weights;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/**
 * Fit a model of the given kind. Deterministic in (train, hp, rng seed).
 * Preconditions: train normalized, non-empty, both classes present.
 */
TrainedModel train(ModelKind kind, const Dataset& train, const Hyperparams& hp, Rng rng);

/// Score one feature vector. Label is 1 iff score >= 0.5.
Prediction predict(const TrainedModel& model, std::span<const double> x);

/// Embedded importance, or nullopt for KNN and Gaussian naive Bayes.
std::optional<FeatureImportance> importance(const TrainedModel& model);

/// Indices of the k largest importance weights, descending; ties broken by
/// ascending feature index.
std::vector<std::size_t> top_k(const FeatureImportance& imp, std::size_t k);

// ---------------------------------------------------------------------------
// Loss surfaces, exposed so optimization can be checked against finite
// differences and brute-force search.
// ---------------------------------------------------------------------------

/// Mean regularized log-loss over the dataset: intercept unpenalized.
double logreg_loss(std::span<const double> weights, double intercept, const Dataset& d, double l2);

/// Analytic gradient of logreg_loss.
void logreg_gradient(std::span<const double> weights, double intercept, const Dataset& d,
                     double l2, std::span<double> grad_weights, double& grad_intercept);

/// Single-sample regularized log-loss (the SGD objective term).
double logreg_sample_loss(std::span<const double> weights, double intercept,
                          std::span<const double> x, int y, double l2);

void logreg_sample_gradient(std::span<const double> weights, double intercept,
                            std::span<const double> x, int y, double l2,
                            std::span<double> grad_weights, double& grad_intercept);

/// Numerically stable 1/(1+exp(-z)).
double sigmoid(double z);

}  // namespace surveyq
