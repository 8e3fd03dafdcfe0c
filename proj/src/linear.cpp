#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "surveyq/classifiers.hpp"
#include "trainers.hpp"

namespace surveyq {

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

/// log(1 + exp(t)) without overflow.
double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double dot(std::span<const double> w, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * x[j];
  return acc;
}

}  // namespace

double logreg_sample_loss(std::span<const double> weights, double intercept,
                          std::span<const double> x, int y, double l2) {
  const double z = dot(weights, x) + intercept;
  const double data_term = y == 1 ? softplus(-z) : softplus(z);
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return data_term + 0.5 * l2 * reg;
}

void logreg_sample_gradient(std::span<const double> weights, double intercept,
                            std::span<const double> x, int y, double l2,
                            std::span<double> grad_weights, double& grad_intercept) {
  const double z = dot(weights, x) + intercept;
  const double err = sigmoid(z) - static_cast<double>(y);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    grad_weights[j] = err * x[j] + l2 * weights[j];
  }
  grad_intercept = err;
}

double logreg_loss(std::span<const double> weights, double intercept, const Dataset& d,
                   double l2) {
  double acc = 0.0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const double z = dot(weights, d.row(r)) + intercept;
    acc += d.label(r) == 1 ? softplus(-z) : softplus(z);
  }
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return acc / static_cast<double>(d.rows()) + 0.5 * l2 * reg;
}

void logreg_gradient(std::span<const double> weights, double intercept, const Dataset& d,
                     double l2, std::span<double> grad_weights, double& grad_intercept) {
  const std::size_t n = d.rows();
  const std::size_t p = weights.size();
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  grad_intercept = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    auto x = d.row(r);
    const double err = sigmoid(dot(weights, x) + intercept) - static_cast<double>(d.label(r));
    for (std::size_t j = 0; j < p; ++j) grad_weights[j] += err * x[j];
    grad_intercept += err;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < p; ++j) grad_weights[j] = grad_weights[j] * inv_n + l2 * weights[j];
  grad_intercept *= inv_n;
}

namespace detail {

LinearModel train_logreg(const Dataset& d, const LinearHyperparams& hp) {
  const std::size_t p = d.cols();
  LinearModel model;
  model.weights.assign(p, 0.0);
  std::vector<double> grad(p, 0.0);
  double grad_b = 0.0;
  for (int epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    logreg_gradient(model.weights, model.intercept, d, hp.l2, grad, grad_b);
    double gnorm = std::abs(grad_b);
    for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
    if (!std::isfinite(gnorm)) {
      throw std::runtime_error("logreg: non-finite gradient at epoch " + std::to_string(epoch));
    }
    if (gnorm < hp.tolerance) break;
    for (std::size_t j = 0; j < p; ++j) model.weights[j] -= hp.learning_rate * grad[j];
    model.intercept -= hp.learning_rate * grad_b;
  }
  const double final_loss = logreg_loss(model.weights, model.intercept, d, hp.l2);
  if (!std::isfinite(final_loss)) {
    throw std::runtime_error("logreg: non-finite loss after epoch " +
                             std::to_string(hp.max_epochs));
  }
  return model;
}

LinearModel train_sgd_logreg(const Dataset& d, const LinearHyperparams& hp, Rng& rng) {
  const std::size_t n = d.rows();
  const std::size_t p = d.cols();
  LinearModel model;
  model.weights.assign(p, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  double prev_loss = logreg_loss(model.weights, model.intercept, d, hp.l2);
  std::size_t step = 0;
  for (int epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t r : order) {
      ++step;
      const double lr = hp.learning_rate / std::sqrt(static_cast<double>(step));
      auto x = d.row(r);
      const double err =
          sigmoid(dot(model.weights, x) + model.intercept) - static_cast<double>(d.label(r));
      for (std::size_t j = 0; j < p; ++j) {
        model.weights[j] -= lr * (err * x[j] + hp.l2 * model.weights[j]);
      }
      model.intercept -= lr * err;
    }
    const double loss = logreg_loss(model.weights, model.intercept, d, hp.l2);
    if (!std::isfinite(loss)) {
      throw std::runtime_error("sgd-logreg: non-finite loss at epoch " + std::to_string(epoch));
    }
    if (std::abs(prev_loss - loss) < hp.tolerance) break;
    prev_loss = loss;
  }
  return model;
}

LinearModel train_linear_svm(const Dataset& d, const LinearHyperparams& hp, Rng& rng) {
  const std::size_t n = d.rows();
  const std::size_t p = d.cols();
  LinearModel model;
  model.weights.assign(p, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  auto objective = [&]() {
    double hinge = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double s = d.label(r) == 1 ? 1.0 : -1.0;
      hinge += std::max(0.0, 1.0 - s * (dot(model.weights, d.row(r)) + model.intercept));
    }
    double reg = 0.0;
    for (double w : model.weights) reg += w * w;
    return hinge / static_cast<double>(n) + 0.5 * hp.l2 * reg;
  };

  double prev_obj = objective();
  std::size_t step = 0;
  for (int epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t r : order) {
      ++step;
      const double eta = 1.0 / (hp.l2 * static_cast<double>(step));
      const double s = d.label(r) == 1 ? 1.0 : -1.0;
      auto x = d.row(r);
      const double margin = s * (dot(model.weights, x) + model.intercept);
      const double shrink = 1.0 - eta * hp.l2;
      for (double& w : model.weights) w *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < p; ++j) model.weights[j] += eta * s * x[j];
        model.intercept += eta * s;
      }
    }
    const double obj = objective();
    if (!std::isfinite(obj)) {
      throw std::runtime_error("linear-svm: non-finite objective at epoch " +
                               std::to_string(epoch));
    }
    if (std::abs(prev_obj - obj) < hp.tolerance) break;
    prev_obj = obj;
  }
  return model;
}

}  // namespace detail

}  // namespace surveyq
