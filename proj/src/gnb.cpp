#include <algorithm>
#include <cmath>

#include "trainers.hpp"

namespace surveyq::detail {

GnbModel train_gnb(const Dataset& d, const GnbHyperparams& hp) {
  const std::size_t n = d.rows();
  const std::size_t p = d.cols();

  GnbModel model;
  std::array<std::size_t, 2> counts{0, 0};
  for (int y : d.labels()) ++counts[static_cast<std::size_t>(y)];
  for (int c : {0, 1}) {
    model.mean[c].assign(p, 0.0);
    model.variance[c].assign(p, 0.0);
    model.log_prior[c] =
        std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
  }

  for (std::size_t r = 0; r < n; ++r) {
    const int y = d.label(r);
    for (std::size_t j = 0; j < p; ++j) model.mean[y][j] += d.value(r, j);
  }
  for (int c : {0, 1}) {
    for (std::size_t j = 0; j < p; ++j) model.mean[c][j] /= static_cast<double>(counts[c]);
  }
  for (std::size_t r = 0; r < n; ++r) {
    const int y = d.label(r);
    for (std::size_t j = 0; j < p; ++j) {
      const double delta = d.value(r, j) - model.mean[y][j];
      model.variance[y][j] += delta * delta;
    }
  }

  // Smoothing is relative to the largest overall column variance.
  double max_col_var = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += d.value(r, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double delta = d.value(r, j) - mean;
      var += delta * delta;
    }
    max_col_var = std::max(max_col_var, var / static_cast<double>(n));
  }
  const double smoothing = hp.variance_smoothing * max_col_var;

  for (int c : {0, 1}) {
    for (std::size_t j = 0; j < p; ++j) {
      double var = model.variance[c][j] / static_cast<double>(counts[c]) + smoothing;
      model.variance[c][j] = std::max(var, 1e-12);  // keep strictly positive
    }
  }
  return model;
}

}  // namespace surveyq::detail
