#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tree_builder.hpp"
#include "trainers.hpp"

namespace surveyq::detail {

BoostModel train_gradboost(const Dataset& d, const BoostHyperparams& hp) {
  const std::size_t n = d.rows();
  const BinnedMatrix bm = bin_matrix(d);

  BoostModel model;
  model.shrinkage = hp.shrinkage;
  model.split_gain.assign(d.cols(), 0.0);
  model.trees.reserve(static_cast<std::size_t>(hp.rounds));

  std::size_t positives = 0;
  for (int y : d.labels()) positives += static_cast<std::size_t>(y);
  // Log odds of the training prior.
  model.base_score = std::log(static_cast<double>(positives) /
                              static_cast<double>(n - positives));

  std::vector<double> score(n, model.base_score);
  std::vector<double> grad(n), hess(n), leaf_update(n);
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

  for (int round = 0; round < hp.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double prob = sigmoid(score[i]);
      grad[i] = static_cast<double>(d.label(i)) - prob;  // negative log-loss gradient
      hess[i] = prob * (1.0 - prob);
    }
    model.trees.push_back(grow_regression_tree(bm, grad, hess, all_rows, hp.max_depth,
                                               model.split_gain, &leaf_update));
    for (std::size_t i = 0; i < n; ++i) {
      score[i] += hp.shrinkage * leaf_update[i];
      if (!std::isfinite(score[i])) {
        throw std::runtime_error("gradboost: non-finite score at round " +
                                 std::to_string(round + 1));
      }
    }
  }
  return model;
}

}  // namespace surveyq::detail
