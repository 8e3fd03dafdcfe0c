#include <cmath>
#include <numeric>
#include <thread>

#include "tree_builder.hpp"
#include "trainers.hpp"

namespace surveyq::detail {

namespace {

struct TreeResult {
  DecisionTree tree;
  std::vector<double> split_gain;
};

TreeResult build_one_tree(const BinnedMatrix& bm, const std::vector<int>& labels,
                          const ForestHyperparams& hp, int mtry, std::uint64_t tree_seed) {
  Rng rng(tree_seed);
  const std::size_t n = labels.size();
  std::vector<std::size_t> rows(n);
  if (hp.bootstrap) {
    for (std::size_t i = 0; i < n; ++i) rows[i] = rng.next_below(n);
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  TreeResult result;
  result.split_gain.assign(bm.cols, 0.0);
  result.tree = grow_classification_tree(bm, labels, std::move(rows), hp.max_depth, mtry, rng,
                                         result.split_gain);
  return result;
}

}  // namespace

ForestModel train_forest(const Dataset& d, const ForestHyperparams& hp, Rng& rng) {
  const BinnedMatrix bm = bin_matrix(d);
  const int mtry = hp.features_per_split > 0
                       ? hp.features_per_split
                       : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d.cols()))));
  const std::uint64_t base_seed = rng.next_u64();
  const std::size_t n_trees = static_cast<std::size_t>(hp.trees);

  // Trees are independent given their derived seeds; build order does not
  // matter because results are merged by tree index.
  std::vector<TreeResult> results(n_trees);
  auto build_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      results[t] = build_one_tree(bm, d.labels(), hp, mtry, derive_seed(base_seed, t));
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(hp.threads, 1)), n_trees);
  if (workers <= 1) {
    build_range(0, n_trees);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = n_trees * w / workers;
      const std::size_t hi = n_trees * (w + 1) / workers;
      pool.emplace_back(build_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  ForestModel model;
  model.trees.reserve(n_trees);
  model.split_gain.assign(d.cols(), 0.0);
  for (auto& r : results) {
    model.trees.push_back(std::move(r.tree));
    for (std::size_t f = 0; f < d.cols(); ++f) model.split_gain[f] += r.split_gain[f];
  }
  return model;
}

}  // namespace surveyq::detail
