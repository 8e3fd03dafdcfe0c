#pragma once

// Internal histogram-based tree growing shared by the random forest and
// gradient boosting trainers. Feature values are pre-bucketed per column
// (exact when a column has <= max_bins distinct values, quantile-cut
// otherwise), so split search is one counting pass per node.

#include <cstdint>
#include <vector>

#include "surveyq/classifiers.hpp"
#include "surveyq/dataset.hpp"
#include "surveyq/rng.hpp"

namespace surveyq::detail {

struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint16_t> bin_ids;  // row-major
  /// boundaries[c] is strictly increasing; cell bin b holds values in
  /// (boundaries[b-1], boundaries[b]]; a split at edge b sends
  /// x <= boundaries[b] left.
  std::vector<std::vector<double>> boundaries;

  std::uint16_t bin(std::size_t r, std::size_t c) const { return bin_ids[r * cols + c]; }
  std::size_t bin_count(std::size_t c) const { return boundaries[c].size() + 1; }
};

inline constexpr int kMaxBins = 256;

BinnedMatrix bin_matrix(const Dataset& d, int max_bins = kMaxBins);

/// Gini-impurity classification tree over the given rows. Leaves store the
/// positive-class fraction. Weighted impurity decrease of every split is
/// accumulated into split_gain (size = feature count). mtry < cols draws
/// that many candidate features per node from rng.
DecisionTree grow_classification_tree(const BinnedMatrix& bm, const std::vector<int>& labels,
                                      std::vector<std::size_t> rows, int max_depth, int mtry,
                                      Rng& rng, std::vector<double>& split_gain);

/// Least-squares regression tree on gradients with Newton leaf values
/// sum(grad)/(sum(hess)+eps). Squared-error reduction of every split is
/// accumulated into split_gain. When leaf_updates is non-null, each row's
/// leaf value is recorded there (indexed by row id).
DecisionTree grow_regression_tree(const BinnedMatrix& bm, const std::vector<double>& grad,
                                  const std::vector<double>& hess, std::vector<std::size_t> rows,
                                  int max_depth, std::vector<double>& split_gain,
                                  std::vector<double>* leaf_updates);

}  // namespace surveyq::detail
