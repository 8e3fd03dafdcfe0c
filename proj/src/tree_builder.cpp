#include "tree_builder.hpp"

#include <algorithm>
#include <cmath>

namespace surveyq::detail {

namespace {

constexpr double kMinGain = 1e-12;

std::vector<double> column_boundaries(std::vector<double> sorted_values, int max_bins) {
  sorted_values.erase(std::unique(sorted_values.begin(), sorted_values.end()),
                      sorted_values.end());
  std::vector<double> boundaries;
  const std::size_t uniques = sorted_values.size();
  if (uniques <= 1) return boundaries;
  if (uniques <= static_cast<std::size_t>(max_bins)) {
    boundaries.reserve(uniques - 1);
    for (std::size_t i = 0; i + 1 < uniques; ++i) {
      boundaries.push_back(0.5 * (sorted_values[i] + sorted_values[i + 1]));
    }
  } else {
    // Quantile cut over the distinct values.
    boundaries.reserve(static_cast<std::size_t>(max_bins) - 1);
    for (int b = 1; b < max_bins; ++b) {
      const std::size_t at = uniques * static_cast<std::size_t>(b) / static_cast<std::size_t>(max_bins);
      const double v = sorted_values[at];
      if (boundaries.empty() || v > boundaries.back()) boundaries.push_back(v);
    }
  }
  return boundaries;
}

}  // namespace

BinnedMatrix bin_matrix(const Dataset& d, int max_bins) {
  BinnedMatrix bm;
  bm.rows = d.rows();
  bm.cols = d.cols();
  bm.bin_ids.resize(bm.rows * bm.cols);
  bm.boundaries.resize(bm.cols);

  std::vector<double> column(bm.rows);
  for (std::size_t c = 0; c < bm.cols; ++c) {
    for (std::size_t r = 0; r < bm.rows; ++r) column[r] = d.value(r, c);
    std::sort(column.begin(), column.end());
    bm.boundaries[c] = column_boundaries(column, max_bins);
    const auto& bounds = bm.boundaries[c];
    for (std::size_t r = 0; r < bm.rows; ++r) {
      const auto it = std::lower_bound(bounds.begin(), bounds.end(), d.value(r, c));
      bm.bin_ids[r * bm.cols + c] = static_cast<std::uint16_t>(it - bounds.begin());
    }
  }
  return bm;
}

namespace {

/// Draw `mtry` distinct feature indices, ascending, so that equal-gain ties
/// resolve to the lowest feature index regardless of draw order.
std::vector<std::size_t> candidate_features(std::size_t cols, int mtry, Rng& rng) {
  if (mtry <= 0 || static_cast<std::size_t>(mtry) >= cols) {
    std::vector<std::size_t> all(cols);
    for (std::size_t i = 0; i < cols; ++i) all[i] = i;
    return all;
  }
  std::vector<std::size_t> pool(cols);
  for (std::size_t i = 0; i < cols; ++i) pool[i] = i;
  for (std::size_t i = 0; i < static_cast<std::size_t>(mtry); ++i) {
    std::size_t j = i + rng.next_below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(mtry));
  std::sort(pool.begin(), pool.end());
  return pool;
}

struct ClassificationGrower {
  const BinnedMatrix& bm;
  const std::vector<int>& labels;
  int max_depth;
  int mtry;
  Rng& rng;
  std::vector<double>& split_gain;
  std::vector<TreeNode> nodes{};

  // Scratch histograms, reused across nodes.
  std::vector<std::size_t> hist_count{};
  std::vector<std::size_t> hist_pos{};

  static double gini(std::size_t pos, std::size_t n) {
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);
  }

  int build(std::vector<std::size_t>& rows, std::size_t begin, std::size_t end, int depth) {
    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();

    const std::size_t n = end - begin;
    std::size_t pos = 0;
    for (std::size_t i = begin; i < end; ++i) pos += static_cast<std::size_t>(labels[rows[i]]);
    const double leaf_value = static_cast<double>(pos) / static_cast<double>(n);

    if (depth >= max_depth || n < 2 || pos == 0 || pos == n) {
      nodes[node_id].value = leaf_value;
      return node_id;
    }

    const double parent_impurity = static_cast<double>(n) * gini(pos, n);
    double best_gain = kMinGain;
    std::size_t best_feature = 0;
    std::size_t best_edge = 0;

    for (std::size_t f : candidate_features(bm.cols, mtry, rng)) {
      const std::size_t bins = bm.bin_count(f);
      if (bins < 2) continue;
      hist_count.assign(bins, 0);
      hist_pos.assign(bins, 0);
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t b = bm.bin(rows[i], f);
        ++hist_count[b];
        hist_pos[b] += static_cast<std::size_t>(labels[rows[i]]);
      }
      std::size_t left_n = 0;
      std::size_t left_pos = 0;
      for (std::size_t edge = 0; edge + 1 < bins; ++edge) {
        left_n += hist_count[edge];
        left_pos += hist_pos[edge];
        if (left_n == 0 || left_n == n) continue;
        const std::size_t right_n = n - left_n;
        const std::size_t right_pos = pos - left_pos;
        const double children = static_cast<double>(left_n) * gini(left_pos, left_n) +
                                static_cast<double>(right_n) * gini(right_pos, right_n);
        const double gain = parent_impurity - children;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_edge = edge;
        }
      }
    }

    if (best_gain <= kMinGain) {
      nodes[node_id].value = leaf_value;
      return node_id;
    }

    split_gain[best_feature] += best_gain;
    const double threshold = bm.boundaries[best_feature][best_edge];
    const auto mid_it = std::stable_partition(
        rows.begin() + static_cast<std::ptrdiff_t>(begin),
        rows.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::size_t r) { return bm.bin(r, best_feature) <= best_edge; });
    const std::size_t mid = static_cast<std::size_t>(mid_it - rows.begin());

    nodes[node_id].feature = static_cast<int>(best_feature);
    nodes[node_id].threshold = threshold;
    nodes[node_id].value = leaf_value;
    const int left = build(rows, begin, mid, depth + 1);
    const int right = build(rows, mid, end, depth + 1);
    nodes[node_id].left = left;
    nodes[node_id].right = right;
    return node_id;
  }
};

struct RegressionGrower {
  const BinnedMatrix& bm;
  const std::vector<double>& grad;
  const std::vector<double>& hess;
  int max_depth;
  std::vector<double>& split_gain;
  std::vector<double>* leaf_updates;
  std::vector<TreeNode> nodes{};

  std::vector<std::size_t> hist_count{};
  std::vector<double> hist_sum{};

  int build(std::vector<std::size_t>& rows, std::size_t begin, std::size_t end, int depth) {
    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();

    const std::size_t n = end - begin;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += grad[rows[i]];

    auto make_leaf = [&]() {
      double hess_sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) hess_sum += hess[rows[i]];
      const double value = sum / (hess_sum + 1e-6);
      nodes[node_id].value = value;
      if (leaf_updates) {
        for (std::size_t i = begin; i < end; ++i) (*leaf_updates)[rows[i]] = value;
      }
      return node_id;
    };

    if (depth >= max_depth || n < 2) return make_leaf();

    const double parent_score = sum * sum / static_cast<double>(n);
    double best_gain = kMinGain;
    std::size_t best_feature = 0;
    std::size_t best_edge = 0;

    for (std::size_t f = 0; f < bm.cols; ++f) {
      const std::size_t bins = bm.bin_count(f);
      if (bins < 2) continue;
      hist_count.assign(bins, 0);
      hist_sum.assign(bins, 0.0);
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t b = bm.bin(rows[i], f);
        ++hist_count[b];
        hist_sum[b] += grad[rows[i]];
      }
      std::size_t left_n = 0;
      double left_sum = 0.0;
      for (std::size_t edge = 0; edge + 1 < bins; ++edge) {
        left_n += hist_count[edge];
        left_sum += hist_sum[edge];
        if (left_n == 0 || left_n == n) continue;
        const std::size_t right_n = n - left_n;
        const double right_sum = sum - left_sum;
        // SSE reduction: sum_l^2/n_l + sum_r^2/n_r - sum^2/n.
        const double gain = left_sum * left_sum / static_cast<double>(left_n) +
                            right_sum * right_sum / static_cast<double>(right_n) - parent_score;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_edge = edge;
        }
      }
    }

    if (best_gain <= kMinGain) return make_leaf();

    split_gain[best_feature] += best_gain;
    const double threshold = bm.boundaries[best_feature][best_edge];
    const auto mid_it = std::stable_partition(
        rows.begin() + static_cast<std::ptrdiff_t>(begin),
        rows.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::size_t r) { return bm.bin(r, best_feature) <= best_edge; });
    const std::size_t mid = static_cast<std::size_t>(mid_it - rows.begin());

    nodes[node_id].feature = static_cast<int>(best_feature);
    nodes[node_id].threshold = threshold;
    const int left = build(rows, begin, mid, depth + 1);
    const int right = build(rows, mid, end, depth + 1);
    nodes[node_id].left = left;
    nodes[node_id].right = right;
    return node_id;
  }
};

}  // namespace

DecisionTree grow_classification_tree(const BinnedMatrix& bm, const std::vector<int>& labels,
                                      std::vector<std::size_t> rows, int max_depth, int mtry,
                                      Rng& rng, std::vector<double>& split_gain) {
  ClassificationGrower grower{bm, labels, max_depth, mtry, rng, split_gain};
  grower.build(rows, 0, rows.size(), 0);
  return DecisionTree{std::move(grower.nodes)};
}

DecisionTree grow_regression_tree(const BinnedMatrix& bm, const std::vector<double>& grad,
                                  const std::vector<double>& hess, std::vector<std::size_t> rows,
                                  int max_depth, std::vector<double>& split_gain,
                                  std::vector<double>* leaf_updates) {
  RegressionGrower grower{bm, grad, hess, max_depth, split_gain, leaf_updates};
  grower.build(rows, 0, rows.size(), 0);
  return DecisionTree{std::move(grower.nodes)};
}

}  // namespace surveyq::detail
