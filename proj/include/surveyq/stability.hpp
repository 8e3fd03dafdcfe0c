#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surveyq/classifiers.hpp"
#include "surveyq/dataset.hpp"

namespace surveyq {

/**
 * Repeated sample -> train -> select protocol. Each iteration draws one
 * balanced sample shared by every model in model_set, trains each model,
 * and records that model's top k_select features by embedded importance.
 */
struct StabilityConfig {
  int iterations = 300;
  std::size_t n_per_class = 1000;
  std::size_t k_select = 10;
  std::vector<ModelKind> model_set;  // empty selects all importance-capable kinds
  std::uint64_t master_seed = 0;
  Hyperparams hyperparams{};
  int threads = 1;  // iteration workers; results identical for any value
};

/// Per (model, feature) selection counts over the run.
struct SelectionFrequencyTable {
  std::vector<ModelKind> models;
  std::vector<std::string> feature_names;
  std::vector<std::vector<std::uint32_t>> counts;  // [model][feature]
  int iterations = 0;

  double frequency(std::size_t model, std::size_t feature) const {
    return static_cast<double>(counts[model][feature]) / static_cast<double>(iterations);
  }
};

struct StabilityResult {
  SelectionFrequencyTable table;
  /// All features, ranked by mean selection frequency across models
  /// (descending; ties by ascending index).
  std::vector<std::size_t> consensus;
  /// First k_select entries of consensus.
  std::vector<std::size_t> top_stable;
  /// Seed used by each iteration, in iteration order.
  std::vector<std::uint64_t> iteration_seeds;
};

/// Run the protocol. Deterministic in cfg for any thread count: per-iteration
/// seeds derive from (master_seed, iteration) and results merge in iteration
/// order. Requires d normalized and both class populations >= n_per_class.
StabilityResult run_stability(const Dataset& d, const StabilityConfig& cfg);

/// Consensus ranking by unweighted mean selection frequency across models.
std::vector<std::size_t> aggregate(const SelectionFrequencyTable& table);

/// Dataset restricted to the selected feature columns (given order); labels
/// unchanged. Indices must be distinct and non-empty.
Dataset reduce_dataset(const Dataset& d, const std::vector<std::size_t>& selected);

/// model x feature selection-frequency matrix as CSV (the Figure 3 input).
std::string frequency_csv(const SelectionFrequencyTable& table);

/// Consensus ranking as CSV: rank,feature,mean_frequency (the Figure 4 input).
std::string consensus_csv(const StabilityResult& result);

}  // namespace surveyq
