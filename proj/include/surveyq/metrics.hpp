#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surveyq/classifiers.hpp"
#include "surveyq/dataset.hpp"

namespace surveyq {

/// Counts of a binary evaluation; positive class = heart disease (label 1).
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

/// The five performance measures. A ratio with a zero denominator is
/// reported as 0 with its `*_defined` flag cleared.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;  // sensitivity
  double specificity = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;
  bool recall_defined = true;
  bool specificity_defined = true;
  bool f1_defined = true;
};

/// Evaluate a model over every test row. `threads` splits the rows across
/// workers; counts are merged, so the result is identical for any value.
ConfusionMatrix confusion(const TrainedModel& model, const Dataset& test, int threads = 1);

/// Derive the metric report. Throws std::invalid_argument on an empty matrix.
MetricsReport compute(const ConfusionMatrix& c);

// Tables 1/2-style rendering: one row per model, before/after panels.
struct ModelMetricsRow {
  std::string model;
  MetricsReport before;
  std::optional<MetricsReport> after;
};

/// Aligned two-panel text table. Undefined metrics render as "0*".
std::string render_metrics_table(const std::vector<ModelMetricsRow>& rows, const std::string& title);

/// Machine-readable form: model,phase,accuracy,precision,recall,specificity,f1,undefined.
std::string metrics_csv(const std::vector<ModelMetricsRow>& rows);

}  // namespace surveyq
