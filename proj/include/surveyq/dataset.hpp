#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace surveyq {

enum class FeatureKind { Binary, Ordinal, Continuous };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

/// One survey question: name, value kind, and the inclusive range of
/// values a well-formed answer may take.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
  double min_value = 0.0;
  double max_value = 1.0;
};

/**
 * Ordered feature list plus the label column name. Immutable once built;
 * construction validates that names are unique and non-empty and that
 * every range satisfies min <= max.
 */
class FeatureSchema {
 public:
  FeatureSchema(std::string label_name, std::vector<FeatureSpec> features);

  std::size_t feature_count() const noexcept { return features_.size(); }
  const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
  const std::vector<FeatureSpec>& features() const noexcept { return features_; }
  const std::string& label_name() const noexcept { return label_name_; }

  /// Index of a feature by name, or -1.
  int index_of(const std::string& name) const noexcept;

  /// Schema restricted to the given feature indices, in the given order.
  FeatureSchema select(const std::vector<std::size_t>& indices) const;

  /// The 21-question BRFSS heart-disease schema in published column order,
  /// label column HeartDiseaseorAttack.
  static FeatureSchema brfss();

  /// p continuous features f0..f{p-1} on [0,1]; used by synthetic fixtures.
  static FeatureSchema synthetic(std::size_t p);

  /// Load a schema from a JSON file (see README for the format).
  static FeatureSchema load_json(const std::filesystem::path& path);

  std::string to_json() const;

 private:
  std::string label_name_;
  std::vector<FeatureSpec> features_;
};

/// Per-column min-max transform captured at normalization time so the
/// identical mapping can be applied to held-out data.
struct ColumnScaler {
  double min = 0.0;
  double max = 1.0;
};

struct ClassCounts {
  std::size_t negatives = 0;
  std::size_t positives = 0;
};

/**
 * In-memory survey dataset: an n x p row-major value matrix, one binary
 * label per row (1 = heart disease or attack), and the schema describing
 * the columns. Immutable after construction; safe to share across threads.
 */
class Dataset {
 public:
  Dataset(FeatureSchema schema, std::vector<double> values, std::vector<int> labels);

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return schema_.feature_count(); }

  double value(std::size_t row, std::size_t col) const {
    return values_[row * cols() + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  int label(std::size_t row) const { return labels_[row]; }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const FeatureSchema& schema() const noexcept { return schema_; }

  bool normalized() const noexcept { return normalized_; }
  const std::vector<ColumnScaler>& scalers() const noexcept { return scalers_; }

  /// Dataset containing the given source rows, in order. Scaling state
  /// carries over: a subset of a normalized dataset is still normalized.
  Dataset take_rows(const std::vector<std::size_t>& row_indices) const;

 private:
  friend Dataset normalize(const Dataset& d);
  friend Dataset normalize_with(const Dataset& d, const std::vector<ColumnScaler>& scalers);
  friend Dataset reduce_dataset(const Dataset& d, const std::vector<std::size_t>& selected);

  FeatureSchema schema_;
  std::vector<double> values_;
  std::vector<int> labels_;
  bool normalized_ = false;
  std::vector<ColumnScaler> scalers_;
};

/// What to do with a cell whose value falls outside the schema range.
enum class RangePolicy { Warn, Error };

struct CsvLoadOptions {
  RangePolicy range_policy = RangePolicy::Warn;
  /// When set, out-of-range warnings are appended here (one per cell).
  std::vector<std::string>* warnings = nullptr;
};

/**
 * Load a survey CSV. The header must contain exactly the label column and
 * every schema feature by name (any column order); rows are stored in file
 * order. Values are parsed as decimal reals; labels must be 0 or 1.
 * Throws InputError naming the file line and column on any malformed cell.
 */
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const CsvLoadOptions& options = {});

/// Write a dataset as CSV (label column first, then schema-ordered
/// features) using shortest round-trip decimal text.
void save_csv(const Dataset& d, const std::filesystem::path& path);

ClassCounts class_counts(const Dataset& d);

/**
 * Min-max normalize every column into [0,1] independently:
 * x' = (x - min) / (max - min). Constant columns map to all zeros. The
 * per-column (min, max) pairs are retained on the result for reuse on
 * held-out data. Throws std::invalid_argument if already normalized.
 */
Dataset normalize(const Dataset& d);

/// Apply previously captured column scalers (training-set min/max) to
/// another dataset; results are clipped to [0,1].
Dataset normalize_with(const Dataset& d, const std::vector<ColumnScaler>& scalers);

/**
 * Deterministic synthetic dataset for desk-scale runs. Signal features take
 * value strength*label + (1-strength)*u with u uniform on [0,1), so the
 * class separation of a signal column is exactly `signal_strength`; all
 * other features are label-independent uniform noise. Rows are ordered
 * negatives first.
 */
Dataset synthesize(const FeatureSchema& schema, std::size_t n_neg, std::size_t n_pos,
                   const std::vector<std::size_t>& signal_features, double signal_strength,
                   std::uint64_t seed);

}  // namespace surveyq
