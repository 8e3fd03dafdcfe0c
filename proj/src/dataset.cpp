#include "surveyq/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "surveyq/error.hpp"
#include "surveyq/rng.hpp"

namespace surveyq {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Binary: return "binary";
    case FeatureKind::Ordinal: return "ordinal";
    case FeatureKind::Continuous: return "continuous";
  }
  return "continuous";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "binary") return FeatureKind::Binary;
  if (s == "ordinal") return FeatureKind::Ordinal;
  if (s == "continuous") return FeatureKind::Continuous;
  throw InputError("unknown feature kind '" + s + "'");
}

FeatureSchema::FeatureSchema(std::string label_name, std::vector<FeatureSpec> features)
    : label_name_(std::move(label_name)), features_(std::move(features)) {
  if (label_name_.empty()) throw std::invalid_argument("schema: empty label name");
  std::set<std::string> seen;
  for (const auto& f : features_) {
    if (f.name.empty()) throw std::invalid_argument("schema: empty feature name");
    if (f.name == label_name_)
      throw std::invalid_argument("schema: feature '" + f.name + "' collides with label column");
    if (!seen.insert(f.name).second)
      throw std::invalid_argument("schema: duplicate feature name '" + f.name + "'");
    if (!(f.min_value <= f.max_value))
      throw std::invalid_argument("schema: feature '" + f.name + "' has min > max");
  }
}

int FeatureSchema::index_of(const std::string& name) const noexcept {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

FeatureSchema FeatureSchema::select(const std::vector<std::size_t>& indices) const {
  std::vector<FeatureSpec> kept;
  kept.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= features_.size())
      throw std::invalid_argument("schema select: feature index " + std::to_string(i) +
                                  " out of range");
    kept.push_back(features_[i]);
  }
  return FeatureSchema(label_name_, std::move(kept));
}

FeatureSchema FeatureSchema::brfss() {
  using K = FeatureKind;
  std::vector<FeatureSpec> f = {
      {"HighBP", K::Binary, 0, 1},
      {"HighChol", K::Binary, 0, 1},
      {"CholCheck", K::Binary, 0, 1},
      {"BMI", K::Continuous, 10, 100},
      {"Smoker", K::Binary, 0, 1},
      {"Stroke", K::Binary, 0, 1},
      {"Diabetes", K::Ordinal, 0, 2},
      {"PhysActivity", K::Binary, 0, 1},
      {"Fruits", K::Binary, 0, 1},
      {"Veggies", K::Binary, 0, 1},
      {"HvyAlcoholConsump", K::Binary, 0, 1},
      {"AnyHealthcare", K::Binary, 0, 1},
      {"NoDocbcCost", K::Binary, 0, 1},
      {"GenHlth", K::Ordinal, 1, 5},
      {"MentHlth", K::Ordinal, 0, 30},
      {"PhysHlth", K::Ordinal, 0, 30},
      {"DiffWalk", K::Binary, 0, 1},
      {"Sex", K::Binary, 0, 1},
      {"Age", K::Ordinal, 1, 13},
      {"Education", K::Ordinal, 1, 6},
      {"Income", K::Ordinal, 1, 8},
  };
  return FeatureSchema("HeartDiseaseorAttack", std::move(f));
}

FeatureSchema FeatureSchema::synthetic(std::size_t p) {
  std::vector<FeatureSpec> f;
  f.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    f.push_back({"f" + std::to_string(i), FeatureKind::Continuous, 0.0, 1.0});
  }
  return FeatureSchema("label", std::move(f));
}

FeatureSchema FeatureSchema::load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open schema file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("schema file " + path.string() + ": " + e.what());
  }
  try {
    std::vector<FeatureSpec> features;
    for (const auto& jf : j.at("features")) {
      FeatureSpec spec;
      spec.name = jf.at("name").get<std::string>();
      spec.kind = feature_kind_from_string(jf.at("kind").get<std::string>());
      spec.min_value = jf.at("min").get<double>();
      spec.max_value = jf.at("max").get<double>();
      features.push_back(std::move(spec));
    }
    return FeatureSchema(j.at("label").get<std::string>(), std::move(features));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("schema file " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError("schema file " + path.string() + ": " + e.what());
  }
}

std::string FeatureSchema::to_json() const {
  nlohmann::json j;
  j["label"] = label_name_;
  j["features"] = nlohmann::json::array();
  for (const auto& f : features_) {
    j["features"].push_back({{"name", f.name},
                             {"kind", to_string(f.kind)},
                             {"min", f.min_value},
                             {"max", f.max_value}});
  }
  return j.dump(2);
}

Dataset::Dataset(FeatureSchema schema, std::vector<double> values, std::vector<int> labels)
    : schema_(std::move(schema)), values_(std::move(values)), labels_(std::move(labels)) {
  const std::size_t p = schema_.feature_count();
  if (p == 0) throw std::invalid_argument("dataset: schema has no features");
  if (values_.size() != labels_.size() * p)
    throw std::invalid_argument("dataset: matrix size does not match rows x features");
  for (int y : labels_) {
    if (y != 0 && y != 1) throw std::invalid_argument("dataset: labels must be 0 or 1");
  }
}

Dataset Dataset::take_rows(const std::vector<std::size_t>& row_indices) const {
  const std::size_t p = cols();
  std::vector<double> values;
  values.reserve(row_indices.size() * p);
  std::vector<int> labels;
  labels.reserve(row_indices.size());
  for (std::size_t r : row_indices) {
    if (r >= rows()) throw std::invalid_argument("take_rows: row index out of range");
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(label(r));
  }
  Dataset out(schema_, std::move(values), std::move(labels));
  out.normalized_ = normalized_;
  out.scalers_ = scalers_;
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const CsvLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + ": missing header row");

  const std::size_t p = schema.feature_count();
  auto header = split_csv_line(line);

  // Map file columns onto schema slots: -1 = label, otherwise feature index.
  std::vector<int> slot(header.size(), -2);
  std::vector<bool> feature_seen(p, false);
  bool label_seen = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name(trim(header[c]));
    if (name == schema.label_name()) {
      if (label_seen) throw InputError(path.string() + ": duplicate label column '" + name + "'");
      label_seen = true;
      slot[c] = -1;
      continue;
    }
    int idx = schema.index_of(name);
    if (idx < 0)
      throw InputError(path.string() + ": header mismatch, unexpected column '" + name + "'");
    if (feature_seen[static_cast<std::size_t>(idx)])
      throw InputError(path.string() + ": duplicate column '" + name + "'");
    feature_seen[static_cast<std::size_t>(idx)] = true;
    slot[c] = idx;
  }
  if (!label_seen)
    throw InputError(path.string() + ": header mismatch, missing label column '" +
                     schema.label_name() + "'");
  for (std::size_t i = 0; i < p; ++i) {
    if (!feature_seen[i])
      throw InputError(path.string() + ": header mismatch, missing column '" +
                       schema.feature(i).name + "'");
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t line_no = 1;
  std::vector<double> row_buf(p, 0.0);
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    auto fields = split_csv_line(view);
    if (fields.size() != header.size())
      throw InputError(path.string() + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    int row_label = -1;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::string_view cell = trim(fields[c]);
      const std::string col_name = slot[c] == -1
                                       ? schema.label_name()
                                       : schema.feature(static_cast<std::size_t>(slot[c])).name;
      double v = 0.0;
      if (!parse_double(cell, v)) {
        throw InputError(path.string() + ": line " + std::to_string(line_no) + ", column '" +
                         col_name + "': non-numeric value '" + std::string(cell) + "'");
      }
      if (slot[c] == -1) {
        if (v != 0.0 && v != 1.0)
          throw InputError(path.string() + ": line " + std::to_string(line_no) + ", column '" +
                           col_name + "': label must be 0 or 1, got " + std::string(cell));
        row_label = static_cast<int>(v);
      } else {
        const auto& spec = schema.feature(static_cast<std::size_t>(slot[c]));
        if (v < spec.min_value || v > spec.max_value) {
          std::string msg = path.string() + ": line " + std::to_string(line_no) + ", column '" +
                            col_name + "': value " + format_double(v) + " outside [" +
                            format_double(spec.min_value) + ", " + format_double(spec.max_value) +
                            "]";
          if (options.range_policy == RangePolicy::Error) throw InputError(msg);
          if (options.warnings) options.warnings->push_back(std::move(msg));
        }
        row_buf[static_cast<std::size_t>(slot[c])] = v;
      }
    }
    values.insert(values.end(), row_buf.begin(), row_buf.end());
    labels.push_back(row_label);
  }
  return Dataset(schema, std::move(values), std::move(labels));
}

void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  const auto& schema = d.schema();
  out << schema.label_name();
  for (const auto& f : schema.features()) out << ',' << f.name;
  out << '\n';
  for (std::size_t r = 0; r < d.rows(); ++r) {
    out << d.label(r);
    for (std::size_t c = 0; c < d.cols(); ++c) out << ',' << format_double(d.value(r, c));
    out << '\n';
  }
  if (!out) throw InputError("write failed: " + path.string());
}

ClassCounts class_counts(const Dataset& d) {
  ClassCounts counts;
  for (int y : d.labels()) {
    if (y == 1) {
      ++counts.positives;
    } else {
      ++counts.negatives;
    }
  }
  return counts;
}

Dataset normalize(const Dataset& d) {
  if (d.normalized()) throw std::invalid_argument("normalize: dataset already normalized");
  const std::size_t n = d.rows();
  const std::size_t p = d.cols();
  std::vector<ColumnScaler> scalers(p);
  for (std::size_t c = 0; c < p; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n; ++r) {
      lo = std::min(lo, d.value(r, c));
      hi = std::max(hi, d.value(r, c));
    }
    if (n == 0) lo = hi = 0.0;
    scalers[c] = {lo, hi};
  }
  return normalize_with(d, scalers);
}

Dataset normalize_with(const Dataset& d, const std::vector<ColumnScaler>& scalers) {
  const std::size_t n = d.rows();
  const std::size_t p = d.cols();
  if (scalers.size() != p)
    throw std::invalid_argument("normalize_with: scaler count does not match feature count");
  std::vector<double> values(n * p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      const double range = scalers[c].max - scalers[c].min;
      // Constant columns map to 0 so feature indices stay stable.
      double v = range > 0.0 ? (d.value(r, c) - scalers[c].min) / range : 0.0;
      values[r * p + c] = std::clamp(v, 0.0, 1.0);
    }
  }
  Dataset out(d.schema(), std::move(values), d.labels());
  out.normalized_ = true;
  out.scalers_ = scalers;
  return out;
}

Dataset synthesize(const FeatureSchema& schema, std::size_t n_neg, std::size_t n_pos,
                   const std::vector<std::size_t>& signal_features, double signal_strength,
                   std::uint64_t seed) {
  const std::size_t p = schema.feature_count();
  std::vector<bool> is_signal(p, false);
  for (std::size_t f : signal_features) {
    if (f >= p)
      throw std::invalid_argument("synthesize: signal feature index " + std::to_string(f) +
                                  " out of range");
    is_signal[f] = true;
  }
  if (signal_strength < 0.0 || signal_strength > 1.0)
    throw std::invalid_argument("synthesize: signal_strength must lie in [0,1]");

  Rng rng(seed);
  const std::size_t n = n_neg + n_pos;
  std::vector<double> values(n * p);
  std::vector<int> labels(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const int y = r < n_neg ? 0 : 1;
    labels[r] = y;
    for (std::size_t c = 0; c < p; ++c) {
      const double u = rng.next_double();
      values[r * p + c] =
          is_signal[c] ? signal_strength * y + (1.0 - signal_strength) * u : u;
    }
  }
  return Dataset(schema, std::move(values), std::move(labels));
}

}  // namespace surveyq
