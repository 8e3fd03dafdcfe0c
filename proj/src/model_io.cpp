#include "surveyq/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "surveyq/error.hpp"

namespace surveyq {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json tree_to_json(const DecisionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back({n.feature, n.threshold, n.value, n.left, n.right});
  }
  return nodes;
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree tree;
  for (const auto& jn : j) {
    TreeNode n;
    n.feature = jn.at(0).get<int>();
    n.threshold = jn.at(1).get<double>();
    n.value = jn.at(2).get<double>();
    n.left = jn.at(3).get<int>();
    n.right = jn.at(4).get<int>();
    tree.nodes.push_back(n);
  }
  return tree;
}

json params_to_json(const ModelParams& params) {
  json j;
  std::visit(
      [&j](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          j["weights"] = m.weights;
          j["intercept"] = m.intercept;
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          j["split_gain"] = m.split_gain;
          j["trees"] = json::array();
          for (const auto& t : m.trees) j["trees"].push_back(tree_to_json(t));
        } else if constexpr (std::is_same_v<T, BoostModel>) {
          j["base_score"] = m.base_score;
          j["shrinkage"] = m.shrinkage;
          j["split_gain"] = m.split_gain;
          j["trees"] = json::array();
          for (const auto& t : m.trees) j["trees"].push_back(tree_to_json(t));
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          j["rows"] = m.rows;
          j["cols"] = m.cols;
          j["points"] = m.points;
          j["labels"] = m.labels;
          j["k"] = m.k;
          j["metric"] = m.metric == DistanceMetric::Euclidean ? "euclidean" : "manhattan";
        } else if constexpr (std::is_same_v<T, GnbModel>) {
          j["log_prior"] = m.log_prior;
          j["mean_neg"] = m.mean[0];
          j["mean_pos"] = m.mean[1];
          j["variance_neg"] = m.variance[0];
          j["variance_pos"] = m.variance[1];
        }
      },
      params);
  return j;
}

ModelParams params_from_json(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::LogReg:
    case ModelKind::LinearSvm:
    case ModelKind::SgdLogReg: {
      LinearModel m;
      m.weights = j.at("weights").get<std::vector<double>>();
      m.intercept = j.at("intercept").get<double>();
      return m;
    }
    case ModelKind::RandomForest: {
      ForestModel m;
      m.split_gain = j.at("split_gain").get<std::vector<double>>();
      for (const auto& jt : j.at("trees")) m.trees.push_back(tree_from_json(jt));
      return m;
    }
    case ModelKind::GradBoost: {
      BoostModel m;
      m.base_score = j.at("base_score").get<double>();
      m.shrinkage = j.at("shrinkage").get<double>();
      m.split_gain = j.at("split_gain").get<std::vector<double>>();
      for (const auto& jt : j.at("trees")) m.trees.push_back(tree_from_json(jt));
      return m;
    }
    case ModelKind::Knn: {
      KnnModel m;
      m.rows = j.at("rows").get<std::size_t>();
      m.cols = j.at("cols").get<std::size_t>();
      m.points = j.at("points").get<std::vector<double>>();
      m.labels = j.at("labels").get<std::vector<int>>();
      m.k = j.at("k").get<int>();
      m.metric = j.at("metric").get<std::string>() == "manhattan" ? DistanceMetric::Manhattan
                                                                  : DistanceMetric::Euclidean;
      return m;
    }
    case ModelKind::GaussianNb: {
      GnbModel m;
      m.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      m.mean[0] = j.at("mean_neg").get<std::vector<double>>();
      m.mean[1] = j.at("mean_pos").get<std::vector<double>>();
      m.variance[0] = j.at("variance_neg").get<std::vector<double>>();
      m.variance[1] = j.at("variance_pos").get<std::vector<double>>();
      return m;
    }
  }
  throw InputError("model: unknown kind");
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = to_string(model.kind());
  j["feature_names"] = model.feature_names();
  j["params"] = params_to_json(model.params());
  return j.dump();
}

TrainedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw InputError("model: unsupported format version " + std::to_string(version));
    }
    const auto kind = model_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw InputError("model: unknown kind '" + j.at("kind").get<std::string>() + "'");
    auto names = j.at("feature_names").get<std::vector<std::string>>();
    return TrainedModel(*kind, params_from_json(*kind, j.at("params")), std::move(names));
  } catch (const json::exception& e) {
    throw InputError(std::string("model: malformed document: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << model_to_json(model) << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace surveyq
