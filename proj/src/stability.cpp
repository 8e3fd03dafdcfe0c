#include "surveyq/stability.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "surveyq/error.hpp"
#include "surveyq/rng.hpp"
#include "surveyq/sampling.hpp"

namespace surveyq {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

StabilityResult run_stability(const Dataset& d, const StabilityConfig& cfg) {
  if (cfg.iterations < 1) throw std::invalid_argument("stability: iterations must be >= 1");
  if (!d.normalized()) throw std::invalid_argument("stability: dataset is not normalized");
  const std::size_t p = d.cols();
  if (cfg.k_select < 1 || cfg.k_select > p)
    throw std::invalid_argument("stability: k_select out of range [1, " + std::to_string(p) + "]");
  std::vector<ModelKind> models =
      cfg.model_set.empty() ? importance_capable_kinds() : cfg.model_set;
  for (ModelKind kind : models) {
    if (!has_embedded_importance(kind))
      throw std::invalid_argument("stability: model " + to_string(kind) +
                                  " has no embedded importance");
  }
  const ClassCounts counts = class_counts(d);
  if (counts.negatives < cfg.n_per_class || counts.positives < cfg.n_per_class) {
    throw InfeasibleError("stability: class populations (" + std::to_string(counts.negatives) +
                          ", " + std::to_string(counts.positives) + ") below n_per_class=" +
                          std::to_string(cfg.n_per_class));
  }

  const std::size_t n_iter = static_cast<std::size_t>(cfg.iterations);
  const std::size_t n_models = models.size();

  // selections[i][m] holds model m's top-k feature indices for iteration i.
  std::vector<std::vector<std::vector<std::size_t>>> selections(n_iter);
  std::vector<std::uint64_t> iteration_seeds(n_iter);
  for (std::size_t i = 0; i < n_iter; ++i) {
    iteration_seeds[i] = derive_seed(cfg.master_seed, i);
  }

  auto run_iteration = [&](std::size_t i) {
    const std::uint64_t seed = iteration_seeds[i];
    // Sub-seed 0 draws the shared balanced sample; model m uses sub-seed m+1.
    const Dataset sample =
        balanced_sample(d, SampleSpec{cfg.n_per_class, derive_seed(seed, 0)});
    auto& per_model = selections[i];
    per_model.resize(n_models);
    for (std::size_t m = 0; m < n_models; ++m) {
      const TrainedModel model =
          train(models[m], sample, cfg.hyperparams, Rng(derive_seed(seed, m + 1)));
      const auto imp = importance(model);
      per_model[m] = top_k(*imp, cfg.k_select);
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.threads, 1)), n_iter);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_iter; ++i) run_iteration(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < n_iter; i += workers) run_iteration(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  StabilityResult result;
  result.table.models = models;
  for (const auto& f : d.schema().features()) result.table.feature_names.push_back(f.name);
  result.table.iterations = cfg.iterations;
  result.table.counts.assign(n_models, std::vector<std::uint32_t>(p, 0));
  // Merge in iteration order so the outcome is schedule-invariant.
  for (std::size_t i = 0; i < n_iter; ++i) {
    for (std::size_t m = 0; m < n_models; ++m) {
      for (std::size_t f : selections[i][m]) ++result.table.counts[m][f];
    }
  }
  result.consensus = aggregate(result.table);
  result.top_stable.assign(result.consensus.begin(),
                           result.consensus.begin() + static_cast<std::ptrdiff_t>(cfg.k_select));
  result.iteration_seeds = std::move(iteration_seeds);
  return result;
}

std::vector<std::size_t> aggregate(const SelectionFrequencyTable& table) {
  const std::size_t n_models = table.models.size();
  const std::size_t p = table.feature_names.size();
  if (n_models == 0) throw std::invalid_argument("aggregate: empty table");
  for (const auto& row : table.counts) {
    if (row.size() != p) throw std::invalid_argument("aggregate: ragged table");
  }
  std::vector<double> mean_frequency(p, 0.0);
  for (std::size_t m = 0; m < n_models; ++m) {
    for (std::size_t f = 0; f < p; ++f) mean_frequency[f] += table.frequency(m, f);
  }
  for (double& v : mean_frequency) v /= static_cast<double>(n_models);

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mean_frequency[a] != mean_frequency[b]) return mean_frequency[a] > mean_frequency[b];
    return a < b;
  });
  return order;
}

Dataset reduce_dataset(const Dataset& d, const std::vector<std::size_t>& selected) {
  if (selected.empty()) throw std::invalid_argument("reduce_dataset: empty feature selection");
  std::vector<bool> seen(d.cols(), false);
  for (std::size_t f : selected) {
    if (f >= d.cols())
      throw std::invalid_argument("reduce_dataset: feature index " + std::to_string(f) +
                                  " out of range");
    if (seen[f])
      throw std::invalid_argument("reduce_dataset: duplicate feature index " + std::to_string(f));
    seen[f] = true;
  }
  const std::size_t n = d.rows();
  std::vector<double> values(n * selected.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < selected.size(); ++j) {
      values[r * selected.size() + j] = d.value(r, selected[j]);
    }
  }
  Dataset out(d.schema().select(selected), std::move(values), d.labels());
  out.normalized_ = d.normalized();
  if (d.normalized()) {
    out.scalers_.reserve(selected.size());
    for (std::size_t f : selected) out.scalers_.push_back(d.scalers()[f]);
  }
  return out;
}

std::string frequency_csv(const SelectionFrequencyTable& table) {
  std::ostringstream os;
  os << "model";
  for (const auto& name : table.feature_names) os << ',' << name;
  os << '\n';
  for (std::size_t m = 0; m < table.models.size(); ++m) {
    os << to_string(table.models[m]);
    for (std::size_t f = 0; f < table.feature_names.size(); ++f) {
      os << ',' << format_double(table.frequency(m, f));
    }
    os << '\n';
  }
  return os.str();
}

std::string consensus_csv(const StabilityResult& result) {
  const auto& table = result.table;
  const std::size_t n_models = table.models.size();
  std::ostringstream os;
  os << "rank,feature,mean_frequency\n";
  for (std::size_t rank = 0; rank < result.consensus.size(); ++rank) {
    const std::size_t f = result.consensus[rank];
    double mean = 0.0;
    for (std::size_t m = 0; m < n_models; ++m) mean += table.frequency(m, f);
    mean /= static_cast<double>(n_models);
    os << (rank + 1) << ',' << table.feature_names[f] << ',' << format_double(mean) << '\n';
  }
  return os.str();
}

}  // namespace surveyq
