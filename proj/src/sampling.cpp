#include "surveyq/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "surveyq/error.hpp"
#include "surveyq/rng.hpp"

namespace surveyq {

namespace {

std::vector<std::size_t> indices_of_class(const Dataset& d, int label) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    if (d.label(r) == label) out.push_back(r);
  }
  return out;
}

/// First k elements of a Fisher-Yates shuffle: a uniform sample without
/// replacement, in random order.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t k,
                                                    Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.next_below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

Dataset balanced_sample(const Dataset& d, const SampleSpec& spec) {
  auto negatives = indices_of_class(d, 0);
  auto positives = indices_of_class(d, 1);
  if (negatives.size() < spec.n_per_class) {
    throw InfeasibleError("balanced_sample: negative class has " +
                          std::to_string(negatives.size()) + " rows, need " +
                          std::to_string(spec.n_per_class));
  }
  if (positives.size() < spec.n_per_class) {
    throw InfeasibleError("balanced_sample: positive class has " +
                          std::to_string(positives.size()) + " rows, need " +
                          std::to_string(spec.n_per_class));
  }
  Rng rng(spec.seed);
  std::vector<std::size_t> chosen;
  if (spec.n_per_class > 0) {
    chosen = sample_without_replacement(std::move(negatives), spec.n_per_class, rng);
    auto pos = sample_without_replacement(std::move(positives), spec.n_per_class, rng);
    chosen.insert(chosen.end(), pos.begin(), pos.end());
  }
  rng.shuffle(chosen);
  return d.take_rows(chosen);
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("train_test_split: test_fraction must lie in (0,1)");
  Rng rng(seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (int label : {0, 1}) {
    auto members = indices_of_class(d, label);
    if (members.size() < 2) {
      throw InfeasibleError("train_test_split: class " + std::to_string(label) + " has " +
                            std::to_string(members.size()) + " rows, need at least 2");
    }
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(members.size())));
    if (n_test == 0 || n_test == members.size()) {
      throw InfeasibleError("train_test_split: fraction " + std::to_string(test_fraction) +
                            " leaves class " + std::to_string(label) + " empty on one side");
    }
    rng.shuffle(members);
    test_rows.insert(test_rows.end(), members.begin(), members.begin() + n_test);
    train_rows.insert(train_rows.end(), members.begin() + n_test, members.end());
  }
  rng.shuffle(train_rows);
  rng.shuffle(test_rows);
  return {d.take_rows(train_rows), d.take_rows(test_rows)};
}

}  // namespace surveyq
