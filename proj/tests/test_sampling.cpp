#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "helpers.hpp"
#include "surveyq/error.hpp"
#include "surveyq/sampling.hpp"

using namespace surveyq;

namespace {

/// Row fingerprints for multiset comparisons (rows are a.s. unique for
/// continuous synthetic data).
std::vector<std::vector<double>> row_multiset(const Dataset& d) {
  std::vector<std::vector<double>> rows;
  rows.reserve(d.rows());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    std::vector<double> row(d.row(r).begin(), d.row(r).end());
    row.push_back(static_cast<double>(d.label(r)));
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

TEST_CASE("balanced_sample draws the requested counts") {
  const auto d = synthesize(FeatureSchema::synthetic(3), 500, 120, {0}, 0.5, 1);
  const auto sample = balanced_sample(d, {100, 42});
  CHECK(sample.rows() == 200);
  const auto counts = class_counts(sample);
  CHECK(counts.negatives == 100);
  CHECK(counts.positives == 100);
}

TEST_CASE("balanced_sample n_per_class=0 yields an empty dataset") {
  const auto d = synthesize(FeatureSchema::synthetic(2), 10, 10, {}, 0.0, 2);
  const auto sample = balanced_sample(d, {0, 1});
  CHECK(sample.rows() == 0);
}

TEST_CASE("balanced_sample reports the deficient class") {
  const auto d = synthesize(FeatureSchema::synthetic(2), 50, 8, {}, 0.0, 3);
  CHECK_THROWS_WITH_AS(balanced_sample(d, {10, 0}), doctest::Contains("positive"),
                       InfeasibleError);
  CHECK_THROWS_WITH_AS(balanced_sample(d, {60, 0}), doctest::Contains("negative"),
                       InfeasibleError);
}

TEST_CASE("balanced_sample never duplicates a source row") {
  const auto d = synthesize(FeatureSchema::synthetic(4), 80, 80, {}, 0.0, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sample = balanced_sample(d, {40, seed});
    const auto rows = row_multiset(sample);
    CHECK(std::adjacent_find(rows.begin(), rows.end()) == rows.end());
  }
}

TEST_CASE("balanced_sample is deterministic in the seed") {
  const auto d = synthesize(FeatureSchema::synthetic(3), 60, 60, {}, 0.0, 5);
  const auto s1 = balanced_sample(d, {30, 9});
  const auto s2 = balanced_sample(d, {30, 9});
  CHECK(s1.values() == s2.values());
  CHECK(s1.labels() == s2.labels());
}

TEST_CASE("balanced_sample inclusion is uniform over repeated draws") {
  // Negative-row inclusion frequency ~= n_per_class / negatives within
  // 5 standard errors over 1000 reseeded draws.
  const std::size_t negatives = 50, positives = 50, per_class = 10;
  const auto d = synthesize(FeatureSchema::synthetic(1), negatives, positives, {}, 0.0, 6);
  const int repeats = 1000;

  std::map<double, int> inclusion;  // negative rows keyed by their unique value
  for (std::size_t r = 0; r < negatives; ++r) inclusion[d.value(r, 0)] = 0;
  for (int rep = 0; rep < repeats; ++rep) {
    const auto sample = balanced_sample(d, {per_class, static_cast<std::uint64_t>(rep)});
    for (std::size_t r = 0; r < sample.rows(); ++r) {
      if (sample.label(r) == 0) ++inclusion.at(sample.value(r, 0));
    }
  }
  const double expected = static_cast<double>(per_class) / static_cast<double>(negatives);
  const double se = std::sqrt(expected * (1.0 - expected) / repeats);
  for (const auto& [value, count] : inclusion) {
    const double freq = static_cast<double>(count) / repeats;
    CHECK(std::abs(freq - expected) <= 5.0 * se);
  }
}

TEST_CASE("train_test_split: stratified counts on the balanced fixture") {
  const auto d = synthesize(FeatureSchema::synthetic(3), 1000, 1000, {0}, 0.5, 7);
  const auto [train, test] = train_test_split(d, 0.3, 11);
  CHECK(train.rows() == 1400);
  CHECK(test.rows() == 600);
  // Exhaustive tally of the output halves.
  const auto train_counts = class_counts(train);
  const auto test_counts = class_counts(test);
  CHECK(test_counts.positives == 300);
  CHECK(test_counts.negatives == 300);
  CHECK(train_counts.positives == 700);
  CHECK(train_counts.negatives == 700);
}

TEST_CASE("train_test_split halves reassemble the input multiset") {
  const auto d = synthesize(FeatureSchema::synthetic(3), 33, 21, {}, 0.0, 8);
  const auto [train, test] = train_test_split(d, 0.4, 3);
  auto combined = row_multiset(train);
  auto test_rows = row_multiset(test);
  combined.insert(combined.end(), test_rows.begin(), test_rows.end());
  std::sort(combined.begin(), combined.end());
  CHECK(combined == row_multiset(d));
}

TEST_CASE("train_test_split is deterministic in the seed") {
  const auto d = synthesize(FeatureSchema::synthetic(2), 5, 5, {}, 0.0, 9);
  const auto [tr1, te1] = train_test_split(d, 0.5, 4);
  const auto [tr2, te2] = train_test_split(d, 0.5, 4);
  CHECK(tr1.values() == tr2.values());
  CHECK(te1.values() == te2.values());
  CHECK(tr1.labels() == tr2.labels());
}

TEST_CASE("train_test_split guards degenerate fractions") {
  const auto d = synthesize(FeatureSchema::synthetic(2), 2, 2, {}, 0.0, 10);
  CHECK_THROWS_AS(train_test_split(d, 0.999, 1), InfeasibleError);
  CHECK_THROWS_AS(train_test_split(d, 0.001, 1), InfeasibleError);
  CHECK_THROWS_AS(train_test_split(d, 1.5, 1), std::invalid_argument);

  const auto single = synthesize(FeatureSchema::synthetic(2), 1, 5, {}, 0.0, 11);
  CHECK_THROWS_AS(train_test_split(single, 0.5, 1), InfeasibleError);
}
