#pragma once

#include <cstdint>
#include <utility>

#include "surveyq/dataset.hpp"

namespace surveyq {

struct SampleSpec {
  std::size_t n_per_class = 1000;
  std::uint64_t seed = 0;
};

/**
 * Draw n_per_class rows of each class uniformly without replacement and
 * return them in shuffled order. Throws InfeasibleError naming the class
 * and its population when a class is too small.
 */
Dataset balanced_sample(const Dataset& d, const SampleSpec& spec);

/**
 * Stratified split: per class, round(test_fraction * class_size) rows go to
 * the test half. Union of the halves is the input, intersection is empty.
 * Throws InfeasibleError when either side of either class would be empty.
 */
std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double test_fraction,
                                             std::uint64_t seed);

}  // namespace surveyq
