#pragma once

// Internal per-kind trainers; the public entry point is train() in
// classifiers.cpp, which validates inputs and dispatches here.

#include "surveyq/classifiers.hpp"
#include "surveyq/dataset.hpp"
#include "surveyq/rng.hpp"

namespace surveyq::detail {

LinearModel train_logreg(const Dataset& d, const LinearHyperparams& hp);
LinearModel train_sgd_logreg(const Dataset& d, const LinearHyperparams& hp, Rng& rng);
LinearModel train_linear_svm(const Dataset& d, const LinearHyperparams& hp, Rng& rng);
ForestModel train_forest(const Dataset& d, const ForestHyperparams& hp, Rng& rng);
BoostModel train_gradboost(const Dataset& d, const BoostHyperparams& hp);
KnnModel train_knn(const Dataset& d, const KnnHyperparams& hp);
GnbModel train_gnb(const Dataset& d, const GnbHyperparams& hp);

}  // namespace surveyq::detail
