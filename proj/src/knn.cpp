#include <stdexcept>
#include <string>

#include "trainers.hpp"

namespace surveyq::detail {

KnnModel train_knn(const Dataset& d, const KnnHyperparams& hp) {
  if (static_cast<std::size_t>(hp.k) > d.rows()) {
    throw std::invalid_argument("knn: k=" + std::to_string(hp.k) + " exceeds training rows (" +
                                std::to_string(d.rows()) + ")");
  }
  KnnModel model;
  model.rows = d.rows();
  model.cols = d.cols();
  model.points = d.values();
  model.labels = d.labels();
  model.k = hp.k;
  model.metric = hp.metric;
  return model;
}

}  // namespace surveyq::detail
