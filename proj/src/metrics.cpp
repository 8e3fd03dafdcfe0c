#include "surveyq/metrics.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace surveyq {

ConfusionMatrix confusion(const TrainedModel& model, const Dataset& test, int threads) {
  if (test.rows() == 0) throw std::invalid_argument("confusion: empty test set");
  if (test.cols() != model.feature_count())
    throw std::invalid_argument("confusion: test set has " + std::to_string(test.cols()) +
                                " features, model expects " +
                                std::to_string(model.feature_count()));

  auto tally_range = [&](std::size_t lo, std::size_t hi, ConfusionMatrix& out) {
    ConfusionMatrix local;
    for (std::size_t r = lo; r < hi; ++r) {
      const int predicted = predict(model, test.row(r)).label;
      const int actual = test.label(r);
      if (actual == 1) {
        predicted == 1 ? ++local.tp : ++local.fn;
      } else {
        predicted == 1 ? ++local.fp : ++local.tn;
      }
    }
    out = local;
  };

  const std::size_t n = test.rows();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    ConfusionMatrix c;
    tally_range(0, n, c);
    return c;
  }
  std::vector<ConfusionMatrix> partial(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(tally_range, n * w / workers, n * (w + 1) / workers, std::ref(partial[w]));
  }
  for (auto& th : pool) th.join();
  ConfusionMatrix c;
  for (const auto& p : partial) {
    c.tp += p.tp;
    c.fp += p.fp;
    c.tn += p.tn;
    c.fn += p.fn;
  }
  return c;
}

MetricsReport compute(const ConfusionMatrix& c) {
  if (c.total() == 0) throw std::invalid_argument("compute: empty confusion matrix");
  MetricsReport r;
  const auto ratio = [](std::uint64_t num, std::uint64_t den, double& out, bool& defined) {
    if (den == 0) {
      out = 0.0;
      defined = false;
    } else {
      out = static_cast<double>(num) / static_cast<double>(den);
      defined = true;
    }
  };
  r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  ratio(c.tp, c.tp + c.fp, r.precision, r.precision_defined);
  ratio(c.tp, c.tp + c.fn, r.recall, r.recall_defined);
  ratio(c.tn, c.tn + c.fp, r.specificity, r.specificity_defined);
  const double pr = r.precision + r.recall;
  if (pr > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / pr;
    r.f1_defined = true;
  } else {
    r.f1 = 0.0;
    r.f1_defined = false;
  }
  return r;
}

namespace {

std::string cell(double value, bool defined) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << value;
  std::string s = os.str();
  if (!defined) s += '*';
  return s;
}

void append_report_cells(std::vector<std::string>& cells, const MetricsReport& m) {
  cells.push_back(cell(m.accuracy, true));
  cells.push_back(cell(m.precision, m.precision_defined));
  cells.push_back(cell(m.recall, m.recall_defined));
  cells.push_back(cell(m.specificity, m.specificity_defined));
  cells.push_back(cell(m.f1, m.f1_defined));
}

}  // namespace

std::string render_metrics_table(const std::vector<ModelMetricsRow>& rows,
                                 const std::string& title) {
  const bool has_after = !rows.empty() && rows.front().after.has_value();
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Model", "Accuracy", "Precision", "Recall", "Specificity", "F1"};
  if (has_after) {
    header.insert(header.end(),
                  {"Accuracy'", "Precision'", "Recall'", "Specificity'", "F1'"});
  }
  grid.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> cells = {row.model};
    append_report_cells(cells, row.before);
    if (row.after) append_report_cells(cells, *row.after);
    grid.push_back(std::move(cells));
  }

  std::vector<std::size_t> widths(grid.front().size(), 0);
  for (const auto& r : grid) {
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  }

  std::ostringstream os;
  os << title << '\n';
  if (has_after) os << "(unprimed columns: before feature selection; primed: after)\n";
  for (std::size_t ri = 0; ri < grid.size(); ++ri) {
    const auto& r = grid[ri];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) os << "  ";
      os << std::left << std::setw(static_cast<int>(widths[i])) << r[i];
    }
    os << '\n';
    if (ri == 0) {
      std::size_t total = 0;
      for (std::size_t w : widths) total += w;
      os << std::string(total + 2 * (widths.size() - 1), '-') << '\n';
    }
  }
  bool any_undefined = false;
  for (const auto& row : rows) {
    const auto check = [&](const MetricsReport& m) {
      any_undefined = any_undefined || !m.precision_defined || !m.recall_defined ||
                      !m.specificity_defined || !m.f1_defined;
    };
    check(row.before);
    if (row.after) check(*row.after);
  }
  if (any_undefined) os << "* metric undefined (zero denominator), reported as 0\n";
  return os.str();
}

std::string metrics_csv(const std::vector<ModelMetricsRow>& rows) {
  std::ostringstream os;
  os << "model,phase,accuracy,precision,recall,specificity,f1,undefined\n";
  os << std::setprecision(17);
  auto line = [&os](const std::string& model, const char* phase, const MetricsReport& m) {
    std::string undefined;
    auto mark = [&undefined](bool defined, const char* name) {
      if (!defined) {
        if (!undefined.empty()) undefined += ';';
        undefined += name;
      }
    };
    mark(m.precision_defined, "precision");
    mark(m.recall_defined, "recall");
    mark(m.specificity_defined, "specificity");
    mark(m.f1_defined, "f1");
    os << model << ',' << phase << ',' << m.accuracy << ',' << m.precision << ',' << m.recall
       << ',' << m.specificity << ',' << m.f1 << ',' << undefined << '\n';
  };
  for (const auto& row : rows) {
    line(row.model, "before", row.before);
    if (row.after) line(row.model, "after", *row.after);
  }
  return os.str();
}

}  // namespace surveyq
