#include "surveyq/surveytime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "surveyq/error.hpp"

namespace surveyq {

namespace {

double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(std::span<const double> v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

std::string to_string(SurveyForm form) {
  return form == SurveyForm::FullSurvey ? "full_survey" : "reduced_survey";
}

std::string to_string(DistFamily family) {
  return family == DistFamily::Triangular ? "triangular" : "logistic";
}

TimeSamples load_time_csv(const std::filesystem::path& path, SurveyForm form) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  TimeSamples samples;
  samples.form = form;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    double v = 0.0;
    auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc{} || res.ptr != line.data() + line.size()) {
      if (line_no == 1) continue;  // header
      throw InputError(path.string() + ": line " + std::to_string(line_no) +
                       ": non-numeric value '" + line + "'");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) +
                       ": survey time must be a positive real, got '" + line + "'");
    }
    samples.values.push_back(v);
  }
  if (samples.values.empty()) throw InputError(path.string() + ": no time samples");
  return samples;
}

double triangular_pdf(const TriangularParams& p, double x) {
  if (x < p.lower || x > p.upper) return 0.0;
  const double width = p.upper - p.lower;
  if (x == p.lower) return p.mode == p.lower ? 2.0 / width : 0.0;
  if (x == p.upper) return p.mode == p.upper ? 2.0 / width : 0.0;
  if (x <= p.mode) return 2.0 * (x - p.lower) / (width * (p.mode - p.lower));
  return 2.0 * (p.upper - x) / (width * (p.upper - p.mode));
}

double triangular_log_likelihood(const TriangularParams& p, std::span<const double> samples) {
  double acc = 0.0;
  for (double x : samples) {
    const double density = triangular_pdf(p, x);
    if (density <= 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(density);
  }
  return acc;
}

double triangular_mean(const TriangularParams& p) { return (p.lower + p.mode + p.upper) / 3.0; }

double logistic_pdf(const LogisticParams& p, double x) {
  const double z = (x - p.location) / p.scale;
  // exp(-z) / (s * (1 + exp(-z))^2), computed via softplus for stability.
  return std::exp(-z - 2.0 * softplus(-z)) / p.scale;
}

double logistic_log_likelihood(const LogisticParams& p, std::span<const double> samples) {
  double acc = 0.0;
  const double log_scale = std::log(p.scale);
  for (double x : samples) {
    const double z = (x - p.location) / p.scale;
    acc += -z - log_scale - 2.0 * softplus(-z);
  }
  return acc;
}

double logistic_mean(const LogisticParams& p) { return p.location; }

double aic(double log_likelihood, int param_count) {
  return 2.0 * static_cast<double>(param_count) - 2.0 * log_likelihood;
}

FittedDistribution fit_triangular(const TimeSamples& s) {
  const auto& v = s.values;
  if (v.size() < 3)
    throw InputError("fit_triangular: need at least 3 samples, got " + std::to_string(v.size()));
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double range = sorted.back() - sorted.front();
  if (range <= 0.0) throw InputError("fit_triangular: all samples equal (zero range)");

  // Support pinned just outside the extremes keeps every density positive.
  const double eps = 1e-6 * range;
  const double a = sorted.front() - eps;
  const double b = sorted.back() + eps;
  const std::size_t n = sorted.size();

  // Between consecutive samples the log-likelihood is convex in the mode,
  // so the maximum sits at a sample point (or at a support endpoint).
  // Prefix/suffix log sums make each candidate O(1).
  std::vector<double> prefix(n + 1, 0.0);  // sum of log(x_j - a), j < i
  std::vector<double> suffix(n + 1, 0.0);  // sum of log(b - x_j), j >= i
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + std::log(sorted[i] - a);
  for (std::size_t i = n; i > 0; --i) suffix[i - 1] = suffix[i] + std::log(b - sorted[i - 1]);

  const double base = static_cast<double>(n) * (std::log(2.0) - std::log(b - a));
  auto loglik_at = [&](double c, std::size_t left_count) {
    // left_count samples satisfy x <= c.
    double acc = base + prefix[left_count] + suffix[left_count];
    if (left_count > 0) acc -= static_cast<double>(left_count) * std::log(c - a);
    if (left_count < n) acc -= static_cast<double>(n - left_count) * std::log(b - c);
    return acc;
  };

  double best_c = sorted.front();
  double best_ll = -std::numeric_limits<double>::infinity();
  auto consider = [&](double c, std::size_t left_count) {
    const double ll = loglik_at(c, left_count);
    if (ll > best_ll) {
      best_ll = ll;
      best_c = c;
    }
  };
  consider(a, 0);
  consider(b, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && sorted[i + 1] == sorted[i]) continue;  // duplicate mode candidate
    consider(sorted[i], i + 1);
  }

  FittedDistribution fit;
  fit.family = DistFamily::Triangular;
  const TriangularParams params{a, best_c, b};
  fit.params = params;
  fit.log_likelihood = best_ll;
  fit.aic = aic(best_ll, 3);
  fit.mean = triangular_mean(params);
  return fit;
}

FittedDistribution fit_logistic(const TimeSamples& s) {
  const auto& v = s.values;
  if (v.size() < 2)
    throw InputError("fit_logistic: need at least 2 samples, got " + std::to_string(v.size()));
  const double sample_mean = mean_of(v);
  const double sample_sd = sd_of(v, sample_mean);
  if (sample_sd <= 0.0) throw InputError("fit_logistic: zero variance");

  const double n = static_cast<double>(v.size());
  // Moment initializer: Var = (pi * scale)^2 / 3.
  double location = sample_mean;
  double scale = std::sqrt(3.0) * sample_sd / M_PI;

  // Mean log-likelihood and its gradient/Hessian in (location, scale).
  auto evaluate = [&](double mu, double sc, double grad[2], double hess[3]) {
    double ll = 0.0;
    grad[0] = grad[1] = 0.0;
    hess[0] = hess[1] = hess[2] = 0.0;
    const double log_scale = std::log(sc);
    for (double x : v) {
      const double z = (x - mu) / sc;
      ll += -z - log_scale - 2.0 * softplus(-z);
      const double g = std::tanh(0.5 * z);    // 2*sigmoid(z) - 1
      const double gp = 0.5 * (1.0 - g * g);  // its z-derivative
      grad[0] += g / sc;
      grad[1] += (z * g - 1.0) / sc;
      hess[0] += -gp / (sc * sc);
      hess[1] += -(z * gp + g) / (sc * sc);
      hess[2] += (-z * z * gp - 2.0 * z * g + 1.0) / (sc * sc);
    }
    ll /= n;
    grad[0] /= n;
    grad[1] /= n;
    hess[0] /= n;
    hess[1] /= n;
    hess[2] /= n;
    return ll;
  };

  constexpr double kGradientTolerance = 1e-10;
  constexpr int kMaxIterations = 200;
  double grad[2], hess[3];
  double ll = evaluate(location, scale, grad, hess);
  double grad_norm = std::max(std::abs(grad[0]), std::abs(grad[1]));
  int iteration = 0;
  while (grad_norm >= kGradientTolerance && iteration < kMaxIterations) {
    ++iteration;
    // Newton step: solve H * delta = -grad (2x2 symmetric).
    const double det = hess[0] * hess[2] - hess[1] * hess[1];
    double d_mu, d_sc;
    if (det > 0.0 && hess[0] < 0.0) {  // H negative definite: ascent direction
      d_mu = -(hess[2] * grad[0] - hess[1] * grad[1]) / det;
      d_sc = -(-hess[1] * grad[0] + hess[0] * grad[1]) / det;
    } else {
      d_mu = grad[0] * scale * scale;  // fallback: scaled gradient ascent
      d_sc = grad[1] * scale * scale;
    }
    double step = 1.0;
    double new_ll = -std::numeric_limits<double>::infinity();
    double new_mu = location, new_sc = scale;
    double new_grad[2] = {0.0, 0.0};
    double new_hess[3] = {0.0, 0.0, 0.0};
    for (int halving = 0; halving < 60; ++halving) {
      new_mu = location + step * d_mu;
      new_sc = scale + step * d_sc;
      if (new_sc > 0.0) {
        new_ll = evaluate(new_mu, new_sc, new_grad, new_hess);
        if (new_ll >= ll) break;
      }
      step *= 0.5;
    }
    if (!(new_ll >= ll)) break;  // no progress in 60 halvings
    location = new_mu;
    scale = new_sc;
    ll = new_ll;
    std::copy(new_grad, new_grad + 2, grad);
    std::copy(new_hess, new_hess + 3, hess);
    grad_norm = std::max(std::abs(grad[0]), std::abs(grad[1]));
  }
  if (grad_norm >= kGradientTolerance) {
    std::ostringstream os;
    os << "fit_logistic: no convergence after " << kMaxIterations
       << " iterations, gradient norm " << grad_norm;
    throw std::runtime_error(os.str());
  }

  FittedDistribution fit;
  fit.family = DistFamily::Logistic;
  const LogisticParams params{location, scale};
  fit.params = params;
  fit.log_likelihood = ll * n;
  fit.aic = aic(fit.log_likelihood, 2);
  fit.mean = logistic_mean(params);
  return fit;
}

BestFit best_fit(const TimeSamples& s) {
  BestFit result;
  std::string errors;
  try {
    result.triangular = fit_triangular(s);
  } catch (const InputError& e) {
    errors += e.what();
  }
  try {
    result.logistic = fit_logistic(s);
  } catch (const InputError& e) {
    if (!errors.empty()) errors += "; ";
    errors += e.what();
  }
  if (!result.triangular && !result.logistic) {
    throw InputError("best_fit: no family could be fitted (" + errors + ")");
  }
  if (!result.triangular) {
    result.winner = DistFamily::Logistic;
  } else if (!result.logistic) {
    result.winner = DistFamily::Triangular;
  } else {
    // Strictly smaller AIC wins; ties favor the 2-parameter logistic.
    result.winner = result.triangular->aic < result.logistic->aic ? DistFamily::Triangular
                                                                  : DistFamily::Logistic;
  }
  return result;
}

double reduction_percent(double mean_before, double mean_after) {
  if (!(mean_before > 0.0))
    throw std::invalid_argument("reduction_percent: baseline mean must be positive");
  if (mean_after < 0.0)
    throw std::invalid_argument("reduction_percent: reduced mean must be nonnegative");
  return 100.0 * (1.0 - mean_after / mean_before);
}

}  // namespace surveyq
