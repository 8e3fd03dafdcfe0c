#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace surveyq {

enum class SurveyForm { FullSurvey, ReducedSurvey };

std::string to_string(SurveyForm form);

/// Recorded per-respondent administration times, in minutes.
struct TimeSamples {
  std::vector<double> values;
  SurveyForm form = SurveyForm::FullSurvey;
};

/// One column of positive reals, optional header. Throws InputError on
/// empty files or nonpositive values.
TimeSamples load_time_csv(const std::filesystem::path& path, SurveyForm form);

struct TriangularParams {
  double lower = 0.0;  // a
  double mode = 0.0;   // c
  double upper = 1.0;  // b
};

struct LogisticParams {
  double location = 0.0;
  double scale = 1.0;
};

enum class DistFamily { Triangular, Logistic };

std::string to_string(DistFamily family);

struct FittedDistribution {
  DistFamily family = DistFamily::Triangular;
  std::variant<TriangularParams, LogisticParams> params;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double mean = 0.0;
};

double triangular_pdf(const TriangularParams& p, double x);
double triangular_log_likelihood(const TriangularParams& p, std::span<const double> samples);
double triangular_mean(const TriangularParams& p);  // (a + b + c) / 3

double logistic_pdf(const LogisticParams& p, double x);
double logistic_log_likelihood(const LogisticParams& p, std::span<const double> samples);
double logistic_mean(const LogisticParams& p);  // location

/// Akaike information criterion: 2k - 2 logL.
double aic(double log_likelihood, int param_count);

/**
 * Triangular fit: support pinned just outside the sample extremes
 * (a = min - eps, b = max + eps with eps = 1e-6 * range, keeping the density
 * finite at every sample), mode located by golden-section search on the
 * log-likelihood. Requires >= 3 samples with nonzero range.
 */
FittedDistribution fit_triangular(const TimeSamples& s);

/**
 * Logistic fit: maximum likelihood by damped Newton iteration from the
 * moment initializer (location = mean, scale = sqrt(3)*sd/pi); converges
 * when the gradient norm drops below 1e-10 (200 iteration cap). Requires
 * >= 2 samples with nonzero variance.
 */
FittedDistribution fit_logistic(const TimeSamples& s);

/// Both family fits plus the AIC winner; a family whose preconditions fail
/// is absent. Ties go to the family with fewer parameters (logistic).
struct BestFit {
  std::optional<FittedDistribution> triangular;
  std::optional<FittedDistribution> logistic;
  DistFamily winner = DistFamily::Logistic;

  const FittedDistribution& best() const {
    return winner == DistFamily::Triangular ? *triangular : *logistic;
  }
};

BestFit best_fit(const TimeSamples& s);

/// 100 * (1 - mean_after / mean_before). Throws on nonpositive baseline.
double reduction_percent(double mean_before, double mean_after);

}  // namespace surveyq
