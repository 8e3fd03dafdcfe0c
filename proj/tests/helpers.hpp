#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here stays independent of the library's fitting/training code paths: the
// samplers are inverse-CDF constructions used to generate ground truth.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "surveyq/dataset.hpp"
#include "surveyq/rng.hpp"
#include "surveyq/surveytime.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("surveyq_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

/// Normalized planted-signal fixture: n_neg+n_pos rows, p features, the
/// given signal columns separated by `strength` between classes.
inline surveyq::Dataset planted_fixture(std::size_t n_neg, std::size_t n_pos, std::size_t p,
                                        const std::vector<std::size_t>& signal, double strength,
                                        std::uint64_t seed) {
  auto raw = surveyq::synthesize(surveyq::FeatureSchema::synthetic(p), n_neg, n_pos, signal,
                                 strength, seed);
  return surveyq::normalize(raw);
}

/// Inverse-CDF sampler for the triangular distribution (generator oracle).
inline std::vector<double> sample_triangular(const surveyq::TriangularParams& p, std::size_t n,
                                             std::uint64_t seed) {
  surveyq::Rng rng(seed);
  const double split = (p.mode - p.lower) / (p.upper - p.lower);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_double();
    if (u < split) {
      out.push_back(p.lower + std::sqrt(u * (p.upper - p.lower) * (p.mode - p.lower)));
    } else {
      out.push_back(p.upper - std::sqrt((1.0 - u) * (p.upper - p.lower) * (p.upper - p.mode)));
    }
  }
  return out;
}

/// Inverse-CDF sampler for the logistic distribution (generator oracle).
inline std::vector<double> sample_logistic(const surveyq::LogisticParams& p, std::size_t n,
                                           std::uint64_t seed) {
  surveyq::Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.next_double();
    if (u <= 0.0) u = 1e-12;  // keep the quantile finite
    out.push_back(p.location + p.scale * std::log(u / (1.0 - u)));
  }
  return out;
}

inline std::string times_to_csv(const std::vector<double>& values) {
  std::string text = "minutes\n";
  for (double v : values) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    text += buf;
  }
  return text;
}

}  // namespace testutil
