#pragma once

#include <stdexcept>
#include <string>

namespace surveyq {

/// Malformed input: unreadable files, bad headers, unparseable cells.
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Well-formed input that cannot support the requested analysis,
/// e.g. a class population smaller than the requested sample size.
/// The CLI maps this to exit code 1.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace surveyq
