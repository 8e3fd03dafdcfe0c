#pragma once

namespace surveyq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace surveyq
