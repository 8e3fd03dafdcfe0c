#pragma once

#include <filesystem>
#include <string>

#include "surveyq/classifiers.hpp"

namespace surveyq {

/// Serialize a trained model to versioned JSON text. Doubles use shortest
/// round-trip encoding, so save/load reproduces parameters bit-exactly.
std::string model_to_json(const TrainedModel& model);

/// Parse a model back. Throws InputError on malformed or version-mismatched
/// input.
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace surveyq
