#pragma once

#include <filesystem>
#include <string>

#include "aif/model.hpp"
#include "json.hpp"

namespace aif {

/// Builds a model from its JSON document without validating it.
/// Throws Error(Parse) for missing fields or wrong shapes/types.
GenerativeModel model_from_json(const nlohmann::json& doc);

nlohmann::json model_to_json(const GenerativeModel& model);

/// Reads and parses a JSON file. Throws Error(Parse) on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Parses and validates; throws Error(InvalidModel) when validation fails.
GenerativeModel load_model(const std::filesystem::path& path);

void save_model(const GenerativeModel& model, const std::filesystem::path& path);

}  // namespace aif
