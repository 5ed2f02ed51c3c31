#pragma once

#include <filesystem>

#include "aif/harness.hpp"
#include "json.hpp"

namespace aif {

/// Environment variable that, when set, replaces the configured output
/// directory.
inline constexpr const char* kOutputDirEnv = "AIF_OUTPUT_DIR";

/// Parses an experiment document. Throws Error(Parse) for malformed fields
/// and Error(Config) for values out of range.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Reads, parses and checks a config file, applying kOutputDirEnv.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace aif
