#pragma once

#include <nlohmann/json.hpp>
#include <string>

namespace psfront {

// Validated job description; `doc` carries the full configuration with
// defaults filled in (this is what run directories store as run.json).
struct JobConfig {
    std::string mode;
    nlohmann::json doc;
};

// Schema validation: unknown keys are rejected anywhere in the document,
// required keys per mode are enforced, and defaults are resolved.
JobConfig load_config(const nlohmann::json& j);
JobConfig load_config_file(const std::string& path);

}  // namespace psfront
