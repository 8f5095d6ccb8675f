#pragma once

// Scenario files: a versioned JSON tree whose keys mirror Scenario.
// Environment variables ADSBRANGE_<KEY> override entries; nested keys are
// joined with a double underscore (ADSBRANGE_EM__RESTARTS=3). Values are
// parsed as JSON when possible and taken as strings otherwise.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adsbrange/harness.hpp"

namespace adsbrange {

inline constexpr std::string_view kEnvPrefix = "ADSBRANGE_";

nlohmann::json scenario_to_json(const Scenario& scenario);
/// Keys missing from `j` keep their defaults; unknown keys are rejected.
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& path);

/// Applies (name, value) overrides, where names carry the prefix.
void apply_overrides(nlohmann::json& tree,
                     const std::vector<std::pair<std::string, std::string>>& variables,
                     std::string_view prefix = kEnvPrefix);

/// Collects prefixed variables from the process environment.
std::vector<std::pair<std::string, std::string>> environment_overrides(std::string_view prefix = kEnvPrefix);

}  // namespace adsbrange
