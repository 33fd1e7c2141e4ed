#pragma once

#include <filesystem>
#include <string>

#include "aflsim/market.hpp"

namespace aflsim {

// Scenario documents are JSON objects with "federation" and "owners" (required)
// and "oracle" / "bidding" (optional, defaulted). Unknown keys at any level are
// rejected so that typos in config files do not silently fall back to defaults.

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

std::string dump_scenario(const Scenario& scenario, int indent = 2);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace aflsim
