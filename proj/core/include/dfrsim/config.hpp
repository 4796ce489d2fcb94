#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfrsim/scenario.hpp"

namespace dfrsim {

// A parsed experiment configuration plus the fully resolved key/value list
// ("section.key" -> value) that reproduces it, defaults included. The
// resolved list is what run manifests embed.
struct LoadedConfig {
  ExperimentConfig experiment;
  std::vector<std::pair<std::string, std::string>> resolved;
};

// INI-style parser: [section] headers, key = value lines, '#'/';' comment
// lines. Unknown sections or keys, duplicate keys, and malformed values are
// errors anchored to the offending line. `trials` and `seed` are required;
// every other key has a default.
LoadedConfig parse_config_text(std::string_view text, const std::string& filename);

LoadedConfig load_config_file(const std::string& path);

std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& cfg);

}  // namespace dfrsim
