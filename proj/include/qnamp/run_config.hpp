#pragma once

// JSON run configuration with five parameter groups (ifo, sqz, amp, coat,
// sus) plus run controls. Keys carry their unit; fractions also accept
// "<x> ppm" and "<x> %" string literals. Unknown keys are rejected.

#include <string>

#include <json.hpp>

#include "qnamp/budget.hpp"

namespace qnamp {

/// Number, or string "<x> ppm" / "<x> %", normalised to a fraction.
double parse_fraction(const nlohmann::json& v, const std::string& key);

/// Optional top-level "preset" selects the starting point; other keys
/// override it. Throws ConfigError.
ChainConfig parse_config(const nlohmann::json& j);
/// Throws ConfigError naming the path when the file is missing or malformed.
ChainConfig load_config(const std::string& path);

/// Every field, in the parser's primary units.
nlohmann::json serialize_config(const ChainConfig& c);

}  // namespace qnamp
