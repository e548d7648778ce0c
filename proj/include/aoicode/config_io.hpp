#pragma once

#include <istream>
#include <string>

#include "aoicode/model.hpp"

namespace aoicode {

// Applies one `key = value` setting. Arrays are comma-separated; `beta`
// also accepts the named prescriptions `shifted` and `inverse_rate`, and
// `clique_cap` accepts `uncoded`. Throws ConfigError on unknown keys or
// malformed values.
void apply_setting(SystemConfig& config, const std::string& key, const std::string& value);

// Parses a configuration file: one `key = value` per line, `#` starts a
// comment. The result is not validated.
SystemConfig parse_config(std::istream& in);
SystemConfig parse_config_text(const std::string& text);
SystemConfig load_config(const std::string& path);

// Inverse of parse_config for a validated config.
std::string format_config(const SystemConfig& config);

// Comma-joined list (single value when all entries agree).
std::string format_values(const std::vector<double>& values, char sep = ',');

}  // namespace aoicode
