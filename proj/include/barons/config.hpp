#pragma once

// Run configuration files: "[section]" headers followed by "key = value"
// lines. Sections are domain, barrier, algorithm, loss and run; '#' starts a
// comment and string values may be quoted. Unknown keys are errors.

#include <iosfwd>
#include <string>
#include <vector>

#include "barons/harness.hpp"

namespace barons {

/// Applies every entry of a config text on top of `cfg`.
void apply_config(RunConfig& cfg, std::istream& in, const std::string& source = "<config>");
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Applies one "section.key=value" override.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Sets a single key. Throws ConfigError naming "section.key" on unknown keys
/// or unparsable values.
void set_config_value(RunConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value);

/// Throws ConfigError if the combination of values is invalid.
void validate(const RunConfig& cfg);

/// Config text that reproduces `cfg`.
std::string dump_config(const RunConfig& cfg);

}  // namespace barons
