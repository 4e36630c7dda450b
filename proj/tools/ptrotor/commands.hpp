#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace ptrotor::cli {

/// Settings understood by each subcommand, with defaults.
const std::vector<KeySpec>& command_keys(const std::string& command);

/// Subcommand bodies. They write CSVs and manifest.json into `out` and
/// return the process exit code; ptrotor::Error and ConfigError propagate.
int cmd_spectrum(const Settings& s);
int cmd_threshold(const Settings& s);
int cmd_bands(const Settings& s);
int cmd_evolve(const Settings& s);
int cmd_resonance(const Settings& s);
int cmd_cavity(const Settings& s);
int cmd_verify(const std::string& level, const std::vector<std::string>& only);

}  // namespace ptrotor::cli
