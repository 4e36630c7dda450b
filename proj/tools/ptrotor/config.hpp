#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptrotor/model.hpp"

namespace ptrotor::cli {

/// Bad flags, unreadable or malformed config files, unknown keys. Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A setting the subcommand understands.
struct KeySpec {
  std::string key;
  std::optional<std::string> fallback;  ///< materialized into the manifest when unset
  bool required;
  std::string help;
};

/// Every key any subcommand accepts; config files may only use these.
const std::vector<std::string>& known_keys();

/// Flat "key = value" text; '#' starts a comment; blank lines ignored.
/// Throws ConfigError naming the file and line on anything else.
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin);

/// Reads `path`; when it does not exist and is relative, retries inside the
/// directory named by PTROTOR_CONFIG_DIR.
std::string read_config_file(const std::string& path);

/// Preset key sets: fig1a, fig1b, fig2, fig3, fig4, fig6, fig7.
const std::map<std::string, std::string>& preset(const std::string& name);
std::vector<std::string> preset_names();

inline constexpr const char* kConfigDirEnv = "PTROTOR_CONFIG_DIR";

/// Resolved settings with the layer each value came from.
class Settings {
 public:
  void set(const std::string& key, const std::string& value, const std::string& source);
  bool has(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<long> integers(const std::string& key) const;
  /// Metres; accepts m, cm, mm, um, μm, nm suffixes.
  double length(const std::string& key) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  const std::map<std::string, std::string>& sources() const noexcept { return sources_; }
  /// "key=value\n" in key order; the digest input.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> sources_;
};

/// Layers, later wins: defaults, $PTROTOR_CONFIG_DIR/<command>.conf, preset,
/// --config file, flags. Keys outside `specs` are ignored unless unknown to
/// every command. Missing required keys raise ConfigError.
Settings resolve(const std::string& command, const std::vector<KeySpec>& specs,
                 const std::optional<std::string>& preset_name, const std::optional<std::string>& config_path,
                 const std::map<std::string, std::string>& flags);

/// Kicking parameter as given on the command line or in a config file.
struct BetaValue {
  std::string text;
  std::optional<Rational> rational;
  double value;
};

/// "N/M" (kept exact), decimals, and multiples of 1/pi such as "0.7/2pi",
/// "1/(4pi)" or "1/4pi".
BetaValue parse_beta(const std::string& text);
double parse_length(const std::string& text);
double parse_number(const std::string& text, const std::string& what);

/// Single beta from whichever of beta, two_pi_beta, beta_rational is set.
BetaValue beta_from(const Settings& s);
/// Comma-separated list version for sweeps.
std::vector<BetaValue> betas_from(const Settings& s);

RotorParams rotor_params(const Settings& s, double lambda, const BetaValue& beta, int truncation);

}  // namespace ptrotor::cli
