#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace ptrotor::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::map<std::string, std::map<std::string, std::string>>& presets() {
  static const std::map<std::string, std::map<std::string, std::string>> table{
      {"fig1a", {{"K", "3"}, {"two_pi_beta", "0.7"}, {"lambda", "0.1"}, {"Ns", "1000"}}},
      {"fig1b", {{"K", "3"}, {"two_pi_beta", "0.5,0.7,0.9,1.1,1.3"}, {"Ns", "1000"}}},
      {"fig2", {{"K", "3"}, {"beta_rational", "1/12"}, {"lambda", "0.3"}, {"Ns", "1000"}, {"q_points", "201"}}},
      {"fig3", {{"K", "3"}, {"beta", "1/(4pi)"}, {"lambda", "1/30"}, {"kicks", "1000"}, {"Ns", "1024"}}},
      {"fig4", {{"K", "3"}, {"beta_rational", "1/12"}, {"lambda", "1/30"}, {"kicks", "1000"}, {"Ns", "4096"}}},
      {"fig6",
       {{"A", "3"}, {"lambda", "1/30"}, {"beta", "1/(4pi)"}, {"grating_period", "300um"}, {"wavelength", "780nm"},
        {"focal_length", "5cm"}, {"waist_periods", "100/pi"}, {"round_trips", "20"}}},
      {"fig7",
       {{"A", "3"}, {"lambda", "1/30"}, {"beta_rational", "1/12"}, {"grating_period", "300um"},
        {"wavelength", "780nm"}, {"focal_length", "5cm"}, {"waist_periods", "100/pi"}, {"round_trips", "20"}}},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "K",           "lambda",        "beta",          "two_pi_beta",    "beta_rational", "Ns",
      "edge_fraction", "residuals",   "scan_step",     "scan_max",       "detector_tolerance",
      "bisection_tolerance", "workers", "q_points",    "kicks",          "snapshots",     "quasi_momentum",
      "A",           "grating_period", "wavelength",   "mirror_spacing", "focal_length",  "beam_waist",
      "waist_periods", "extent",      "points",        "points_per_period", "round_trips", "compare_rotor",
      "bloch_nodes", "out",
  };
  return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::stringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + "empty key or value");
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (out.count(key)) throw ConfigError(where + "key '" + key + "' given twice");
    out[key] = value;
  }
  return out;
}

std::string read_config_file(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (!fs::exists(p) && p.is_relative()) {
    if (const char* dir = std::getenv(kConfigDirEnv)) p = fs::path(dir) / p;
  }
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::map<std::string, std::string>& preset(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) {
    std::string names;
    for (const auto& n : preset_names()) names += " " + n;
    throw ConfigError("unknown preset '" + name + "'; available:" + names);
  }
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, keys] : presets()) names.push_back(name);
  return names;
}

void Settings::set(const std::string& key, const std::string& value, const std::string& source) {
  values_[key] = value;
  sources_[key] = source;
}

bool Settings::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& Settings::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required setting --" + key);
  return it->second;
}

double parse_number(const std::string& text, const std::string& what) {
  // Plain decimals, plus fractions such as 1/30 and multiples of 1/pi.
  static const std::regex fraction(R"(^\s*([-+0-9.eE]+)\s*/\s*([0-9.eE+]+)\s*$)");
  std::smatch m;
  try {
    if (std::regex_match(text, m, fraction)) return std::stod(m[1]) / std::stod(m[2]);
    if (text.find("pi") != std::string::npos) return parse_beta(text).value;
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty() && std::isfinite(v)) return v;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("setting " + what + ": '" + text + "' is not a number");
}

double Settings::number(const std::string& key) const { return parse_number(text(key), key); }

long Settings::integer(const std::string& key) const {
  const std::string& t = text(key);
  try {
    std::size_t used = 0;
    const long v = std::stol(t, &used);
    if (trim(t.substr(used)).empty()) return v;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("setting " + key + ": '" + t + "' is not an integer");
}

bool Settings::flag(const std::string& key) const {
  const std::string& t = text(key);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("setting " + key + ": '" + t + "' is not a boolean");
}

std::vector<double> Settings::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) out.push_back(parse_number(item, key));
  return out;
}

std::vector<long> Settings::integers(const std::string& key) const {
  std::vector<long> out;
  for (const auto& item : split_list(text(key))) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used == item.size()) {
        out.push_back(v);
        continue;
      }
    } catch (const std::logic_error&) {
    }
    throw ConfigError("setting " + key + ": '" + item + "' is not an integer");
  }
  return out;
}

double parse_length(const std::string& text) {
  static const std::regex re(R"(^\s*([-+0-9.eE]+)\s*(m|cm|mm|um|µm|μm|nm)?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw ConfigError("'" + text + "' is not a length (use m, cm, mm, um or nm)");
  double v = 0.0;
  try {
    v = std::stod(m[1]);
  } catch (const std::logic_error&) {
    throw ConfigError("'" + text + "' is not a length");
  }
  const std::string unit = m[2];
  if (unit == "cm") v *= 1e-2;
  else if (unit == "mm") v *= 1e-3;
  else if (unit == "um" || unit == "µm" || unit == "μm") v *= 1e-6;
  else if (unit == "nm") v *= 1e-9;
  return v;
}

double Settings::length(const std::string& key) const {
  try {
    return parse_length(text(key));
  } catch (const ConfigError& e) {
    throw ConfigError("setting " + key + ": " + e.what());
  }
}

std::string Settings::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

Settings resolve(const std::string& command, const std::vector<KeySpec>& specs,
                 const std::optional<std::string>& preset_name, const std::optional<std::string>& config_path,
                 const std::map<std::string, std::string>& flags) {
  Settings s;
  auto accepts = [&](const std::string& key) {
    return std::any_of(specs.begin(), specs.end(), [&](const KeySpec& k) { return k.key == key; });
  };
  auto apply = [&](const std::map<std::string, std::string>& layer, const std::string& source) {
    for (const auto& [k, v] : layer) {
      if (accepts(k)) s.set(k, v, source);
    }
  };

  for (const KeySpec& k : specs) {
    if (k.fallback) s.set(k.key, *k.fallback, "default");
  }
  if (const char* dir = std::getenv(kConfigDirEnv)) {
    const auto path = std::filesystem::path(dir) / (command + ".conf");
    if (std::filesystem::exists(path)) {
      apply(parse_config_text(read_config_file(path.string()), path.string()), path.string());
    }
  }
  if (preset_name) apply(preset(*preset_name), "preset " + *preset_name);
  if (config_path) apply(parse_config_text(read_config_file(*config_path), *config_path), *config_path);
  apply(flags, "flag");

  // A preset or file may set one beta form while a flag sets another; the
  // most specific layer wins.
  static const std::vector<std::string> beta_keys{"beta", "two_pi_beta", "beta_rational"};
  std::string beta_flag;
  for (const auto& k : beta_keys) {
    if (flags.count(k)) beta_flag = k;
  }
  if (!beta_flag.empty()) {
    Settings trimmed;
    for (const auto& [k, v] : s.values()) {
      if (std::find(beta_keys.begin(), beta_keys.end(), k) == beta_keys.end() || k == beta_flag) {
        trimmed.set(k, v, s.sources().at(k));
      }
    }
    s = trimmed;
  }

  std::vector<std::string> missing;
  for (const KeySpec& k : specs) {
    if (k.required && !s.has(k.key)) missing.push_back("--" + k.key);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += " " + m;
    throw ConfigError(command + ": missing required setting(s):" + list);
  }
  return s;
}

BetaValue parse_beta(const std::string& raw) {
  const std::string text = trim(raw);
  static const std::regex rational(R"(^([0-9]+)\s*/\s*([0-9]+)$)");
  static const std::regex over_pi(R"(^([0-9.eE+-]+)\s*/\s*\(?\s*([0-9.]*)\s*\*?\s*(pi|π)\s*\)?$)");
  std::smatch m;
  try {
    if (std::regex_match(text, m, rational)) {
      const Rational r{std::stol(m[1]), std::stol(m[2])};
      if (r.den == 0) throw ConfigError("beta '" + text + "' has a zero denominator");
      return {text, r, r.value()};
    }
    if (std::regex_match(text, m, over_pi)) {
      const double mult = m[2].length() ? std::stod(m[2]) : 1.0;
      return {text, std::nullopt, std::stod(m[1]) / (mult * kPi)};
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return {text, std::nullopt, v};
  } catch (const std::logic_error&) {
  }
  throw ConfigError("cannot parse beta '" + raw + "' (use N/M, a decimal, or forms like 0.7/2pi, 1/(4pi))");
}

namespace {

std::vector<BetaValue> betas_of(const Settings& s, bool allow_list) {
  std::vector<std::string> present;
  for (const char* k : {"beta", "two_pi_beta", "beta_rational"}) {
    if (s.has(k)) present.push_back(k);
  }
  if (present.empty()) throw ConfigError("missing required setting: one of --beta, --two-pi-beta, --beta-rational");
  if (present.size() > 1) throw ConfigError("give beta once, not as both --" + present[0] + " and --" + present[1]);
  const std::string& key = present.front();
  const auto items = split_list(s.text(key));
  if (items.empty()) throw ConfigError("setting " + key + " is empty");
  if (!allow_list && items.size() > 1) throw ConfigError("setting " + key + " takes a single value here");
  std::vector<BetaValue> out;
  for (const auto& item : items) {
    if (key == "two_pi_beta") {
      const double v = parse_number(item, key);
      out.push_back({item + "/2pi", std::nullopt, v / (2.0 * kPi)});
    } else {
      BetaValue b = parse_beta(item);
      if (key == "beta_rational" && !b.rational) throw ConfigError("--beta-rational needs N/M, got '" + item + "'");
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace

BetaValue beta_from(const Settings& s) { return betas_of(s, false).front(); }

std::vector<BetaValue> betas_from(const Settings& s) { return betas_of(s, true); }

RotorParams rotor_params(const Settings& s, double lambda, const BetaValue& beta, int truncation) {
  const double k = s.number("K");
  return beta.rational ? RotorParams(k, lambda, *beta.rational, truncation) : RotorParams(k, lambda, beta.value, truncation);
}

}  // namespace ptrotor::cli
