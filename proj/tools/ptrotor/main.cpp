#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "ptrotor/error.hpp"
#include "version.hpp"

namespace {

using namespace ptrotor::cli;

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (char& c : s) {
    if (c == '_') c = '-';
  }
  return "--" + s;
}

struct Subcommand {
  CLI::App* app;
  std::string preset;
  std::string config;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void bind_keys(Subcommand& sub, const std::string& command) {
  sub.app->add_option("--preset", sub.preset, "parameter preset: fig1a fig1b fig2 fig3 fig4 fig6 fig7");
  sub.app->add_option("--config", sub.config, "flat key = value file (flags override it)");
  for (const KeySpec& k : command_keys(command)) {
    std::string help = k.help;
    if (k.required) help += " [required]";
    else if (k.fallback) help += " [default " + *k.fallback + "]";
    sub.options[k.key] = sub.app->add_option(flag_name(k.key), sub.values[k.key], help);
  }
}

Settings settings_of(const Subcommand& sub, const std::string& command) {
  std::map<std::string, std::string> flags;
  for (const auto& [key, option] : sub.options) {
    if (option->count() > 0) flags[key] = sub.values.at(key);
  }
  return resolve(command, command_keys(command), sub.preset.empty() ? std::nullopt : std::optional(sub.preset),
                 sub.config.empty() ? std::nullopt : std::optional(sub.config), flags);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation toolkit for the PT-symmetric kicked rotor and its optical cavity analogue", "ptrotor"};
  app.set_version_flag("--version", std::string(ptrotor::cli::kVersion));
  app.require_subcommand(1);

  using Runner = int (*)(const Settings&);
  const std::vector<std::tuple<std::string, std::string, Runner>> commands{
      {"spectrum", "Floquet quasi-energies of the truncated one-period propagator", cmd_spectrum},
      {"threshold", "PT-breaking threshold lambda_PT for one or more beta values", cmd_threshold},
      {"bands", "quasi-energy bands at rational beta = N/M", cmd_bands},
      {"evolve", "kick-by-kick momentum dynamics from |l = 0>", cmd_evolve},
      {"resonance", "beta = 1 dispersion and exact state with its saddle-point profile", cmd_resonance},
      {"cavity", "Fabry-Perot round trips, far field and unit report", cmd_cavity},
  };
  std::vector<Subcommand> subs;
  subs.reserve(commands.size());
  for (const auto& [name, help, run] : commands) {
    subs.push_back({app.add_subcommand(name, help), {}, {}, {}, {}});
    bind_keys(subs.back(), name);
  }

  std::string level = "fast";
  std::vector<std::string> only;
  CLI::App* verify = app.add_subcommand("verify", "run the cross-module verification suite");
  verify->add_option("--level", level, "fast or full (full adds the N_s = 1000 threshold runs)")
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--only", only, "check ids, e.g. C02,S05")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(level, only);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i].app->parsed()) {
        const auto& name = std::get<0>(commands[i]);
        return std::get<2>(commands[i])(settings_of(subs[i], name));
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "ptrotor: " << e.what() << "\n";
    return 2;
  } catch (const ptrotor::Error& e) {
    std::cerr << "ptrotor: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ptrotor: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
