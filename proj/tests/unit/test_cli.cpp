#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "json.hpp"

using namespace ptrotor::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the ptrotor binary and returns its exit status.
int run_cli(const std::string& args) {
  const std::string cmd = std::string(PTROTOR_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ptrotor_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::vector<KeySpec> kSpecs{
    {"K", std::nullopt, true, ""},
    {"lambda", std::string("0"), false, ""},
    {"Ns", std::string("500"), false, ""},
    {"beta", std::nullopt, false, ""},
    {"two_pi_beta", std::nullopt, false, ""},
    {"beta_rational", std::nullopt, false, ""},
};

}  // namespace

TEST(Config, ParsesKeyValueText) {
  const auto m = parse_config_text("# comment\nK = 3\n\nlambda=0.1  # trailing\n", "t.conf");
  EXPECT_EQ(m.at("K"), "3");
  EXPECT_EQ(m.at("lambda"), "0.1");
  EXPECT_THROW(parse_config_text("nonsense_key = 1\n", "t.conf"), ConfigError);
  EXPECT_THROW(parse_config_text("K = 1\nK = 2\n", "t.conf"), ConfigError);
  EXPECT_THROW(parse_config_text("K 3\n", "t.conf"), ConfigError);
}

TEST(Config, BetaForms) {
  const auto r = parse_beta("1/12");
  ASSERT_TRUE(r.rational);
  EXPECT_EQ(r.rational->den, 12);
  EXPECT_NEAR(parse_beta("1/(4pi)").value, 1.0 / (4 * ptrotor::kPi), 1e-15);
  EXPECT_NEAR(parse_beta("0.7/2pi").value, 0.7 / (2 * ptrotor::kPi), 1e-15);
  EXPECT_FALSE(parse_beta("0.25").rational);
  EXPECT_THROW(parse_beta("abc"), ConfigError);
}

TEST(Config, LengthUnits) {
  EXPECT_DOUBLE_EQ(parse_length("300um"), 300e-6);
  EXPECT_DOUBLE_EQ(parse_length("780 nm"), 780e-9);
  EXPECT_DOUBLE_EQ(parse_length("5cm"), 0.05);
  EXPECT_DOUBLE_EQ(parse_length("0.01"), 0.01);
  EXPECT_THROW(parse_length("3 furlongs"), ConfigError);
}

TEST(Config, LayersAndSources) {
  const fs::path dir = scratch("layers");
  std::ofstream(dir / "run.conf") << "K = 4\nlambda = 0.2\n";
  const auto s = resolve("spectrum", kSpecs, std::nullopt, (dir / "run.conf").string(), {{"lambda", "0.3"}, {"beta", "0.1"}});
  EXPECT_EQ(s.text("K"), "4");
  EXPECT_EQ(s.sources().at("K"), (dir / "run.conf").string());
  EXPECT_EQ(s.text("lambda"), "0.3");
  EXPECT_EQ(s.sources().at("lambda"), "flag");
  EXPECT_EQ(s.integer("Ns"), 500);
  EXPECT_EQ(s.sources().at("Ns"), "default");
}

TEST(Config, PresetThenFlagOverride) {
  const auto s = resolve("spectrum", kSpecs, std::string("fig1a"), std::nullopt, {{"Ns", "200"}});
  EXPECT_EQ(s.number("K"), 3.0);
  EXPECT_EQ(s.integer("Ns"), 200);
  // A beta flag replaces the preset's beta form.
  const auto t = resolve("spectrum", kSpecs, std::string("fig1a"), std::nullopt, {{"beta_rational", "1/2"}});
  EXPECT_FALSE(t.has("two_pi_beta"));
  EXPECT_NO_THROW(beta_from(t));
}

TEST(Config, MissingRequiredKey) {
  EXPECT_THROW(resolve("spectrum", kSpecs, std::nullopt, std::nullopt, {}), ConfigError);
  EXPECT_THROW(resolve("spectrum", kSpecs, std::string("nope"), std::nullopt, {{"K", "3"}}), ConfigError);
}

TEST(Cli, MissingBetaIsAnError) {
  const fs::path dir = scratch("missing");
  EXPECT_EQ(run_cli("spectrum --K 3 --lambda 0.1 --Ns 50 --out " + dir.string()), 2);
  EXPECT_FALSE(fs::exists(dir / "spectrum.csv"));
}

TEST(Cli, CorruptConfigIsAnError) {
  const fs::path dir = scratch("corrupt");
  std::ofstream(dir / "bad.conf") << "K = 3\n@@@ garbage\n";
  EXPECT_EQ(run_cli("spectrum --config " + (dir / "bad.conf").string() + " --beta 0.1 --out " + dir.string()), 2);
  EXPECT_NE(run_cli("spectrum --no-such-flag 1"), 0);
  EXPECT_NE(run_cli("spectrum --K x --beta 0.1 --lambda 0 --out " + dir.string()), 0);
}

TEST(Cli, SpectrumRowsAndDeterminism) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::string args = "spectrum --K 3 --two-pi-beta 0.7 --lambda 0.1 --Ns 60 --out ";
  ASSERT_EQ(run_cli(args + a.string()), 0);
  ASSERT_EQ(run_cli(args + b.string()), 0);
  const std::string csv = slurp(a / "spectrum.csv");
  EXPECT_EQ(csv, slurp(b / "spectrum.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 121);

  const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(m["command"], "spectrum");
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["parameters"]["Ns"]["value"], "60");
  EXPECT_EQ(m["parameters"]["edge_fraction"]["source"], "default");
  EXPECT_EQ(m["files"][0]["path"], "spectrum.csv");
  EXPECT_EQ(m["files"][0]["bytes"], csv.size());
}

TEST(Cli, AntiresonanceSpectrumIsZeroOrPi) {
  const fs::path dir = scratch("half");
  ASSERT_EQ(run_cli("spectrum --K 3 --beta-rational 1/2 --lambda 0.3 --Ns 40 --out " + dir.string()), 0);
  std::ifstream in(dir / "spectrum.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string re, im, pr, center, flagged;
    std::getline(ss, re, ',');
    std::getline(ss, im, ',');
    std::getline(ss, pr, ',');
    std::getline(ss, center, ',');
    std::getline(ss, flagged, ',');
    if (flagged == "1") continue;
    const double a = std::abs(std::stod(re));
    EXPECT_LT(std::min(a, std::abs(ptrotor::kPi - a)), 1e-10);
    EXPECT_LT(std::abs(std::stod(im)), 1e-10);
    ++rows;
  }
  EXPECT_GT(rows, 0);
}

TEST(Cli, PresetsRunEndToEnd) {
  const fs::path dir = scratch("presets");
  EXPECT_EQ(run_cli("bands --preset fig2 --q-points 11 --out " + (dir / "bands").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "bands" / "bands.csv"));
  EXPECT_EQ(run_cli("resonance --K 3 --lambda 0.1 --kicks 10 --out " + (dir / "res").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "res" / "resonance_n10.csv"));
  EXPECT_EQ(run_cli("cavity --preset fig7 --round-trips 3 --out " + (dir / "cav").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "cav" / "units.json"));
  EXPECT_EQ(run_cli("evolve --preset fig3 --kicks 20 --Ns 300 --out " + (dir / "evo").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "evo" / "series.csv"));
}
