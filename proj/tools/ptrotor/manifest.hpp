#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace ptrotor::cli {

/// 64-bit FNV-1a, printed as 16 hex digits. Stable across platforms.
std::string fnv1a_hex(std::string_view bytes);

/// Collects outputs, timings and derived numbers of one subcommand run and
/// writes them as manifest.json next to the CSVs.
class RunRecorder {
 public:
  RunRecorder(std::string command, const Settings& settings, std::filesystem::path out_dir);

  /// Writes `bytes` to out_dir/name and lists it in the inventory.
  void write_file(const std::string& name, const std::string& bytes);

  template <class F>
  auto stage(const std::string& name, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record_stage(name, t0);
    } else {
      auto result = fn();
      record_stage(name, t0);
      return result;
    }
  }

  nlohmann::ordered_json& derived() noexcept { return derived_; }
  void set_status(const std::string& status) { status_ = status; }

  /// Writes manifest.json; returns its path.
  std::filesystem::path finish();

 private:
  void record_stage(const std::string& name, std::chrono::steady_clock::time_point t0);

  std::string command_;
  Settings settings_;
  std::filesystem::path out_dir_;
  std::chrono::steady_clock::time_point start_;
  std::string started_utc_;
  nlohmann::ordered_json stages_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json files_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json derived_ = nlohmann::ordered_json::object();
  std::string status_ = "ok";
};

}  // namespace ptrotor::cli
