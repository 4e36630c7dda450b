#include "manifest.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "version.hpp"

namespace ptrotor::cli {

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunRecorder::RunRecorder(std::string command, const Settings& settings, std::filesystem::path out_dir)
    : command_(std::move(command)), settings_(settings), out_dir_(std::move(out_dir)), start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(out_dir_);
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  started_utc_ = buf;
}

void RunRecorder::write_file(const std::string& name, const std::string& bytes) {
  const auto path = out_dir_ / name;
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  if (!out) throw ConfigError("cannot write " + path.string());
  files_.push_back({{"path", name}, {"bytes", bytes.size()}, {"fnv1a", fnv1a_hex(bytes)}});
}

void RunRecorder::record_stage(const std::string& name, std::chrono::steady_clock::time_point t0) {
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stages_.push_back({{"stage", name}, {"seconds", secs}});
}

std::filesystem::path RunRecorder::finish() {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : settings_.values()) params[k] = {{"value", v}, {"source", settings_.sources().at(k)}};
  nlohmann::ordered_json m;
  m["tool"] = "ptrotor";
  m["version"] = kVersion;
  m["command"] = command_;
  m["status"] = status_;
  m["config_digest"] = fnv1a_hex(settings_.canonical());
  m["parameters"] = params;
  m["derived"] = derived_;
  m["started_utc"] = started_utc_;
  m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  m["stages"] = stages_;
  m["files"] = files_;
  const auto path = out_dir_ / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw ConfigError("cannot write " + path.string());
  return path;
}

}  // namespace ptrotor::cli
