#include <chrono>
#include <ctime>
#include <fstream>

#include "magicbullet/cli.hpp"

namespace mb::cli {

std::string artifact_version() { return MAGICBULLET_VERSION; }

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j = {
      {"command", command},
      {"version", version},
      {"config", config},
      {"tolerances", tolerances},
      {"outputs", outputs},
      {"timestamps", {{"started", started}, {"finished", finished}}},
  };
  if (!generator.empty()) j["generator"] = generator;
  return j;
}

std::filesystem::path write_report(const RunReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = out_dir / (report.command + "_report.json");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << report.to_json().dump(2) << '\n';
  return path;
}

}  // namespace mb::cli
