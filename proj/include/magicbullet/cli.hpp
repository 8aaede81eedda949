#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "magicbullet/analytic.hpp"
#include "magicbullet/state.hpp"
#include "magicbullet/validation.hpp"

namespace mb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Bad configuration input; the message names the line and/or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SamplePlanes { plane_a, plane_b, both };

/// Every tunable of every verb. Defaults reproduce the published optimum.
struct Config {
  double g = 0.1502;
  double L = 1.0;
  Plane plane = Plane::plane_a;
  Variant variant = Variant::modal_subtraction;
  double window = 30.0;  // profile half-width, units of L
  std::size_t n = 12001;
  std::uint64_t seed = 42;
  std::size_t shots = 100000;
  SamplePlanes planes = SamplePlanes::both;
  double g_min = 0.0;
  double g_max = 0.3;
  std::size_t steps = 301;
  Objective objective = Objective::full;
  SigmaMode sigma = SigmaMode::approximate;
  bool negative_control = false;
  bool spatial_checks = true;
  std::string out_dir = ".";
  Tolerances tolerances{};
};

/// Applies one `key = value` setting. `where` prefixes error messages
/// (e.g. "config.txt:3").
void apply_setting(Config& cfg, std::string_view key, std::string_view value,
                   const std::string& where);

/// Parses a flat key-value file (`key = value`, `#` comments). A JSON run
/// report is also accepted; its "config" snapshot is loaded.
Config load_config(const std::filesystem::path& path, Config base = {});
Config parse_config_text(std::string_view text, const std::string& origin, Config base = {});

/// Flat snapshot of every key; feeding it back reproduces the run.
nlohmann::json config_snapshot(const Config& cfg);
nlohmann::json tolerances_json(const Tolerances& t);

struct RunReport {
  std::string command;
  std::string version;
  nlohmann::json config;
  nlohmann::json tolerances;
  nlohmann::json outputs;
  std::string generator;  // empty unless the run sampled positions
  std::string started;
  std::string finished;

  nlohmann::json to_json() const;
};

std::string artifact_version();
std::string iso8601_now();

struct CommandResult {
  RunReport report;
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  std::string summary;  // human-readable text for stdout
};

CommandResult cmd_optimize(const Config& cfg);
CommandResult cmd_sweep(const Config& cfg);
CommandResult cmd_profile(const Config& cfg);
CommandResult cmd_sample(const Config& cfg);
CommandResult cmd_validate(const Config& cfg);

/// Writes `<out_dir>/<command>_report.json` and returns its path.
std::filesystem::path write_report(const RunReport& report, const std::filesystem::path& out_dir);

/// Sweep rows (g, p_full, p_approx, p_mb) on a uniform grid.
struct SweepRow {
  double g;
  double p_full;
  double p_approx;
  double p_mb;
};
std::vector<SweepRow> sweep_rows(double g_min, double g_max, std::size_t steps);

}  // namespace mb::cli
