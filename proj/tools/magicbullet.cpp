#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magicbullet/cli.hpp"
#include "magicbullet/errors.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::vector<std::string> settings;
  std::vector<std::pair<std::string, std::string>> named;
};

// Registers --config, --set and the common named flags on a subcommand.
void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config_path, "key = value config file (or a JSON run report)");
  sub->add_option("--set", o.settings, "override a config key, key=value (repeatable)");
  for (const char* key : {"g", "L", "plane", "variant", "window", "n", "seed", "shots", "planes",
                          "g_min", "g_max", "steps", "objective", "sigma", "out_dir"}) {
    const std::string name = std::string(key) == "out_dir" ? "--out-dir,--out_dir" : std::string("--") + key;
    sub->add_option_function<std::string>(
        name,
        [&o, key](const std::string& v) { o.named.emplace_back(key, v); },
        std::string("override '") + key + "'");
  }
}

mb::cli::Config resolve(const Overrides& o) {
  mb::cli::Config cfg;
  if (!o.config_path.empty()) cfg = mb::cli::load_config(o.config_path);
  for (const std::string& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw mb::cli::ConfigError("--set expects key=value, got '" + kv + "'");
    mb::cli::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1), "--set");
  }
  for (const auto& [key, value] : o.named) mb::cli::apply_setting(cfg, key, value, "--" + key);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magic-bullet photon state: optimum, sweeps, profiles, sampling and validation"};
  app.require_subcommand(1);
  Overrides overrides;
  bool negative_control = false;

  auto* optimize = app.add_subcommand("optimize", "maximize the magic-bullet fraction over g");
  auto* sweep = app.add_subcommand("sweep", "tabulate P(A), its approximation and P_MB over g");
  auto* profile = app.add_subcommand("profile", "export a plane's probability density as CSV");
  auto* sample = app.add_subcommand("sample", "Monte-Carlo hit counting at the target planes");
  auto* validate = app.add_subcommand("validate", "cross-check closed forms against numerics");
  for (auto* sub : {optimize, sweep, profile, sample, validate}) add_common(sub, overrides);
  validate->add_flag("--negative-control", negative_control,
                     "conjugate the Fresnel kernel (checks are expected to fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mb::cli::kExitUsage;
  }

  try {
    mb::cli::Config cfg = resolve(overrides);
    if (negative_control) cfg.negative_control = true;
    mb::cli::CommandResult result;
    if (*optimize) result = mb::cli::cmd_optimize(cfg);
    else if (*sweep) result = mb::cli::cmd_sweep(cfg);
    else if (*profile) result = mb::cli::cmd_profile(cfg);
    else if (*sample) result = mb::cli::cmd_sample(cfg);
    else result = mb::cli::cmd_validate(cfg);
    std::cout << result.summary;
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    return result.exit_code;
  } catch (const mb::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mb::cli::kExitUsage;
  } catch (const mb::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return mb::cli::kExitUsage;
  } catch (const mb::InternalError& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return mb::cli::kExitValidationFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mb::cli::kExitUsage;
  }
}
