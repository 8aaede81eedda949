#include <cmath>
#include <fstream>
#include <sstream>

#include "magicbullet/cli.hpp"
#include "magicbullet/errors.hpp"
#include "magicbullet/grid.hpp"
#include "magicbullet/montecarlo.hpp"

namespace mb::cli {

namespace {

RunReport start_report(std::string command, const Config& cfg) {
  RunReport r;
  r.command = std::move(command);
  r.version = artifact_version();
  r.config = config_snapshot(cfg);
  r.tolerances = tolerances_json(cfg.tolerances);
  r.started = iso8601_now();
  return r;
}

CommandResult finish(RunReport report, const Config& cfg, std::string summary,
                     std::vector<std::filesystem::path> files = {}, int exit_code = kExitOk) {
  report.finished = iso8601_now();
  files.push_back(write_report(report, cfg.out_dir));
  return {std::move(report), exit_code, std::move(files), std::move(summary)};
}

Overlap config_overlap(double g) {
  try {
    return Overlap(g);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("field 'g': ") + e.what());
  }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "g,p_full,p_approx,p_mb\n";
  for (const SweepRow& r : rows) {
    out << r.g << ',' << r.p_full << ',' << r.p_approx << ',' << r.p_mb << '\n';
  }
}

nlohmann::json run_json(const SampleRun& r) {
  return {
      {"plane", std::string(to_string(r.plane))},
      {"seed", r.seed},
      {"n_shots", r.n_shots},
      {"interval", {r.a, r.b}},
      {"hits", r.hits},
      {"estimate", r.estimate},
      {"ci_95", {r.ci_low, r.ci_high}},
  };
}

std::string comparison_text(Comparison c) {
  switch (c) {
    case Comparison::less: return "<";
    case Comparison::greater_equal: return ">=";
    case Comparison::info: return "info";
  }
  return "?";
}

}  // namespace

std::vector<SweepRow> sweep_rows(double g_min, double g_max, std::size_t steps) {
  if (!(g_min >= 0.0) || !(g_min < g_max) || !(g_max < kOverlapLimit)) {
    throw ConfigError("sweep range needs 0 <= g_min < g_max < 1/sqrt(2), got [" +
                      std::to_string(g_min) + ", " + std::to_string(g_max) + "]");
  }
  if (steps < 2) throw ConfigError("field 'steps': need at least 2 sweep points");
  std::vector<SweepRow> rows;
  rows.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double g = i + 1 == steps
                         ? g_max
                         : g_min + (g_max - g_min) * static_cast<double>(i) /
                                       static_cast<double>(steps - 1);
    const Overlap o(g);
    rows.push_back({g, prob_hit_full(o), prob_hit_approx(o), prob_magic_bullet(o)});
  }
  return rows;
}

CommandResult cmd_optimize(const Config& cfg) {
  RunReport report = start_report("optimize", cfg);
  const Optimum opt = optimize_overlap(cfg.objective);
  report.outputs = {
      {"objective", std::string(to_string(cfg.objective))},
      {"g_star", opt.g_star.value()},
      {"p_hit", opt.p_hit},
      {"p_mb", opt.p_mb},
      {"iterations", opt.iterations},
      {"search", {{"bracket", {kOptimizerLow, kOptimizerHigh}},
                  {"tolerance", kOptimizerTolerance},
                  {"guard_points", kGuardSweepPoints}}},
  };
  if (cfg.objective == Objective::approximate) {
    report.outputs["p_mb_full_at_g_star"] = prob_magic_bullet(opt.g_star);
  }
  std::ostringstream s;
  s.precision(8);
  s << "objective " << to_string(cfg.objective) << "\n"
    << "g*      = " << opt.g_star.value() << "\n"
    << "P(A)    = P(B) = " << opt.p_hit << "\n"
    << "P_MB    = " << opt.p_mb << "\n";
  return finish(std::move(report), cfg, s.str());
}

CommandResult cmd_sweep(const Config& cfg) {
  RunReport report = start_report("sweep", cfg);
  const std::vector<SweepRow> rows = sweep_rows(cfg.g_min, cfg.g_max, cfg.steps);
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path csv = std::filesystem::path(cfg.out_dir) / "sweep.csv";
  write_sweep_csv(csv, rows);

  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].p_full > rows[best].p_full) best = i;
  }
  nlohmann::json sign_changes = nlohmann::json::array();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rows[i - 1].p_mb;
    const double b = rows[i].p_mb;
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
      sign_changes.push_back({rows[i - 1].g, rows[i].g});
    }
  }
  nlohmann::json above_half = nullptr;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].p_full <= 0.5) continue;
    std::size_t j = i;
    while (j + 1 < rows.size() && rows[j + 1].p_full > 0.5) ++j;
    above_half = {rows[i].g, rows[j].g};
    break;
  }
  report.outputs = {
      {"csv", csv.string()},
      {"rows", rows.size()},
      {"max_p_full", {{"g", rows[best].g}, {"p_full", rows[best].p_full}}},
      {"p_mb_sign_changes", sign_changes},
      {"p_full_above_half", above_half},
  };
  std::ostringstream s;
  s.precision(8);
  s << rows.size() << " rows\n"
    << "max p_full = " << rows[best].p_full << " at g = " << rows[best].g << "\n"
    << "p_mb sign changes: " << sign_changes.size() << "\n";
  return finish(std::move(report), cfg, s.str(), {csv});
}

CommandResult cmd_profile(const Config& cfg) {
  RunReport report = start_report("profile", cfg);
  const Overlap g = config_overlap(cfg.g);
  if (!(cfg.window > 0.0) || cfg.n < 2) throw ConfigError("fields 'window'/'n': need window > 0, n >= 2");
  if (!(cfg.L > 0.0)) throw ConfigError("field 'L': must be positive");
  const StateCoefficients state = build_state(g, cfg.variant, cfg.sigma);
  const GridSpec grid = GridSpec::centered(cfg.window, cfg.n);
  const SampledField field = assemble_field(state, cfg.plane, grid);

  // Export in physical units: x scales with L, amplitudes with 1/sqrt(L).
  const double L = cfg.L;
  const GridSpec physical{grid.x_min * L, grid.x_max * L, grid.n};
  const SampledField exported = SampledField(physical, {field.values().begin(), field.values().end()},
                                             field.plane())
                                    .scaled(1.0 / std::sqrt(L));
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path csv = std::filesystem::path(cfg.out_dir) /
                                    ("profile_" + std::string(to_string(cfg.plane)) + "_" +
                                     std::string(to_string(cfg.variant)) + ".csv");
  {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    write_profile_csv(out, exported);
  }

  const auto [a, b] = target_interval(cfg.plane);
  const double p_interval = probability_in_interval(field, a, b);
  double captured = window_mass(field);
  if (cfg.variant == Variant::hard_screen && cfg.plane == Plane::source) {
    captured = hard_screen_window_fraction(state, grid);
  }
  const std::size_t centre = grid.n / 2;
  nlohmann::json warnings = nlohmann::json::array();
  if (captured < kMassCaptureWarning) {
    warnings.push_back("window captures only " + std::to_string(captured) + " of the norm");
  }
  report.outputs = {
      {"csv", csv.string()},
      {"plane", std::string(to_string(cfg.plane))},
      {"variant", std::string(to_string(cfg.variant))},
      {"captured_mass", captured},
      {"interval", {a * L, b * L}},
      {"interval_probability", p_interval},
      {"interval_mean_density", p_interval / ((b - a) * L)},
      {"central_density", std::norm(field[centre]) / L},
      {"sigma", state.sigma},
      {"norm_sq", state.norm_sq},
      {"warnings", warnings},
  };
  std::ostringstream s;
  s.precision(6);
  s << grid.n << " samples\n"
    << "captured mass " << captured << ", P[" << a * L << ", " << b * L << "] = " << p_interval
    << ", central density " << std::norm(field[centre]) / L << " /L\n";
  for (const auto& w : warnings) s << "warning: " << w.get<std::string>() << "\n";
  return finish(std::move(report), cfg, s.str(), {csv});
}

CommandResult cmd_sample(const Config& cfg) {
  RunReport report = start_report("sample", cfg);
  const Overlap g = config_overlap(cfg.g);
  if (cfg.shots == 0) throw ConfigError("field 'shots': need at least one shot");
  const StateCoefficients state = build_state(g, cfg.variant, cfg.sigma);
  const PlaneGrids grids = PlaneGrids::defaults();
  report.generator = std::string(kGeneratorId);

  nlohmann::json runs = nlohmann::json::array();
  nlohmann::json bound = nullptr;
  std::ostringstream s;
  s.precision(6);
  if (cfg.planes == SamplePlanes::both) {
    const PairedBound pb = paired_estimate(state, cfg.shots, cfg.seed, grids);
    runs.push_back(run_json(pb.run_a));
    runs.push_back(run_json(pb.run_b));
    bound = {{"estimate", pb.bound}, {"ci_95", {pb.ci_low, pb.ci_high}}};
    s << "p_A = " << pb.run_a.estimate << " [" << pb.run_a.ci_low << ", " << pb.run_a.ci_high << "]\n"
      << "p_B = " << pb.run_b.estimate << " [" << pb.run_b.ci_low << ", " << pb.run_b.ci_high << "]\n"
      << "magic-bullet bound = " << pb.bound << " [" << pb.ci_low << ", " << pb.ci_high << "]\n";
  } else {
    const Plane plane = cfg.planes == SamplePlanes::plane_a ? Plane::plane_a : Plane::plane_b;
    const SampleRun r = estimate_hit(state, plane, cfg.shots, derive_seed(cfg.seed, plane == Plane::plane_a ? 0 : 1),
                                     grids.at(plane));
    runs.push_back(run_json(r));
    s << "p_" << (plane == Plane::plane_a ? "A" : "B") << " = " << r.estimate << " [" << r.ci_low
      << ", " << r.ci_high << "]\n";
  }
  nlohmann::json warnings = nlohmann::json::array();
  if (cfg.shots < 100) {
    warnings.push_back("fewer than 100 shots: the normal-approximation interval is unreliable");
  }
  report.outputs = {
      {"runs", runs},
      {"magic_bullet_bound", bound},
      {"analytic", {{"p_hit", prob_hit_full(g)}, {"p_mb", prob_magic_bullet(g)}}},
      {"warnings", warnings},
  };
  for (const auto& w : warnings) s << "warning: " << w.get<std::string>() << "\n";
  return finish(std::move(report), cfg, s.str());
}

CommandResult cmd_validate(const Config& cfg) {
  RunReport report = start_report("validate", cfg);
  config_overlap(cfg.g);
  ValidationOptions options;
  options.g = cfg.g;
  options.convention = cfg.negative_control ? KernelConvention::conjugated : KernelConvention::standard;
  options.exact_sigma = cfg.sigma == SigmaMode::exact;
  options.spatial = cfg.spatial_checks;
  options.tolerances = cfg.tolerances;
  const std::vector<CheckResult> checks = run_validation(options);

  nlohmann::json table = nlohmann::json::array();
  std::ostringstream s;
  s.precision(6);
  for (const CheckResult& c : checks) {
    table.push_back({{"name", c.name},
                     {"measured", c.measured},
                     {"threshold", c.threshold},
                     {"comparison", comparison_text(c.comparison)},
                     {"pass", c.pass},
                     {"detail", c.detail}});
    s << (c.comparison == Comparison::info ? "INFO" : (c.pass ? "PASS" : "FAIL")) << "  "
      << c.name << "  measured " << c.measured;
    if (c.comparison != Comparison::info) {
      s << " " << comparison_text(c.comparison) << " " << c.threshold;
    }
    if (!c.detail.empty()) s << "  (" << c.detail << ")";
    s << "\n";
  }
  const bool ok = all_passed(checks);
  report.outputs = {{"checks", table}, {"all_passed", ok}};
  return finish(std::move(report), cfg, s.str(), {}, ok ? kExitOk : kExitValidationFailed);
}

}  // namespace mb::cli
