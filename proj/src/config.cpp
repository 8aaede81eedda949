#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "magicbullet/cli.hpp"

namespace mb::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& where, std::string_view key, const std::string& why) {
  throw ConfigError(where + ": field '" + std::string(key) + "': " + why);
}

double to_double(std::string_view key, std::string_view v, const std::string& where) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    fail(where, key, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v, const std::string& where) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(where, key, "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(where, key, "expected true or false, got '" + std::string(v) + "'");
}

template <typename Parse>
auto parse_enum(std::string_view key, std::string_view v, const std::string& where, Parse parse) {
  try {
    return parse(v);
  } catch (const std::invalid_argument& e) {
    fail(where, key, e.what());
  }
}

SamplePlanes parse_sample_planes(std::string_view v) {
  if (v == "both") return SamplePlanes::both;
  if (v == "planeA" || v == "A") return SamplePlanes::plane_a;
  if (v == "planeB" || v == "B") return SamplePlanes::plane_b;
  throw std::invalid_argument("expected planeA, planeB or both");
}

std::string_view to_string(SamplePlanes p) {
  switch (p) {
    case SamplePlanes::plane_a: return "planeA";
    case SamplePlanes::plane_b: return "planeB";
    case SamplePlanes::both: return "both";
  }
  return "both";
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace

void apply_setting(Config& cfg, std::string_view key, std::string_view value,
                   const std::string& where) {
  key = trim(key);
  value = trim(value);
  if (value.empty()) fail(where, key, "missing value");
  Tolerances& t = cfg.tolerances;
  if (key == "g") {
    cfg.g = to_double(key, value, where);
    if (!(cfg.g >= 0.0 && cfg.g < kOverlapLimit)) fail(where, key, "must lie in [0, 1/sqrt(2))");
  } else if (key == "L") {
    cfg.L = to_double(key, value, where);
    if (!(cfg.L > 0.0)) fail(where, key, "must be positive");
  }
  else if (key == "plane") cfg.plane = parse_enum(key, value, where, parse_plane);
  else if (key == "variant") cfg.variant = parse_enum(key, value, where, parse_variant);
  else if (key == "window") cfg.window = to_double(key, value, where);
  else if (key == "n") cfg.n = to_uint(key, value, where);
  else if (key == "seed") cfg.seed = to_uint(key, value, where);
  else if (key == "shots") cfg.shots = to_uint(key, value, where);
  else if (key == "planes") cfg.planes = parse_enum(key, value, where, parse_sample_planes);
  else if (key == "g_min") cfg.g_min = to_double(key, value, where);
  else if (key == "g_max") cfg.g_max = to_double(key, value, where);
  else if (key == "steps") cfg.steps = to_uint(key, value, where);
  else if (key == "objective") cfg.objective = parse_enum(key, value, where, parse_objective);
  else if (key == "sigma") cfg.sigma = parse_enum(key, value, where, parse_sigma_mode);
  else if (key == "negative_control") cfg.negative_control = to_bool(key, value, where);
  else if (key == "spatial_checks") cfg.spatial_checks = to_bool(key, value, where);
  else if (key == "out_dir") cfg.out_dir = std::string(value);
  else if (key == "tol.propagation_l2") t.propagation_l2 = to_double(key, value, where);
  else if (key == "tol.phase_coherence") t.phase_coherence = to_double(key, value, where);
  else if (key == "tol.overlap_ab") t.overlap_ab = to_double(key, value, where);
  else if (key == "tol.overlap_plane_invariance") t.overlap_plane_invariance = to_double(key, value, where);
  else if (key == "tol.overlap_as_modulus") t.overlap_as_modulus = to_double(key, value, where);
  else if (key == "tol.overlap_as_phase") t.overlap_as_phase = to_double(key, value, where);
  else if (key == "tol.method_agreement") t.method_agreement = to_double(key, value, where);
  else if (key == "tol.modal_vs_spatial") t.modal_vs_spatial = to_double(key, value, where);
  else fail(where, key, "unknown key");
}

Config parse_config_text(std::string_view text, const std::string& origin, Config base) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.contains("config") || !doc["config"].is_object()) {
      throw ConfigError(origin + ": JSON input needs a \"config\" object");
    }
    for (const auto& [key, value] : doc["config"].items()) {
      apply_setting(base, key, scalar_text(value), origin + ":config." + key);
    }
    return base;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + std::string(view) + "'");
    }
    apply_setting(base, view.substr(0, eq), view.substr(eq + 1), where);
  }
  return base;
}

Config load_config(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string(), std::move(base));
}

nlohmann::json tolerances_json(const Tolerances& t) {
  return {
      {"tol.method_agreement", t.method_agreement},
      {"tol.modal_vs_spatial", t.modal_vs_spatial},
      {"tol.overlap_ab", t.overlap_ab},
      {"tol.overlap_as_modulus", t.overlap_as_modulus},
      {"tol.overlap_as_phase", t.overlap_as_phase},
      {"tol.overlap_plane_invariance", t.overlap_plane_invariance},
      {"tol.phase_coherence", t.phase_coherence},
      {"tol.propagation_l2", t.propagation_l2},
  };
}

nlohmann::json config_snapshot(const Config& cfg) {
  nlohmann::json j = {
      {"g", cfg.g},
      {"L", cfg.L},
      {"plane", std::string(to_string(cfg.plane))},
      {"variant", std::string(to_string(cfg.variant))},
      {"window", cfg.window},
      {"n", cfg.n},
      {"seed", cfg.seed},
      {"shots", cfg.shots},
      {"planes", std::string(to_string(cfg.planes))},
      {"g_min", cfg.g_min},
      {"g_max", cfg.g_max},
      {"steps", cfg.steps},
      {"objective", std::string(to_string(cfg.objective))},
      {"sigma", std::string(to_string(cfg.sigma))},
      {"negative_control", cfg.negative_control},
      {"spatial_checks", cfg.spatial_checks},
      {"out_dir", cfg.out_dir},
  };
  j.update(tolerances_json(cfg.tolerances));
  return j;
}

}  // namespace mb::cli
