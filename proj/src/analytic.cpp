#include "magicbullet/analytic.hpp"

#include <array>
#include <cmath>
#include <string>

#include "magicbullet/errors.hpp"
#include "magicbullet/golden_section.hpp"

namespace mb {

namespace {

constexpr double kSincTaylorThreshold = 1e-6;  // in units of L

// Rectangle: amplitude * exp(i pi phase) on |x| <= half_width.
struct RectangleForm {
  double half_width;
  double amplitude;
  double phase;
};

// sqrt(amp / g^2) * sin(freq g^2 pi x) / (pi x) * exp(i pi (chirp g^2 x^2 + phase)), x in units of L.
struct SincForm {
  double amp;
  double freq;
  double chirp;
  double phase;
};

struct ProfileForm {
  bool rectangle;
  RectangleForm rect;
  SincForm sinc;
};

constexpr ProfileForm rect_form(double half, double amplitude, double phase) {
  return {true, {half, amplitude, phase}, {}};
}

constexpr ProfileForm sinc_form(double amp, double freq, double chirp, double phase) {
  return {false, {}, {amp, freq, chirp, phase}};
}

// Indexed [plane][component] with component order S, A, B.
constexpr std::array<std::array<ProfileForm, 3>, 3> kForms{{
    {{rect_form(2.0, 0.5, 0.0),
      sinc_form(2.0, 0.5, -0.5, 0.125),
      sinc_form(2.0, 0.5, -0.25, -0.125)}},
    {{sinc_form(0.5, 2.0, 0.5, -0.25),
      rect_form(0.5, 1.0, -0.125),
      sinc_form(1.0, 1.0, -0.5, -0.125)}},
    {{sinc_form(1.0, 1.0, 0.25, -0.25),
      sinc_form(2.0, 0.5, 0.5, -0.375),
      rect_form(1.0, 1.0 / kSqrt2, -0.375)}},
}};

const ProfileForm& form_of(Component c, Plane p) {
  return kForms[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)];
}

// sin(k x) / (pi x) with its limit k / pi at the origin.
double sinc_kernel(double k, double x) {
  if (std::abs(x) < kSincTaylorThreshold) {
    const double kx = k * x;
    return k / kPi * (1.0 - kx * kx / 6.0);
  }
  return std::sin(k * x) / (kPi * x);
}

cdouble eval_unit(const ProfileForm& form, double g, double x) {
  if (form.rectangle) {
    if (std::abs(x) > form.rect.half_width) return {0.0, 0.0};
    return std::polar(form.rect.amplitude, kPi * form.rect.phase);
  }
  if (g == 0.0) return {0.0, 0.0};  // the sinc spreads to infinite width
  const double a = g * g;
  const SincForm& s = form.sinc;
  const double amplitude = std::sqrt(s.amp / a) * sinc_kernel(s.freq * a * kPi, x);
  return std::polar(1.0, kPi * (s.chirp * a * x * x + s.phase)) * amplitude;
}

}  // namespace

std::string_view to_string(Component c) {
  switch (c) {
    case Component::S: return "S";
    case Component::A: return "A";
    case Component::B: return "B";
  }
  return "?";
}

std::string_view to_string(Plane p) {
  switch (p) {
    case Plane::source: return "source";
    case Plane::plane_a: return "planeA";
    case Plane::plane_b: return "planeB";
  }
  return "?";
}

Component parse_component(std::string_view text) {
  if (text == "S") return Component::S;
  if (text == "A") return Component::A;
  if (text == "B") return Component::B;
  throw std::invalid_argument("unknown component '" + std::string(text) + "' (expected S, A or B)");
}

Plane parse_plane(std::string_view text) {
  if (text == "source" || text == "S") return Plane::source;
  if (text == "planeA" || text == "A") return Plane::plane_a;
  if (text == "planeB" || text == "B") return Plane::plane_b;
  throw std::invalid_argument("unknown plane '" + std::string(text) +
                              "' (expected source, planeA or planeB)");
}

Overlap::Overlap(double g) : g_(g) {
  if (!std::isfinite(g) || g < 0.0 || g >= kOverlapLimit) {
    throw DomainError("overlap g = " + std::to_string(g) + " outside [0, 1/sqrt(2))");
  }
}

void PhysicalConfig::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(slit_scale) || !positive(separation) || !positive(wavenumber)) {
    throw DomainError("physical config needs L > 0, R > 0, k_z > 0");
  }
}

Overlap overlap_from_physical(const PhysicalConfig& cfg) {
  cfg.validate();
  const double L = cfg.slit_scale;
  return Overlap(std::sqrt(cfg.wavenumber * L * L / (kPi * cfg.separation)));
}

PhysicalConfig physical_from_overlap(double g, double slit_scale, double wavenumber) {
  if (!std::isfinite(g) || g <= 0.0) {
    throw DomainError("physical_from_overlap: g must be > 0 (R is undefined at g = 0)");
  }
  const double R = wavenumber * slit_scale * slit_scale / (kPi * g * g);
  PhysicalConfig cfg{slit_scale, R, wavenumber};
  cfg.validate();
  return cfg;
}

double lambda_z(Overlap g, double separations) {
  if (g.value() == 0.0) throw DomainError("lambda_z: undefined at g = 0");
  return separations * 2.0 / (g.value() * g.value());
}

cdouble eval_profile(const WaveProfile& p, double x) {
  const double L = p.slit_scale;
  return eval_unit(form_of(p.component, p.plane), p.g.value(), x / L) / std::sqrt(L);
}

double rectangle_half_width(Component c, Plane p) {
  const ProfileForm& form = form_of(c, p);
  return form.rectangle ? form.rect.half_width : 0.0;
}

cdouble overlap_AS_approx(Overlap g) {
  return std::polar(kSqrt2 * g.value(), -kPi / 8.0);
}

cdouble overlap_BS_approx(Overlap g) {
  return std::polar(kSqrt2 * g.value(), kPi / 8.0);
}

double sigma_of_g(Overlap g) {
  return 2.0 * kSqrt2 * g.value() * std::cos(kPi / 8.0);
}

double overlap_denominator(double g) {
  return 1.0 + g - (2.0 + kSqrt2) * g * g;
}

double prob_hit_full(Overlap g) {
  const double x = g.value();
  const double u = overlap_denominator(x);
  if (!(u > 0.0)) throw DomainError("prob_hit_full: u(g) <= 0");
  return 0.5 * u + x * x * x * x / u;
}

double prob_hit_approx(Overlap g) {
  const double x = g.value();
  return 0.5 + 0.5 * x - (1.0 + 1.0 / kSqrt2) * x * x;
}

double prob_magic_bullet(Overlap g) {
  return 2.0 * prob_hit_full(g) - 1.0;
}

std::string_view to_string(Objective o) {
  return o == Objective::full ? "full" : "approximate";
}

Objective parse_objective(std::string_view text) {
  if (text == "full") return Objective::full;
  if (text == "approximate" || text == "approx") return Objective::approximate;
  throw std::invalid_argument("unknown objective '" + std::string(text) +
                              "' (expected full or approximate)");
}

Optimum optimize_overlap(Objective objective) {
  const auto p_hit = [objective](double g) {
    return objective == Objective::full ? prob_hit_full(Overlap(g)) : prob_hit_approx(Overlap(g));
  };
  const auto p_mb = [&p_hit](double g) { return 2.0 * p_hit(g) - 1.0; };
  const LineSearchResult best = guarded_maximize(p_mb, kOptimizerLow, kOptimizerHigh,
                                                 kOptimizerTolerance, kGuardSweepPoints);
  const double hit = p_hit(best.x);
  return {Overlap(best.x), hit, 2.0 * hit - 1.0, best.iterations};
}

}  // namespace mb
