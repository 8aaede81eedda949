#include "magicbullet/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "magicbullet/errors.hpp"
#include "magicbullet/propagate.hpp"

namespace mb {

namespace {

// Blocked-piece sampling for hard-screen propagation, in units of L.
constexpr double kBlockedSpacing = 0.002;

SampledField sample_component(Component c, Plane p, Overlap g, const GridSpec& grid) {
  return sample(WaveProfile{c, p, g, 1.0}, grid);
}

double separations_to(Plane p) {
  switch (p) {
    case Plane::plane_a: return 1.0;
    case Plane::plane_b: return 2.0;
    case Plane::source: break;
  }
  throw std::invalid_argument("no propagation distance to the source plane");
}

// (|A> + |B>) restricted to |x| <= 2L at the source, on a grid fine enough
// for the kernel chirp towards `out`.
SampledField blocked_piece(Overlap g, Plane out_plane, const GridSpec& out) {
  const double h = kScreenHalfWidth;
  const double lz = lambda_z(g, separations_to(out_plane));
  const GridSpec probe{-h, h, 2};
  const double limit = max_alias_free_spacing(probe, out, lz);
  const GridSpec grid = GridSpec::centered_with_spacing(h, std::min(kBlockedSpacing, 0.5 * limit));
  std::vector<cdouble> v(grid.n);
  const WaveProfile a{Component::A, Plane::source, g, 1.0};
  const WaveProfile b{Component::B, Plane::source, g, 1.0};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    v[i] = eval_profile(a, x) + eval_profile(b, x);
  }
  return SampledField(grid, std::move(v), Plane::source);
}

double blocked_mass_of(Overlap g) {
  const GridSpec grid = GridSpec::centered(kScreenHalfWidth, kOverlapGridPoints);
  const SampledField a = sample_component(Component::A, Plane::source, g, grid);
  const SampledField b = sample_component(Component::B, Plane::source, g, grid);
  std::vector<cdouble> sum(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) sum[i] = a[i] + b[i];
  return window_mass(SampledField(grid, std::move(sum), Plane::source));
}

SampledField assemble_modal(const StateCoefficients& s, Plane plane, const GridSpec& grid) {
  const WaveProfile pa{Component::A, plane, s.g, 1.0};
  const WaveProfile pb{Component::B, plane, s.g, 1.0};
  const WaveProfile ps{Component::S, plane, s.g, 1.0};
  std::vector<cdouble> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    v[i] = s.c_A * eval_profile(pa, x) + s.c_B * eval_profile(pb, x) + s.c_S * eval_profile(ps, x);
  }
  return SampledField(grid, std::move(v), plane);
}

SampledField assemble_hard_screen(const StateCoefficients& s, Plane plane, const GridSpec& grid) {
  const WaveProfile pa{Component::A, plane, s.g, 1.0};
  const WaveProfile pb{Component::B, plane, s.g, 1.0};
  std::vector<cdouble> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    v[i] = eval_profile(pa, x) + eval_profile(pb, x);
  }
  if (plane == Plane::source) {
    SampledField screened = apply_screen(SampledField(grid, std::move(v), plane));
    const double mass = window_mass(screened);
    if (!(mass > 0.0)) throw DegenerateError("hard-screen field has no mass in the window");
    return screened.scaled(1.0 / std::sqrt(mass));
  }
  if (s.g.value() == 0.0) {
    throw DomainError("hard-screen propagation needs g > 0");
  }
  const SampledField piece = blocked_piece(s.g, plane, grid);
  const SampledField propagated =
      fresnel_propagate(piece, PropagationSpec::across(s.g, separations_to(plane)), grid, plane);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = s.c_A * (v[i] - propagated[i]);
  return SampledField(grid, std::move(v), plane);
}

}  // namespace

std::string_view to_string(Variant v) {
  return v == Variant::modal_subtraction ? "modal_subtraction" : "hard_screen";
}

std::string_view to_string(SigmaMode m) {
  return m == SigmaMode::approximate ? "approximate" : "exact";
}

Variant parse_variant(std::string_view text) {
  if (text == "modal_subtraction" || text == "modal") return Variant::modal_subtraction;
  if (text == "hard_screen" || text == "screen") return Variant::hard_screen;
  throw std::invalid_argument("unknown variant '" + std::string(text) +
                              "' (expected modal_subtraction or hard_screen)");
}

SigmaMode parse_sigma_mode(std::string_view text) {
  if (text == "approximate" || text == "approx") return SigmaMode::approximate;
  if (text == "exact") return SigmaMode::exact;
  throw std::invalid_argument("unknown sigma mode '" + std::string(text) +
                              "' (expected approximate or exact)");
}

ExactOverlaps exact_overlaps(Overlap g, std::size_t n) {
  const auto pair = [&](Component c1, Component c2, Plane p, double half) {
    const GridSpec grid = GridSpec::centered(half, n);
    return inner_product(sample_component(c1, p, g, grid), sample_component(c2, p, g, grid));
  };
  return {
      pair(Component::A, Component::B, Plane::plane_a, rectangle_half_width(Component::A, Plane::plane_a)),
      pair(Component::A, Component::B, Plane::plane_b, rectangle_half_width(Component::B, Plane::plane_b)),
      pair(Component::A, Component::S, Plane::source, rectangle_half_width(Component::S, Plane::source)),
      pair(Component::B, Component::S, Plane::source, rectangle_half_width(Component::S, Plane::source)),
  };
}

cdouble exact_sigma(Overlap g) {
  const ExactOverlaps o = exact_overlaps(g);
  return std::conj(o.as) + std::conj(o.bs);
}

StateCoefficients build_state(Overlap g, Variant variant, SigmaMode sigma_mode) {
  const double x = g.value();
  double sigma = sigma_of_g(g);
  double ab = x;
  if (sigma_mode == SigmaMode::exact && x > 0.0) {
    const ExactOverlaps o = exact_overlaps(g);
    sigma = (std::conj(o.as) + std::conj(o.bs)).real();
    ab = o.ab_plane_a.real();
  }
  if (variant == Variant::hard_screen) {
    const double blocked = x > 0.0 ? blocked_mass_of(g) : 0.0;
    // ||A + B||^2 = 2 + 2 Re<A|B>, using the quadrature overlap.
    const double ab_exact = x > 0.0 ? exact_overlaps(g).ab_plane_a.real() : 0.0;
    const double norm_sq = 2.0 + 2.0 * ab_exact - blocked;
    if (!(norm_sq > 0.0)) throw DomainError("hard-screen state has no unblocked mass");
    const double c = 1.0 / std::sqrt(norm_sq);
    return {c, c, 0.0, sigma, norm_sq, g, variant, sigma_mode, blocked};
  }
  const double norm_sq = 2.0 + 2.0 * ab - sigma * sigma;
  if (!(norm_sq > 0.0)) {
    throw DomainError("state normalization 2 + 2g - sigma^2 = " + std::to_string(norm_sq) +
                      " is not positive");
  }
  const double c = 1.0 / std::sqrt(norm_sq);
  return {c, c, -sigma * c, sigma, norm_sq, g, variant, sigma_mode, 0.0};
}

cdouble modal_blocked_amplitude(const StateCoefficients& s) {
  return s.c_A * std::conj(overlap_AS_approx(s.g)) + s.c_B * std::conj(overlap_BS_approx(s.g)) +
         s.c_S;
}

TargetProbabilities modal_probabilities(const StateCoefficients& s) {
  if (s.variant != Variant::modal_subtraction) {
    throw std::invalid_argument("modal probabilities are defined for the modal_subtraction state");
  }
  const double g = s.g.value();
  const double p_a = std::norm(s.c_A + s.c_B * g + s.c_S * overlap_AS_approx(s.g));
  const double p_b = std::norm(s.c_B + s.c_A * g + s.c_S * overlap_BS_approx(s.g));
  const double p_s = std::norm(modal_blocked_amplitude(s));
  return {p_a, p_b, p_s, p_a + p_b - 1.0};
}

std::pair<double, double> target_interval(Plane plane) {
  switch (plane) {
    case Plane::source: return {-2.0, 2.0};
    case Plane::plane_a: return {-0.5, 0.5};
    case Plane::plane_b: return {-1.0, 1.0};
  }
  throw std::invalid_argument("unknown plane");
}

SampledField assemble_field(const StateCoefficients& s, Plane plane, const GridSpec& grid) {
  grid.validate();
  return s.variant == Variant::modal_subtraction ? assemble_modal(s, plane, grid)
                                                 : assemble_hard_screen(s, plane, grid);
}

double hard_screen_window_fraction(const StateCoefficients& s, const GridSpec& grid) {
  const WaveProfile pa{Component::A, Plane::source, s.g, 1.0};
  const WaveProfile pb{Component::B, Plane::source, s.g, 1.0};
  std::vector<cdouble> raw(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    raw[i] = eval_profile(pa, grid.x(i)) + eval_profile(pb, grid.x(i));
  }
  return window_mass(apply_screen(SampledField(grid, std::move(raw), Plane::source))) / s.norm_sq;
}

PlaneGrids PlaneGrids::defaults() {
  return {GridSpec::centered(8000.0, 4'000'001), GridSpec::centered(4000.0, 4'000'001),
          GridSpec::centered(8000.0, 4'000'001)};
}

const GridSpec& PlaneGrids::at(Plane p) const {
  switch (p) {
    case Plane::source: return source;
    case Plane::plane_a: return plane_a;
    case Plane::plane_b: return plane_b;
  }
  throw std::invalid_argument("unknown plane");
}

SpatialReport spatial_probabilities(const StateCoefficients& s, const PlaneGrids& grids) {
  SpatialReport report{};
  double captured[3] = {0.0, 0.0, 0.0};
  double in_target[3] = {0.0, 0.0, 0.0};
  for (Plane p : {Plane::source, Plane::plane_a, Plane::plane_b}) {
    const auto idx = static_cast<std::size_t>(p);
    const SampledField field = assemble_field(s, p, grids.at(p));
    const auto [a, b] = target_interval(p);
    in_target[idx] = probability_in_interval(field, a, b);
    captured[idx] = window_mass(field);
    if (s.variant == Variant::hard_screen && p == Plane::source) {
      // The source field is renormalized over its window; report the fraction
      // of the true norm that the window holds.
      captured[idx] = hard_screen_window_fraction(s, grids.at(p));
    }
    if (captured[idx] < kMassCaptureWarning) {
      report.warnings.push_back(std::string(to_string(p)) + " window captures only " +
                                std::to_string(captured[idx]) + " of the norm");
    }
  }
  const double p_a = in_target[1];
  const double p_b = in_target[2];
  report.probabilities = {p_a, p_b, in_target[0], p_a + p_b - 1.0};
  report.captured_source = captured[0];
  report.captured_a = captured[1];
  report.captured_b = captured[2];
  return report;
}

}  // namespace mb
