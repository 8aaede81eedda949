#include "magicbullet/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magicbullet/errors.hpp"

namespace mb {

namespace {

constexpr std::size_t kRectangleOutputPoints = 401;
constexpr std::size_t kSincOutputPoints = 801;
constexpr double kSpacingSafety = 0.9;

Component rectangle_component(Plane p) {
  return p == Plane::plane_a ? Component::A : Component::B;
}

double separations_to(Plane p) { return p == Plane::plane_a ? 1.0 : 2.0; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt(cdouble z) {
  return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

double phase_distance(double a, double b) {
  return std::abs(std::arg(std::polar(1.0, a - b)));
}

}  // namespace

CheckResult make_check(std::string name, double measured, double threshold, Comparison cmp,
                       std::string detail) {
  bool pass = true;
  if (cmp == Comparison::less) pass = measured < threshold;
  if (cmp == Comparison::greater_equal) pass = measured >= threshold;
  if (!std::isfinite(measured)) pass = false;
  return {std::move(name), measured, threshold, cmp, pass, std::move(detail)};
}

double central_mass_half_width(Component c, Plane p, Overlap g, double fraction) {
  const double rect = rectangle_half_width(c, p);
  if (rect > 0.0) return fraction * rect;
  if (g.value() == 0.0) throw DomainError("sinc profiles have no finite mass region at g = 0");
  // |profile| is even and the profile has unit mass, so integrate from 0
  // outwards until half the requested fraction is reached.
  const WaveProfile profile{c, p, g, 1.0};
  const double a = g.value() * g.value();
  const double first_zero = 1.0 / a;  // smallest lobe width over all forms, in L
  const double step = first_zero / 2000.0;
  const double target = 0.5 * fraction;
  double cum = 0.0;
  double x = 0.0;
  double d_prev = std::norm(eval_profile(profile, 0.0));
  for (int i = 0; i < 100'000'000; ++i) {
    const double d_next = std::norm(eval_profile(profile, x + step));
    const double cell = 0.5 * (d_prev + d_next) * step;
    if (cum + cell >= target) return x + step * (target - cum) / cell;
    cum += cell;
    x += step;
    d_prev = d_next;
  }
  throw InternalError("central_mass_half_width did not converge");
}

SampledField source_samples(Component c, Overlap g, double separations, const GridSpec& out_grid,
                            double source_half_width) {
  const WaveProfile profile{c, Plane::source, g, 1.0};
  const double rect = rectangle_half_width(c, Plane::source);
  if (rect > 0.0) return sample(profile, GridSpec::centered(rect, 4001));
  const GridSpec window = GridSpec::centered(source_half_width, 2);
  const double limit = max_alias_free_spacing(window, out_grid, lambda_z(g, separations));
  return sample(profile, GridSpec::centered_with_spacing(source_half_width, kSpacingSafety * limit));
}

std::vector<PropagationResidual> closed_form_residuals(Overlap g, KernelConvention convention,
                                                      double source_half_width) {
  std::vector<PropagationResidual> out;
  for (Plane plane : {Plane::plane_a, Plane::plane_b}) {
    struct Item {
      Component c;
      SampledField reference;
      SampledField computed;
    };
    std::vector<Item> items;
    for (Component c : {Component::S, Component::A, Component::B}) {
      const double half = central_mass_half_width(c, plane, g);
      const bool rect = rectangle_half_width(c, plane) > 0.0;
      const GridSpec grid =
          GridSpec::centered(half, rect ? kRectangleOutputPoints : kSincOutputPoints);
      PropagationSpec spec = PropagationSpec::across(g, separations_to(plane));
      spec.convention = convention;
      const SampledField input = source_samples(c, g, separations_to(plane), grid, source_half_width);
      items.push_back({c, sample(WaveProfile{c, plane, g, 1.0}, grid),
                       fresnel_propagate(input, spec, grid, plane)});
    }
    const auto rect_it = std::find_if(items.begin(), items.end(), [&](const Item& it) {
      return it.c == rectangle_component(plane);
    });
    const cdouble shared = calibrate_phase(rect_it->reference, rect_it->computed);
    for (const Item& it : items) {
      const cdouble own = calibrate_phase(it.reference, it.computed);
      out.push_back({plane, it.c, it.reference.grid().x_max, own,
                     relative_l2_error(it.reference, it.computed.scaled(own)),
                     relative_l2_error(it.reference, it.computed.scaled(shared)),
                     phase_distance(std::arg(own), std::arg(shared))});
    }
  }
  return out;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  const Overlap g(options.g);
  const Tolerances& tol = options.tolerances;
  std::vector<CheckResult> checks;

  // Closed forms against numerical Fresnel propagation.
  for (const PropagationResidual& r : closed_form_residuals(g, options.convention,
                                                           options.source_half_width)) {
    const std::string where =
        std::string(to_string(r.plane)) + "/" + std::string(to_string(r.component));
    checks.push_back(make_check("propagation/" + where, r.shared_error, tol.propagation_l2,
                                Comparison::less,
                                "own-phase residual " + fmt(r.own_error) + ", half-width " +
                                    fmt(r.half_width) + " L"));
    checks.push_back(make_check("phase_coherence/" + where, r.phase_offset, tol.phase_coherence,
                                Comparison::less,
                                "calibrated phase " + fmt(std::arg(r.own_phase)) + " rad"));
  }

  // Direct quadrature against FFT convolution on the source-A -> planeA run.
  {
    const double half = central_mass_half_width(Component::A, Plane::plane_a, g);
    const GridSpec probe = GridSpec::centered(half, 2);
    const SampledField input = source_samples(Component::A, g, 1.0, probe, options.source_half_width);
    const double dx = input.grid().spacing();
    const auto steps = static_cast<std::size_t>(std::floor(2.0 * half / dx));
    const GridSpec out{-half, -half + static_cast<double>(steps) * dx, steps + 1};
    PropagationSpec spec = PropagationSpec::across(g, 1.0);
    spec.convention = options.convention;
    const SampledField direct = fresnel_propagate(input, spec, out, Plane::plane_a);
    spec.method = Method::fft_convolution;
    const SampledField fft = fresnel_propagate(input, spec, out, Plane::plane_a);
    checks.push_back(make_check("method_agreement/source_A_to_planeA",
                                relative_l2_error(direct, fft), tol.method_agreement,
                                Comparison::less));
  }

  // Rectangle-amplitude overlap estimates against quadrature.
  const ExactOverlaps ov = exact_overlaps(g);
  const double gv = g.value();
  checks.push_back(make_check("overlap/AB_planeA", std::abs(ov.ab_plane_a - gv), tol.overlap_ab,
                              Comparison::less,
                              "exact <A|B> = " + fmt(ov.ab_plane_a)));
  checks.push_back(make_check("overlap/AB_plane_invariance", std::abs(ov.ab_plane_a - ov.ab_plane_b),
                              tol.overlap_plane_invariance, Comparison::less,
                              "planeB <A|B> = " + fmt(ov.ab_plane_b)));
  checks.push_back(make_check("overlap/AS_modulus", std::abs(std::abs(ov.as) - kSqrt2 * gv),
                              tol.overlap_as_modulus, Comparison::less,
                              "|<A|S>| = " + fmt(std::abs(ov.as))));
  checks.push_back(make_check("overlap/AS_phase", phase_distance(std::arg(ov.as), -kPi / 8.0),
                              tol.overlap_as_phase, Comparison::less,
                              "arg <A|S> = " + fmt(std::arg(ov.as)) + " rad"));
  checks.push_back(make_check("overlap/BS_modulus", std::abs(std::abs(ov.bs) - kSqrt2 * gv),
                              tol.overlap_as_modulus, Comparison::less,
                              "|<B|S>| = " + fmt(std::abs(ov.bs))));
  checks.push_back(make_check("overlap/BS_phase", phase_distance(std::arg(ov.bs), kPi / 8.0),
                              tol.overlap_as_phase, Comparison::less,
                              "arg <B|S> = " + fmt(std::arg(ov.bs)) + " rad"));

  if (options.exact_sigma) {
    const cdouble se = std::conj(ov.as) + std::conj(ov.bs);
    checks.push_back(make_check("sigma/exact_minus_approx", se.real() - sigma_of_g(g), 0.0,
                                Comparison::info,
                                "sigma_exact = " + fmt(se.real()) + ", imaginary remainder " +
                                    fmt(se.imag())));
  }

  if (options.spatial) {
    const StateCoefficients state = build_state(g);
    const TargetProbabilities modal = modal_probabilities(state);
    const SpatialReport spatial = spatial_probabilities(state);
    checks.push_back(make_check("probabilities/spatial_minus_modal_A",
                                spatial.probabilities.p_A - modal.p_A, -tol.modal_vs_spatial,
                                Comparison::greater_equal,
                                "spatial " + fmt(spatial.probabilities.p_A) + ", modal " +
                                    fmt(modal.p_A)));
    checks.push_back(make_check("probabilities/spatial_minus_modal_B",
                                spatial.probabilities.p_B - modal.p_B, -tol.modal_vs_spatial,
                                Comparison::greater_equal,
                                "spatial " + fmt(spatial.probabilities.p_B) + ", modal " +
                                    fmt(modal.p_B)));
    checks.push_back(make_check("probabilities/source_residual", spatial.probabilities.p_S_residual,
                                0.0, Comparison::info));
  }

  std::sort(checks.begin(), checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  return checks;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace mb
