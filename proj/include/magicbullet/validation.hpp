#pragma once

#include <string>
#include <vector>

#include "magicbullet/propagate.hpp"
#include "magicbullet/state.hpp"

namespace mb {

enum class Comparison { less, greater_equal, info };

struct CheckResult {
  std::string name;
  double measured;
  double threshold;
  Comparison comparison;
  bool pass;
  std::string detail;
};

CheckResult make_check(std::string name, double measured, double threshold, Comparison cmp,
                       std::string detail = {});

struct Tolerances {
  double propagation_l2 = 1e-2;
  double phase_coherence = 0.05;      // rad
  double overlap_ab = 2e-3;
  double overlap_plane_invariance = 5e-3;
  double overlap_as_modulus = 5e-3;
  double overlap_as_phase = 0.05;     // rad
  double method_agreement = 1e-3;
  double modal_vs_spatial = 1e-2;
};

/// Smallest symmetric half-width holding `fraction` of a closed-form profile's
/// (unit) mass.
double central_mass_half_width(Component c, Plane p, Overlap g, double fraction = 0.9);

/// Source-plane sampling of one component, ready for propagation onto
/// `out_grid` across `separations` multiples of R.
SampledField source_samples(Component c, Overlap g, double separations, const GridSpec& out_grid,
                            double source_half_width);

/// Numerical propagation of one source closed form compared with its
/// target-plane closed form on the central 90%-mass interval.
struct PropagationResidual {
  Plane plane;
  Component component;
  double half_width;        // central interval compared
  cdouble own_phase;        // calibrate_phase for this component alone
  double own_error;         // relative L2 error after own_phase
  double shared_error;      // relative L2 error after the plane's shared phase
  double phase_offset;      // |arg(own_phase / shared phase)|, rad
};

inline constexpr double kDefaultSourceHalfWidth = 2000.0;

/// The plane's shared phase is calibrated on its rectangle component (A at
/// planeA, B at planeB) and applied to all three.
std::vector<PropagationResidual> closed_form_residuals(
    Overlap g, KernelConvention convention = KernelConvention::standard,
    double source_half_width = kDefaultSourceHalfWidth);

struct ValidationOptions {
  double g = 0.1502;
  KernelConvention convention = KernelConvention::standard;
  bool exact_sigma = false;
  bool spatial = true;  // modal vs spatial probabilities (large grids)
  double source_half_width = kDefaultSourceHalfWidth;
  Tolerances tolerances{};
};

/// Full oracle suite, sorted by check name.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace mb
