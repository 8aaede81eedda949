#pragma once

#include "magicbullet/grid.hpp"

namespace mb {

enum class Direction { forward, backward };
enum class Method { direct_quadrature, fft_convolution };
// `conjugated` flips the kernel in both directions; used as a negative control.
enum class KernelConvention { standard, conjugated };

/// Fresnel propagation over a distance expressed as lambda * z (in L^2).
struct PropagationSpec {
  double lambda_z;
  Direction direction = Direction::forward;
  Method method = Method::direct_quadrature;
  KernelConvention convention = KernelConvention::standard;

  /// Propagation across `separations` multiples of R for overlap g.
  static PropagationSpec across(Overlap g, double separations,
                                Direction direction = Direction::forward,
                                Method method = Method::direct_quadrature);
};

/// Largest input spacing for which the kernel chirp stays below Nyquist when
/// mapping `input` onto `output`: dx <= lambda_z / (2 * max |x - x'|).
double max_alias_free_spacing(const GridSpec& input, const GridSpec& output, double lambda_z);

/// psi_out(x) = integral K(x - x') psi_in(x') dx' with
/// K(xi) = (lambda z)^{-1/2} exp(-i pi/4) exp(i pi xi^2 / (lambda z)) forward and
/// its complex conjugate backward. Throws AliasingError when the input spacing
/// exceeds max_alias_free_spacing. Results do not depend on the thread count.
SampledField fresnel_propagate(const SampledField& input, const PropagationSpec& spec,
                               const GridSpec& out_grid, Plane out_plane);

/// Unit phase phi maximizing Re(phi <reference|computed>). Throws
/// DegenerateError when the overlap vanishes.
cdouble calibrate_phase(const SampledField& reference, const SampledField& computed);

/// ||computed - reference|| / ||reference|| on the shared grid.
double relative_l2_error(const SampledField& reference, const SampledField& computed);

}  // namespace mb
