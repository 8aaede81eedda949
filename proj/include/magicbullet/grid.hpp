#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "magicbullet/analytic.hpp"

namespace mb {

/// Uniform 1-D grid x_i = x_min + i dx, i = 0..n-1, endpoints included.
struct GridSpec {
  double x_min;
  double x_max;
  std::size_t n;

  /// Throws std::invalid_argument unless x_min < x_max and n >= 2.
  void validate() const;
  double spacing() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * spacing(); }

  /// Symmetric grid [-half_width, half_width].
  static GridSpec centered(double half_width, std::size_t n);
  /// Symmetric grid whose spacing does not exceed max_spacing.
  static GridSpec centered_with_spacing(double half_width, double max_spacing);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Complex amplitudes on a GridSpec, tagged with the plane they live in.
/// Immutable after construction; all values finite.
class SampledField {
 public:
  SampledField(GridSpec grid, std::vector<cdouble> values, Plane plane);

  const GridSpec& grid() const { return grid_; }
  Plane plane() const { return plane_; }
  std::span<const cdouble> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  cdouble operator[](std::size_t i) const { return values_[i]; }

  std::vector<double> density() const;
  SampledField scaled(cdouble factor) const;

 private:
  GridSpec grid_;
  std::vector<cdouble> values_;
  Plane plane_;
};

/// Trapezoid weights for the grid (dx inside, dx/2 at both ends).
std::vector<double> trapezoid_weights(const GridSpec& grid);

SampledField sample(const WaveProfile& profile, const GridSpec& grid);

/// Trapezoidal estimate of the integral of conj(f) h. Throws MismatchError if
/// the grids or planes differ.
cdouble inner_product(const SampledField& f, const SampledField& h);

/// Integral of |f|^2 over the window (real part of <f|f>).
double window_mass(const SampledField& f);

/// Integral of the piecewise-linear interpolant of |f|^2 over [a, b], clamped
/// to [0, 1]. Equals the trapezoid rule when a and b are grid nodes. Throws
/// std::invalid_argument for a > b or an interval leaving the window.
double probability_in_interval(const SampledField& f, double a, double b);

inline constexpr double kScreenHalfWidth = 2.0;  // 2L

/// Zeroes the closed interval |x| <= half_width of a source-plane field. Not
/// renormalized.
SampledField apply_screen(const SampledField& f, double half_width = kScreenHalfWidth);

/// CSV with header x,re,im,density; one row per grid point.
void write_profile_csv(std::ostream& out, const SampledField& f);

}  // namespace mb
