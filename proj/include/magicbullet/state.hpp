#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magicbullet/grid.hpp"

namespace mb {

enum class Variant { modal_subtraction, hard_screen };
// Where sigma comes from: the rectangle-amplitude overlaps, or quadrature of
// the closed forms.
enum class SigmaMode { approximate, exact };

std::string_view to_string(Variant v);
std::string_view to_string(SigmaMode m);
Variant parse_variant(std::string_view text);
SigmaMode parse_sigma_mode(std::string_view text);

/// Quadrature overlaps of the closed-form profiles. Each pair is evaluated in
/// a plane where one partner is a rectangle: <A|B> at planeA (and at planeB as
/// a cross-check), <A|S> and <B|S> at the source.
struct ExactOverlaps {
  cdouble ab_plane_a;
  cdouble ab_plane_b;
  cdouble as;
  cdouble bs;
};

inline constexpr std::size_t kOverlapGridPoints = 20001;

ExactOverlaps exact_overlaps(Overlap g, std::size_t n = kOverlapGridPoints);

/// <S|A> + <S|B> from quadrature; its real part is the exact-mode sigma.
cdouble exact_sigma(Overlap g);

/// Amplitudes of |psi> = c_A |A> + c_B |B> + c_S |S>.
///
/// For modal_subtraction c_A = c_B = 1/sqrt(norm_sq) and c_S = -sigma/sqrt(norm_sq)
/// with norm_sq = 2 + 2<A|B> - sigma^2. For hard_screen the state is the
/// screened (|A> + |B>) with c_S = 0 and norm_sq = ||A + B||^2 minus the
/// blocked source-plane mass.
struct StateCoefficients {
  cdouble c_A;
  cdouble c_B;
  cdouble c_S;
  double sigma;
  double norm_sq;
  Overlap g;
  Variant variant;
  SigmaMode sigma_mode = SigmaMode::approximate;
  double blocked_mass = 0.0;  // hard_screen: source-plane mass of |A>+|B> on |x| <= 2L
};

/// Throws DomainError if norm_sq <= 0.
StateCoefficients build_state(Overlap g, Variant variant = Variant::modal_subtraction,
                              SigmaMode sigma_mode = SigmaMode::approximate);

struct TargetProbabilities {
  double p_A;
  double p_B;
  double p_S_residual;
  double p_mb;  // p_A + p_B - 1, negative when no magic-bullet bound exists
};

/// <S|psi> evaluated with the rectangle-amplitude overlaps.
cdouble modal_blocked_amplitude(const StateCoefficients& s);

/// Squared projections onto the flat target modes using the
/// rectangle-amplitude overlaps. Defined for modal_subtraction only.
TargetProbabilities modal_probabilities(const StateCoefficients& s);

/// Target (or blocked) interval of a plane, in units of L.
std::pair<double, double> target_interval(Plane plane);

/// psi sampled on `grid` at `plane`, lengths in units of L. For hard_screen at
/// the source this is the screened |A>+|B>, renormalized over the window. At
/// the target planes the blocked source piece is propagated numerically and
/// subtracted from the closed forms.
SampledField assemble_field(const StateCoefficients& s, Plane plane, const GridSpec& grid);

/// Fraction of the hard-screen state's norm held by a source-plane window.
double hard_screen_window_fraction(const StateCoefficients& s, const GridSpec& grid);

struct PlaneGrids {
  GridSpec source;
  GridSpec plane_a;
  GridSpec plane_b;

  /// Windows capturing >= 99.9% of the optimized state's mass per plane.
  static PlaneGrids defaults();
  const GridSpec& at(Plane p) const;
};

struct SpatialReport {
  TargetProbabilities probabilities;
  double captured_source;
  double captured_a;
  double captured_b;
  std::vector<std::string> warnings;
};

inline constexpr double kMassCaptureWarning = 0.99;

/// Slit-transmission probabilities integrated from the assembled fields. A
/// warning is attached for every window capturing < 99% of the norm.
SpatialReport spatial_probabilities(const StateCoefficients& s,
                                    const PlaneGrids& grids = PlaneGrids::defaults());

}  // namespace mb
