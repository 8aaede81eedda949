#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace mb {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
// Upper end (exclusive) of the overlap domain; the denominator u(g) vanishes here.
inline constexpr double kOverlapLimit = 0.70710678118654752440;

enum class Component { S, A, B };
enum class Plane { source, plane_a, plane_b };

std::string_view to_string(Component c);
std::string_view to_string(Plane p);
Component parse_component(std::string_view text);
Plane parse_plane(std::string_view text);

/// Beam overlap <A|B>, the single dimensionless parameter behind every
/// statistic of the prepared state. Always in [0, 1/sqrt(2)).
class Overlap {
 public:
  /// Throws DomainError outside [0, 1/sqrt(2)) or for non-finite input.
  explicit Overlap(double g);

  double value() const { return g_; }

  friend bool operator==(Overlap, Overlap) = default;

 private:
  double g_;
};

/// Unit-bearing geometry: slit half-scale L, plane separation R and axial
/// wavenumber k_z = p_z / hbar. All lengths share one (arbitrary) unit.
struct PhysicalConfig {
  double slit_scale;   // L
  double separation;   // R
  double wavenumber;   // k_z

  /// Throws DomainError unless all three are finite and positive.
  void validate() const;
};

/// g = sqrt(k_z L^2 / (pi R)). Throws DomainError when g >= 1/sqrt(2).
Overlap overlap_from_physical(const PhysicalConfig& cfg);

/// Inverse mapping, R = k_z L^2 / (pi g^2). Accepts g outside the state
/// domain so fixtures can be built for the error paths; g must be > 0.
PhysicalConfig physical_from_overlap(double g, double slit_scale, double wavenumber);

/// lambda * z for a propagation over `separations` multiples of R, in units
/// of L^2: lambda R = 2 L^2 / g^2.
double lambda_z(Overlap g, double separations);

/// Closed-form wavefunction of one state component at one plane.
struct WaveProfile {
  Component component;
  Plane plane;
  Overlap g;
  double slit_scale = 1.0;  // L, the unit of x
};

/// Complex amplitude <x|U|component> of the profile. The sinc forms switch to
/// their Taylor expansion for |x| < 1e-6 L, so x = 0 is finite.
cdouble eval_profile(const WaveProfile& p, double x);

/// Half-width of the rectangular support when the profile is a rectangle,
/// otherwise 0.
double rectangle_half_width(Component c, Plane p);

/// Rectangle-amplitude estimates of the source-plane overlaps.
cdouble overlap_AS_approx(Overlap g);
cdouble overlap_BS_approx(Overlap g);

/// Subtraction coefficient sigma = 2 sqrt(2) g cos(pi/8) that zeroes <S|psi>.
double sigma_of_g(Overlap g);

/// u(g) = 1 + g - (2 + sqrt(2)) g^2; zero exactly at g = 1/sqrt(2).
double overlap_denominator(double g);

/// Exact P(A) = P(B) = u/2 + g^4/u.
double prob_hit_full(Overlap g);

/// Second-order approximation 1/2 + g/2 - (1 + 1/sqrt(2)) g^2.
double prob_hit_approx(Overlap g);

/// P_MB = P(A) + P(B) - 1 = 2 P(A) - 1.
double prob_magic_bullet(Overlap g);

enum class Objective { full, approximate };

std::string_view to_string(Objective o);
Objective parse_objective(std::string_view text);

struct Optimum {
  Overlap g_star;
  double p_hit;
  double p_mb;  // 2 * p_hit - 1
  int iterations;
};

inline constexpr double kOptimizerLow = 0.0;
inline constexpr double kOptimizerHigh = 0.5;
inline constexpr double kOptimizerTolerance = 1e-6;
inline constexpr int kGuardSweepPoints = 101;

/// Maximizes the magic-bullet fraction over g in [0, 0.5] with a guarded
/// golden-section search. Throws InternalError if the guard sweep finds more
/// than one local maximum.
Optimum optimize_overlap(Objective objective = Objective::full);

}  // namespace mb
