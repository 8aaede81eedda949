#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "magicbullet/state.hpp"

namespace mb {

/// Identifier of the position generator; written into every run report.
inline constexpr std::string_view kGeneratorId = "mt19937_64+splitmix64-blocks4096";

/// Shots are drawn in fixed blocks, each from its own generator seeded by
/// (seed, block index), so merged counts do not depend on the shard count.
inline constexpr std::size_t kShotsPerBlock = 4096;

/// Seed of an independent stream derived from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// How the window mass maps onto probability. `window` renormalizes |f|^2
/// over the grid. `unit_norm` treats f as part of a unit-norm state: the mass
/// missing from the window is a chance of landing beyond it.
enum class Normalization { window, unit_norm };

/// Inverse-CDF sampler for the piecewise-linear density |f(x)|^2 on a grid.
class DensitySampler {
 public:
  /// Throws DegenerateError when the field has zero norm on its window.
  explicit DensitySampler(const SampledField& field, Normalization norm = Normalization::window);

  /// Position for a uniform variate u in [0, 1). Shots that escape the window
  /// (unit_norm only) return +infinity.
  double position(double u) const;

  /// n positions; deterministic for fixed (seed, n).
  std::vector<double> draw(std::size_t n, std::uint64_t seed) const;

  /// Number of the n shots landing in [a, b]; sharded over `shards` workers
  /// (0 picks the hardware concurrency). Identical for every shard count.
  std::size_t count_in(double a, double b, std::size_t n, std::uint64_t seed,
                       std::size_t shards = 0) const;

  double total_mass() const { return cumulative_.back(); }

 private:
  GridSpec grid_;
  std::vector<double> density_;
  std::vector<double> cumulative_;  // mass up to node i
  double scale_;                    // probability 1 in mass units
};

/// n i.i.d. positions from |f|^2 (normalized over the window).
std::vector<double> sample_positions(const SampledField& f, std::size_t n, std::uint64_t seed);

struct SampleRun {
  std::uint64_t seed;
  std::size_t n_shots;
  Plane plane;
  double a;
  double b;
  std::size_t hits;
  double estimate;
  double ci_low;
  double ci_high;
};

/// Fills estimate and a 95% normal-approximation interval. For hits of 0 or
/// n the variance uses p = 0.5/n so the interval keeps a nonzero width.
SampleRun make_run(std::uint64_t seed, std::size_t n, Plane plane, double a, double b,
                   std::size_t hits);

/// Assembles the state at `plane` on `grid`, samples n shots and counts hits in
/// the plane's target interval. Mass outside the window counts as a miss.
SampleRun estimate_hit(const StateCoefficients& s, Plane plane, std::size_t n, std::uint64_t seed,
                       const GridSpec& grid);
SampleRun estimate_hit(const StateCoefficients& s, Plane plane, std::size_t n, std::uint64_t seed);

/// Magic-bullet lower bound p_A + p_B - 1 from two independent runs.
struct PairedBound {
  SampleRun run_a;
  SampleRun run_b;
  double bound;
  double ci_low;
  double ci_high;
};

PairedBound combine_runs(const SampleRun& run_a, const SampleRun& run_b);

/// Runs planeA with derive_seed(seed, 0) and planeB with derive_seed(seed, 1).
PairedBound paired_estimate(const StateCoefficients& s, std::size_t n, std::uint64_t seed,
                            const PlaneGrids& grids = PlaneGrids::defaults());

inline constexpr double kZ95 = 1.959963984540054;

}  // namespace mb
