#include "magicbullet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "magicbullet/errors.hpp"

namespace mb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// 53 random bits mapped onto [0, 1).
double unit_variate(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 block_generator(std::uint64_t seed, std::size_t block) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(block))));
}

std::size_t block_count(std::size_t n) {
  return (n + kShotsPerBlock - 1) / kShotsPerBlock;
}

std::size_t block_size(std::size_t n, std::size_t block) {
  return std::min(kShotsPerBlock, n - block * kShotsPerBlock);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) + stream);
}

DensitySampler::DensitySampler(const SampledField& field, Normalization norm)
    : grid_(field.grid()), density_(field.density()), cumulative_(field.size(), 0.0) {
  const double dx = grid_.spacing();
  for (std::size_t i = 1; i < density_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + 0.5 * (density_[i - 1] + density_[i]) * dx;
  }
  if (!(cumulative_.back() > 0.0)) {
    throw DegenerateError("cannot sample a field with zero norm on its window");
  }
  scale_ = norm == Normalization::window ? cumulative_.back() : std::max(cumulative_.back(), 1.0);
}

double DensitySampler::position(double u) const {
  const double target = u * scale_;
  if (target >= cumulative_.back()) return std::numeric_limits<double>::infinity();
  // First node whose cumulative mass exceeds the target; the cell ends there.
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t cell = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  cell = std::min(cell, density_.size() - 2);
  const double dx = grid_.spacing();
  const double d0 = density_[cell];
  const double d1 = density_[cell + 1];
  // Solve d0 t + (d1 - d0) t^2 / 2 = r for t in [0, 1], r being the mass left
  // inside the cell in density units.
  const double r = std::clamp((target - cumulative_[cell]) / dx, 0.0, 0.5 * (d0 + d1));
  const double disc = std::max(d0 * d0 + 2.0 * (d1 - d0) * r, 0.0);
  const double denom = d0 + std::sqrt(disc);
  const double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
  return grid_.x(cell) + std::clamp(t, 0.0, 1.0) * dx;
}

std::vector<double> DensitySampler::draw(std::size_t n, std::uint64_t seed) const {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t blk = 0; blk < block_count(n); ++blk) {
    std::mt19937_64 rng = block_generator(seed, blk);
    for (std::size_t k = 0; k < block_size(n, blk); ++k) out.push_back(position(unit_variate(rng)));
  }
  return out;
}

std::size_t DensitySampler::count_in(double a, double b, std::size_t n, std::uint64_t seed,
                                     std::size_t shards) const {
  const std::size_t blocks = block_count(n);
  if (shards == 0) shards = std::max(1u, std::thread::hardware_concurrency());
  shards = std::max<std::size_t>(1, std::min(shards, blocks));
  std::vector<std::size_t> counts(shards, 0);
  const auto work = [&](std::size_t shard) {
    std::size_t hits = 0;
    for (std::size_t blk = shard; blk < blocks; blk += shards) {
      std::mt19937_64 rng = block_generator(seed, blk);
      for (std::size_t k = 0; k < block_size(n, blk); ++k) {
        const double x = position(unit_variate(rng));
        if (x >= a && x <= b) ++hits;
      }
    }
    counts[shard] = hits;
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t s = 0; s < shards; ++s) pool.emplace_back(work, s);
  }
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  return total;
}

std::vector<double> sample_positions(const SampledField& f, std::size_t n, std::uint64_t seed) {
  return DensitySampler(f).draw(n, seed);
}

SampleRun make_run(std::uint64_t seed, std::size_t n, Plane plane, double a, double b,
                   std::size_t hits) {
  if (n == 0) throw std::invalid_argument("a sample run needs at least one shot");
  if (hits > n) throw std::invalid_argument("hits exceed shots");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double guard = 0.5 / nn;
  const double pv = std::clamp(p, guard, 1.0 - guard);
  const double radius = kZ95 * std::sqrt(pv * (1.0 - pv) / nn);
  return {seed, n, plane, a, b, hits, p, std::max(0.0, p - radius), std::min(1.0, p + radius)};
}

SampleRun estimate_hit(const StateCoefficients& s, Plane plane, std::size_t n, std::uint64_t seed,
                       const GridSpec& grid) {
  if (plane == Plane::source) throw std::invalid_argument("targets sit at planeA and planeB");
  const auto [a, b] = target_interval(plane);
  const DensitySampler sampler(assemble_field(s, plane, grid), Normalization::unit_norm);
  return make_run(seed, n, plane, a, b, sampler.count_in(a, b, n, seed));
}

SampleRun estimate_hit(const StateCoefficients& s, Plane plane, std::size_t n, std::uint64_t seed) {
  return estimate_hit(s, plane, n, seed, PlaneGrids::defaults().at(plane));
}

PairedBound combine_runs(const SampleRun& run_a, const SampleRun& run_b) {
  if (run_a.plane != Plane::plane_a || run_b.plane != Plane::plane_b) {
    throw std::invalid_argument("paired bound needs one planeA run and one planeB run");
  }
  if (run_a.seed == run_b.seed) throw std::invalid_argument("paired runs must use independent seeds");
  const auto variance = [](const SampleRun& r) {
    const double nn = static_cast<double>(r.n_shots);
    const double guard = 0.5 / nn;
    const double pv = std::clamp(r.estimate, guard, 1.0 - guard);
    return pv * (1.0 - pv) / nn;
  };
  const double bound = run_a.estimate + run_b.estimate - 1.0;
  const double radius = kZ95 * std::sqrt(variance(run_a) + variance(run_b));
  return {run_a, run_b, bound, bound - radius, bound + radius};
}

PairedBound paired_estimate(const StateCoefficients& s, std::size_t n, std::uint64_t seed,
                            const PlaneGrids& grids) {
  const SampleRun ra = estimate_hit(s, Plane::plane_a, n, derive_seed(seed, 0), grids.plane_a);
  const SampleRun rb = estimate_hit(s, Plane::plane_b, n, derive_seed(seed, 1), grids.plane_b);
  return combine_runs(ra, rb);
}

}  // namespace mb
