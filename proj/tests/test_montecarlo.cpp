#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "magicbullet/errors.hpp"
#include "magicbullet/montecarlo.hpp"

using namespace mb;

namespace {

SampledField flat(double half_width, std::size_t n) {
  return {GridSpec::centered(half_width, n), std::vector<cdouble>(n, cdouble{0.5, 0.0}), Plane::plane_a};
}

}  // namespace

TEST_CASE("uniform density has the right mean and spread") {
  const std::size_t n = 1'000'000;
  const std::vector<double> xs = sample_positions(flat(2.0, 401), n, 1234);
  REQUIRE(xs.size() == n);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double sd = 4.0 / std::sqrt(12.0);
  CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  CHECK(std::sqrt(var / n) == doctest::Approx(sd).epsilon(3e-3));
  CHECK(*std::min_element(xs.begin(), xs.end()) >= -2.0);
  CHECK(*std::max_element(xs.begin(), xs.end()) <= 2.0);
}

TEST_CASE("mass confined to one node stays within its two cells") {
  const GridSpec grid = GridSpec::centered(5.0, 11);
  std::vector<cdouble> v(grid.n, 0.0);
  v[6] = 1.0;
  const SampledField f(grid, v, Plane::plane_b);
  for (double x : sample_positions(f, 10000, 5)) {
    REQUIRE(x >= grid.x(5));
    REQUIRE(x <= grid.x(7));
  }
}

TEST_CASE("unit-norm sampling lets missing mass escape the window") {
  // Window mass 0.25 of a unit-norm state: three quarters of the shots land
  // outside and never hit.
  const SampledField f = flat(0.5, 101);
  const DensitySampler window(f);
  const DensitySampler unit(f, Normalization::unit_norm);
  CHECK(unit.total_mass() == doctest::Approx(0.25));
  CHECK(std::isinf(unit.position(0.3)));
  CHECK(unit.position(0.125) == doctest::Approx(0.0).scale(1.0));
  const std::size_t n = 100000;
  const double frac = static_cast<double>(unit.count_in(-0.5, 0.5, n, 8)) / n;
  CHECK(std::abs(frac - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / n));
  CHECK(window.count_in(-0.5, 0.5, n, 8) == n);
}

TEST_CASE("a zero field cannot be sampled") {
  const SampledField zero(GridSpec::centered(1.0, 5), std::vector<cdouble>(5, 0.0), Plane::plane_a);
  CHECK_THROWS_AS(DensitySampler{zero}, DegenerateError);
}

TEST_CASE("inverse CDF reproduces the linear interpolant") {
  // Density x on [0, 1] has CDF x^2, so position(u) = sqrt(u).
  const SampledField ramp(GridSpec{0.0, 1.0, 2}, {cdouble{0.0, 0.0}, cdouble{1.0, 0.0}}, Plane::plane_a);
  const DensitySampler sampler(ramp);
  for (double u : {0.0, 0.01, 0.25, 0.5, 0.81, 0.999}) {
    CHECK(sampler.position(u) == doctest::Approx(std::sqrt(u)).epsilon(1e-12));
  }
}

TEST_CASE("determinism and shard independence") {
  const StateCoefficients s = build_state(Overlap(0.1502));
  const SampledField f = assemble_field(s, Plane::plane_a, GridSpec::centered(30.0, 12001));
  const DensitySampler sampler(f);
  CHECK(sampler.draw(5000, 77) == sampler.draw(5000, 77));
  CHECK(sampler.draw(5000, 77) != sampler.draw(5000, 78));

  const std::size_t n = 50'000;
  const std::size_t reference = sampler.count_in(-0.5, 0.5, n, 99, 1);
  for (std::size_t shards : {2u, 3u, 7u, 16u}) {
    CHECK(sampler.count_in(-0.5, 0.5, n, 99, shards) == reference);
  }
  // Counting agrees with drawing and counting by hand.
  const std::vector<double> xs = sampler.draw(n, 99);
  const auto manual = std::count_if(xs.begin(), xs.end(), [](double x) { return x >= -0.5 && x <= 0.5; });
  CHECK(static_cast<std::size_t>(manual) == reference);
}

TEST_CASE("derived seeds are distinct") {
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
  CHECK(derive_seed(42, 0) == derive_seed(42, 0));
}

TEST_CASE("confidence intervals") {
  const SampleRun r = make_run(1, 100000, Plane::plane_a, -0.5, 0.5, 53706);
  CHECK(r.estimate == doctest::Approx(0.53706));
  const double radius = kZ95 * std::sqrt(0.53706 * (1 - 0.53706) / 100000.0);
  CHECK(r.ci_high - r.estimate == doctest::Approx(radius));
  CHECK(r.estimate - r.ci_low == doctest::Approx(radius));

  SUBCASE("no hits keeps a nonzero width") {
    const SampleRun z = make_run(1, 10, Plane::plane_a, -0.5, 0.5, 0);
    CHECK(z.estimate == 0.0);
    CHECK(z.ci_high > 0.0);
    CHECK(z.ci_low == 0.0);
  }
  SUBCASE("all hits keeps a nonzero width") {
    const SampleRun z = make_run(1, 10, Plane::plane_a, -0.5, 0.5, 10);
    CHECK(z.ci_low < 1.0);
    CHECK(z.ci_high == 1.0);
  }
  SUBCASE("hits cannot exceed shots") { CHECK_THROWS(make_run(1, 10, Plane::plane_a, -0.5, 0.5, 11)); }
}

TEST_CASE("hit estimates at the optimum") {
  const StateCoefficients s = build_state(Overlap(0.1502));
  const SampleRun a = estimate_hit(s, Plane::plane_a, 100000, 42, GridSpec::centered(4000.0, 4'000'001));
  CHECK(std::abs(a.estimate - 0.537) < 0.0031 + 0.001);
  CHECK(a.ci_low <= 0.537062);
  CHECK(a.ci_high >= 0.537062);
  CHECK_THROWS(estimate_hit(s, Plane::source, 100, 1, GridSpec::centered(10.0, 101)));

  SUBCASE("g = 0 gives one half") {
    const StateCoefficients s0 = build_state(Overlap(0.0));
    const SampleRun b = estimate_hit(s0, Plane::plane_b, 100000, 3, GridSpec::centered(60.0, 24001));
    CHECK(b.ci_low <= 0.5);
    CHECK(b.ci_high >= 0.5);
  }
}

TEST_CASE("paired bound") {
  const SampleRun a = make_run(1, 100, Plane::plane_a, -0.5, 0.5, 60);
  const SampleRun b = make_run(2, 100, Plane::plane_b, -1.0, 1.0, 55);
  const PairedBound pb = combine_runs(a, b);
  CHECK(pb.bound == doctest::Approx(0.15));
  const double radius = kZ95 * std::sqrt(0.6 * 0.4 / 100 + 0.55 * 0.45 / 100);
  CHECK(pb.ci_high - pb.bound == doctest::Approx(radius));
  CHECK_THROWS(combine_runs(a, a));
}
