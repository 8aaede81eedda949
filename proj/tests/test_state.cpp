#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "magicbullet/errors.hpp"
#include "magicbullet/state.hpp"

using namespace mb;

TEST_CASE("build_state at the reference points") {
  SUBCASE("g = 0 is the equal superposition") {
    const StateCoefficients s = build_state(Overlap(0.0));
    CHECK(std::abs(s.c_A - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.c_B - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(s.c_S == cdouble{0.0, 0.0});
  }
  SUBCASE("g = 0.1502") {
    const StateCoefficients s = build_state(Overlap(0.1502));
    CHECK(s.sigma == doctest::Approx(0.3924915146488635).epsilon(1e-14));
    CHECK(s.norm_sq == doctest::Approx(2.146350410928641).epsilon(1e-14));
    CHECK(std::abs(s.c_S + s.sigma * s.c_A) < 1e-15);
  }
  SUBCASE("norm_sq stays positive just below the domain edge") {
    const StateCoefficients s = build_state(Overlap(0.7071));
    CHECK(s.norm_sq == doctest::Approx(5.192224303126716e-5).epsilon(1e-6));
    CHECK(s.norm_sq > 0.0);
  }
}

TEST_CASE("modal probabilities") {
  const TargetProbabilities p = modal_probabilities(build_state(Overlap(0.1502)));
  CHECK(std::abs(p.p_A - 0.537062) < 5e-7);
  CHECK(p.p_B == doctest::Approx(p.p_A).epsilon(1e-15));
  CHECK(std::abs(p.p_mb - 0.074124) < 5e-7);
  CHECK(std::abs(p.p_S_residual) < 1e-28);

  const TargetProbabilities p0 = modal_probabilities(build_state(Overlap(0.0)));
  CHECK(p0.p_A == doctest::Approx(0.5));
  CHECK(std::abs(p0.p_mb) < 1e-15);

  CHECK(modal_probabilities(build_state(Overlap(0.35))).p_mb ==
        doctest::Approx(-0.03603057346132598).epsilon(1e-12));

  CHECK_THROWS(modal_probabilities(build_state(Overlap(0.15), Variant::hard_screen)));
}

TEST_CASE("modal probabilities match the closed form on random g") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 0.7);
  for (int i = 0; i < 100; ++i) {
    const Overlap g(dist(rng));
    const StateCoefficients s = build_state(g);
    CHECK(std::abs(modal_probabilities(s).p_A - prob_hit_full(g)) < 1e-12);
    CHECK(std::abs(modal_blocked_amplitude(s)) < 1e-15);

    // Norm of c_A|A> + c_B|B> + c_S|S> with the rectangle-amplitude overlaps.
    const cdouble as = overlap_AS_approx(g);
    const cdouble bs = overlap_BS_approx(g);
    const double norm = std::norm(s.c_A) + std::norm(s.c_B) + std::norm(s.c_S) +
                        2.0 * std::real(std::conj(s.c_A) * s.c_B * g.value() +
                                        std::conj(s.c_A) * s.c_S * as +
                                        std::conj(s.c_B) * s.c_S * bs);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact overlaps quantify the rectangle-amplitude approximation") {
  const ExactOverlaps ex = exact_overlaps(Overlap(0.15));
  CHECK(std::abs(ex.ab_plane_a.real() - 0.15) < 2e-3);
  CHECK(std::abs(ex.ab_plane_a - ex.ab_plane_b) < 5e-3);
  CHECK(std::abs(std::abs(ex.as) - std::sqrt(2.0) * 0.15) < 5e-3);
  CHECK(std::abs(std::arg(ex.as) + kPi / 8.0) < 0.05);
  CHECK(std::abs(std::abs(ex.bs) - std::sqrt(2.0) * 0.15) < 5e-3);
  CHECK(std::abs(std::arg(ex.bs) - kPi / 8.0) < 0.05);
  const cdouble sig = exact_sigma(Overlap(0.15));
  CHECK(sig.real() == doctest::Approx(sigma_of_g(Overlap(0.15))).epsilon(0.02));
}

TEST_CASE("modal source density at the origin") {
  const StateCoefficients s = build_state(Overlap(0.1502));
  const SampledField f = assemble_field(s, Plane::source, GridSpec::centered(3.0, 7));
  const cdouble expected = s.c_A * eval_profile({Component::A, Plane::source, s.g, 1.0}, 0.0) +
                           s.c_B * eval_profile({Component::B, Plane::source, s.g, 1.0}, 0.0) +
                           s.c_S * 0.5;
  CHECK(std::abs(f[3] - expected) < 1e-15);
  CHECK(std::norm(f[3]) > 0.0);
}

TEST_CASE("planeB is planeA stretched by 2 and halved") {
  const StateCoefficients s = build_state(Overlap(0.1502));
  const std::size_t n = 6001;
  const SampledField a = assemble_field(s, Plane::plane_a, GridSpec::centered(30.0, n));
  const SampledField b = assemble_field(s, Plane::plane_b, GridSpec::centered(60.0, n));
  const std::vector<double> da = a.density();
  const std::vector<double> db = b.density();
  const double peak = *std::max_element(da.begin(), da.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(2.0 * db[i] - da[i]));
  CHECK(worst / peak < 0.02);
}

TEST_CASE("hard screen zeroes the blocked interval") {
  const StateCoefficients s = build_state(Overlap(0.1502), Variant::hard_screen);
  CHECK(s.c_S == cdouble{0.0, 0.0});
  CHECK(s.blocked_mass > 0.0);
  const SampledField f = assemble_field(s, Plane::source, GridSpec::centered(2000.0, 200001));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f.grid().x(i)) <= 2.0) REQUIRE(f[i] == cdouble{0.0, 0.0});
  }
  CHECK(window_mass(f) == doctest::Approx(1.0).epsilon(1e-12));
  const double frac = hard_screen_window_fraction(s, f.grid());
  CHECK(frac > 0.99);
  CHECK(frac <= 1.0);
}

TEST_CASE("spatial probabilities from the assembled fields") {
  SUBCASE("g = 0.1502") {
    const StateCoefficients s = build_state(Overlap(0.1502));
    const SpatialReport r = spatial_probabilities(s);
    const TargetProbabilities modal = modal_probabilities(s);
    CHECK(std::abs(r.probabilities.p_A - 0.537) < 1e-2);
    CHECK(r.probabilities.p_A >= modal.p_A - 1e-2);
    CHECK(r.probabilities.p_B >= modal.p_B - 1e-2);
    CHECK(r.captured_a > 0.999);
    CHECK(r.captured_b > 0.999);
    CHECK(r.warnings.empty());
    MESSAGE("source residual " << r.probabilities.p_S_residual);
    CHECK(r.probabilities.p_S_residual < 1e-3);
  }
  SUBCASE("g = 0") {
    const SpatialReport r = spatial_probabilities(build_state(Overlap(0.0)));
    CHECK(std::abs(r.probabilities.p_A - 0.5) < 1e-2);
    CHECK(std::abs(r.probabilities.p_B - 0.5) < 1e-2);
  }
  SUBCASE("central planeA interval at g = 0.1502") {
    const StateCoefficients s = build_state(Overlap(0.1502));
    const SampledField f = assemble_field(s, Plane::plane_a, GridSpec::centered(30.0, 12001));
    CHECK(std::abs(probability_in_interval(f, -0.5, 0.5) - 0.537) < 1e-2);
  }
}

TEST_CASE("target intervals") {
  CHECK(target_interval(Plane::source) == std::pair{-2.0, 2.0});
  CHECK(target_interval(Plane::plane_a) == std::pair{-0.5, 0.5});
  CHECK(target_interval(Plane::plane_b) == std::pair{-1.0, 1.0});
}
