#include <doctest.h>

#include <cmath>
#include <random>

#include "epsdyn/errors.hpp"
#include "epsdyn/margins.hpp"

using namespace epsdyn;

namespace {

// Analytic oracle for G = 1/(s(s+1)): |G| = 1 at w^2 = (sqrt(5)-1)/2 and the
// phase there is -90 - atan(w) degrees.
struct IntegratorLagOracle {
  double omega_gc = std::sqrt((std::sqrt(5.0) - 1.0) / 2.0);
  double pm_deg = 180.0 - 90.0 -
                  std::atan(std::sqrt((std::sqrt(5.0) - 1.0) / 2.0)) * 180.0 /
                      3.14159265358979323846;
};

}  // namespace

TEST_CASE("margins of 1/(s(s+1)) match the analytic oracle") {
  const IntegratorLagOracle oracle;
  const auto g = DelayRational(Polynomial::one(), Polynomial{0.0, 1.0, 1.0});
  const MarginReport r = stability_margins(g, FrequencyGrid::standard());

  REQUIRE(r.phase_margin_deg.has_value());
  CHECK(*r.phase_margin_deg == doctest::Approx(oracle.pm_deg).epsilon(1e-6));
  CHECK(*r.phase_margin_deg == doctest::Approx(51.827).epsilon(1e-3));
  REQUIRE(r.gain_crossover_rad_s.has_value());
  CHECK(*r.gain_crossover_rad_s ==
        doctest::Approx(oracle.omega_gc).epsilon(1e-9));
  CHECK(std::isinf(r.gain_margin_db));
  CHECK_FALSE(r.phase_crossover_rad_s.has_value());
}

TEST_CASE("margins of e^{-s}/s match the analytic oracle") {
  // |G| = 1/w: gain crossover at w = 1, phase there -90 - 57.2958 deg.
  // Phase hits -180 at w = pi/2 where |G| = 2/pi.
  const auto g = DelayRational(Polynomial::one(), Polynomial::s(), 1.0);
  const auto grid = FrequencyGrid::per_decade(0.01, 100.0, 200.0);
  const MarginReport r = stability_margins(sample(evaluator_of(g), grid),
                                           evaluator_of(g));

  const double pm_expect = 90.0 - 180.0 / 3.14159265358979323846;
  REQUIRE(r.phase_margin_deg.has_value());
  CHECK(*r.phase_margin_deg == doctest::Approx(pm_expect).epsilon(1e-9));
  CHECK(*r.phase_margin_deg == doctest::Approx(32.704).epsilon(1e-4));
  CHECK(*r.gain_crossover_rad_s == doctest::Approx(1.0).epsilon(1e-9));

  const double gm_expect = 20.0 * std::log10(3.14159265358979323846 / 2.0);
  CHECK(r.gain_margin_db == doctest::Approx(gm_expect).epsilon(1e-9));
  CHECK(r.gain_margin_db == doctest::Approx(3.9224).epsilon(1e-4));
  REQUIRE(r.phase_crossover_rad_s.has_value());
  CHECK(*r.phase_crossover_rad_s ==
        doctest::Approx(3.14159265358979323846 / 2.0).epsilon(1e-9));

  // The delay keeps crossing -180-360k; every crossing is reported and the
  // headline gain margin is the worst one.
  int phase_crossings = 0;
  for (const auto& c : r.all_crossovers) {
    if (!c.is_gain_crossover) {
      ++phase_crossings;
      CHECK(c.margin >= r.gain_margin_db - 1e-12);
    }
  }
  CHECK(phase_crossings >= 3);
}

TEST_CASE("sub-unity low-pass never crosses: undefined PM, infinite GM") {
  const auto g = DelayRational(Polynomial{0.5}, Polynomial{1.0, 1.0});
  const MarginReport r = stability_margins(g, FrequencyGrid::standard());
  CHECK_FALSE(r.phase_margin_deg.has_value());
  CHECK_FALSE(r.gain_crossover_rad_s.has_value());
  CHECK(std::isinf(r.gain_margin_db));
  CHECK(r.loop_stable());
}

TEST_CASE("margin sanity property: stable first-order with |G(0)| < 1") {
  std::mt19937 rng(40917);
  std::uniform_real_distribution<double> pole(0.05, 50.0);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = pole(rng);
    const double k = frac(rng) * a;  // |G(0)| = k/a < 1
    const auto g = DelayRational(Polynomial{k}, Polynomial{a, 1.0});
    const MarginReport r = stability_margins(g, FrequencyGrid::standard());
    CHECK_FALSE(r.phase_margin_deg.has_value());
    CHECK(std::isinf(r.gain_margin_db));
  }
}

TEST_CASE("margins without an evaluator fall back to interpolation") {
  const auto g = DelayRational(Polynomial::one(), Polynomial{0.0, 1.0, 1.0});
  const auto fr = sample(evaluator_of(g), FrequencyGrid::standard());
  const MarginReport r = stability_margins(fr);
  REQUIRE(r.phase_margin_deg.has_value());
  CHECK(*r.phase_margin_deg == doctest::Approx(51.827).epsilon(1e-3));
  CHECK(*r.gain_crossover_rad_s == doctest::Approx(0.78615).epsilon(1e-3));
}

TEST_CASE("narrow grids are rejected") {
  const auto g = DelayRational(Polynomial::one(), Polynomial{1.0, 1.0});
  const auto narrow = FrequencyGrid::log_spaced(1.0, 50.0, 64);
  CHECK_THROWS_AS(
      (void)stability_margins(sample(evaluator_of(g), narrow), evaluator_of(g)),
      GridError);
}

TEST_CASE("phase unwrap uses nearest-multiple continuation") {
  const std::vector<double> raw = {-3.0, 3.0, -3.0};  // wraps at +/-pi
  const std::vector<double> un = unwrap_phase(raw);
  CHECK(un[0] == -3.0);
  CHECK(un[1] == doctest::Approx(3.0 - 2.0 * 3.14159265358979323846));
  CHECK(un[2] == doctest::Approx(-3.0));
}
