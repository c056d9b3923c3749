#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "epsdyn/delay_rational.hpp"
#include "epsdyn/errors.hpp"
#include "epsdyn/frequency.hpp"

using namespace epsdyn;
using Cplx = std::complex<double>;

namespace {

DelayRational first_order(double k, double tau) {
  // k/(tau s + 1)
  return DelayRational(Polynomial{k}, Polynomial{1.0, tau});
}

// Deterministic random rational TF for property tests.
DelayRational random_tf(std::mt19937& rng, bool with_delay) {
  std::uniform_int_distribution<int> deg(0, 4);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> delay(0.0, 0.01);
  const int nd = deg(rng);
  const int dd = nd + deg(rng) % 3 + 1;
  std::vector<double> num(static_cast<std::size_t>(nd) + 1);
  std::vector<double> den(static_cast<std::size_t>(dd) + 1);
  for (double& c : num) c = coeff(rng);
  for (double& c : den) c = coeff(rng);
  if (num.back() == 0.0) num.back() = 1.0;
  if (den.back() == 0.0) den.back() = 1.0;
  if (den.front() == 0.0) den.front() = 0.5;
  return DelayRational(Polynomial(num), Polynomial(den),
                       with_delay ? delay(rng) : 0.0);
}

}  // namespace

TEST_CASE("polynomial basics") {
  const Polynomial p{2.0, 3.0, 1.0};  // s^2 + 3s + 2
  CHECK(p.degree() == 2);
  CHECK(p.eval(0.0) == 2.0);
  CHECK(p.eval(Cplx{0.0, 1.0}) == Cplx{1.0, 3.0});  // (j)^2 + 3j + 2
  CHECK(p.derivative() == Polynomial{3.0, 2.0});
  CHECK((p * Polynomial::one()) == p);
  CHECK(Polynomial{0.0, 0.0}.is_zero());
  CHECK(Polynomial{1.0, 2.0}.times_s() == Polynomial{0.0, 1.0, 2.0});
}

TEST_CASE("freq_eval first-order corner") {
  const auto tf = first_order(1.0, 1.0);  // 1/(s+1)
  const Cplx v = freq_eval(tf, 1.0);
  CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::arg(v) == doctest::Approx(-0.78539816339744831).epsilon(1e-12));
}

TEST_CASE("freq_eval pure delay") {
  const auto tf = DelayRational::pure_delay(0.1);
  const Cplx v = freq_eval(tf, 10.0);
  CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::arg(v) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("freq_eval derivative with corner at 100") {
  const auto tf = DelayRational(Polynomial{0.0, 1.0}, Polynomial{1.0, 0.01});
  const Cplx v = freq_eval(tf, 100.0);
  CHECK(std::abs(v) == doctest::Approx(100.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::arg(v) == doctest::Approx(0.78539816339744831).epsilon(1e-12));
}

TEST_CASE("freq_eval pole on the imaginary axis") {
  const auto tf = DelayRational(Polynomial::one(), Polynomial{1.0, 0.0, 1.0});
  CHECK_THROWS_AS((void)freq_eval(tf, 1.0), PoleEvaluationError);
  CHECK_THROWS_AS((void)freq_eval(tf, 0.0), Error);
  CHECK_THROWS_AS((void)freq_eval(tf, -2.0), Error);
}

TEST_CASE("tf_mul composes series") {
  const auto a = first_order(1.0, 1.0);
  const auto b = DelayRational(Polynomial::one(), Polynomial{2.0, 1.0});
  CHECK(a * b == DelayRational(Polynomial::one(), Polynomial{2.0, 3.0, 1.0}));

  const auto da = DelayRational::pure_delay(0.01);
  const auto db = DelayRational::pure_delay(0.02);
  CHECK((da * db).delay() == doctest::Approx(0.03).epsilon(1e-15));
}

TEST_CASE("tf_mul frequency-domain multiplicativity at 3.7 rad/s") {
  const auto a = first_order(1.0, 1.0);
  const auto b = DelayRational(Polynomial{0.0, 1.0}, Polynomial{5.0, 1.0});
  // Direct complex-arithmetic oracle, independent of the tf algebra.
  const Cplx s{0.0, 3.7};
  const Cplx expect = (1.0 / (s + 1.0)) * (s / (s + 5.0));
  const Cplx got = freq_eval(a * b, 3.7);
  CHECK(std::abs(got - expect) <= 1e-12 * std::abs(expect));
}

TEST_CASE("multiplicativity property over random pairs") {
  std::mt19937 rng(20240817);
  const auto grid = FrequencyGrid::log_spaced(0.1, 1.0e3, 25);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_tf(rng, true);
    const auto b = random_tf(rng, true);
    const auto prod = a * b;
    for (double w : grid.omegas()) {
      Cplx va, vb, vp;
      try {
        va = freq_eval(a, w);
        vb = freq_eval(b, w);
        vp = freq_eval(prod, w);
      } catch (const PoleEvaluationError&) {
        continue;
      }
      const Cplx expect = va * vb;
      CHECK(std::abs(vp - expect) <=
            1e-12 * std::max(1e-30, std::abs(expect)));
    }
  }
}

TEST_CASE("tf_add over a common denominator") {
  const auto a = first_order(1.0, 1.0);
  CHECK(a + a == DelayRational(Polynomial{2.0}, Polynomial{1.0, 1.0}));

  const auto b = DelayRational(Polynomial{0.0, 1.0}, Polynomial{1.0, 1.0});
  CHECK(a + b == DelayRational::constant(1.0));  // (s+1)/(s+1) trims exactly

  const auto da = DelayRational(Polynomial::one(), Polynomial{1.0, 1.0}, 0.01);
  const auto db = DelayRational(Polynomial::one(), Polynomial{1.0, 1.0}, 0.02);
  CHECK_THROWS_AS((void)(da + db), UnequalDelayError);
}

TEST_CASE("feedback closure") {
  const auto g = DelayRational(Polynomial{10.0}, Polynomial{0.0, 1.0});  // 10/s
  CHECK(feedback(g, DelayRational()) ==
        DelayRational(Polynomial{10.0}, Polynomial{10.0, 1.0}));

  const auto open = feedback(DelayRational(), DelayRational(Polynomial{}, Polynomial::one()));
  CHECK(open == DelayRational::constant(1.0));

  // Hand algebra: (s+1)/(s+2) closed over unity -> (s+1)/(2s+3).
  const auto g2 = DelayRational(Polynomial{1.0, 1.0}, Polynomial{2.0, 1.0});
  CHECK(feedback(g2, DelayRational()) ==
        DelayRational(Polynomial{1.0, 1.0}, Polynomial{3.0, 2.0}));

  const auto delayed = DelayRational(Polynomial::one(), Polynomial{1.0, 1.0}, 0.1);
  CHECK_THROWS_AS((void)feedback(delayed, DelayRational()), NonzeroDelayError);
  CHECK_THROWS_AS((void)feedback(DelayRational::constant(-1.0), DelayRational()),
                  DegenerateFeedbackError);
}

TEST_CASE("pade_rationalize first order is the textbook (1 - ts/2)/(1 + ts/2)") {
  const double tau = 0.2;
  const auto p1 = pade_rationalize(DelayRational::pure_delay(tau), 1);
  CHECK(p1 == DelayRational(Polynomial{1.0, -tau / 2.0}, Polynomial{1.0, tau / 2.0}));

  const auto rational = first_order(2.0, 0.5);
  CHECK(pade_rationalize(rational, 7) == rational);  // no delay: unchanged

  CHECK_THROWS_AS((void)pade_rationalize(DelayRational::pure_delay(0.1), 0), Error);
  CHECK_THROWS_AS((void)pade_rationalize(DelayRational::pure_delay(0.1), 11), Error);
}

TEST_CASE("pade order 4 tracks the exact delay to 1e-6 below 1000 rad/s") {
  const double tau = 0.001;
  const auto exact = DelayRational::pure_delay(tau);
  const auto approx = pade_rationalize(exact, 4);
  const auto grid = FrequencyGrid::log_spaced(0.1, 1000.0, 200);
  for (double w : grid.omegas()) {
    CHECK(std::abs(freq_eval(approx, w) - freq_eval(exact, w)) < 1e-6);
  }
}

TEST_CASE("pade error strictly decreases with order") {
  const double tau = 0.01;
  const auto exact = DelayRational::pure_delay(tau);
  const auto grid = FrequencyGrid::log_spaced(0.1, 1.0 / tau, 120);  // tau*w <= 1
  double prev = 1e300;
  for (int order = 1; order <= 6; ++order) {
    const auto approx = pade_rationalize(exact, order);
    double worst = 0.0;
    for (double w : grid.omegas()) {
      worst = std::max(worst, std::abs(freq_eval(approx, w) - freq_eval(exact, w)));
    }
    CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("poles of s^2+3s+2 and the marginal oscillator") {
  const auto stable = DelayRational(Polynomial::one(), Polynomial{2.0, 3.0, 1.0});
  const PoleAnalysis pa = poles_and_stability(stable);
  REQUIRE(pa.poles.size() == 2);
  CHECK(pa.poles[0].real() == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(pa.poles[1].real() == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(pa.stable);
  CHECK_FALSE(pa.marginal);

  const auto osc = DelayRational(Polynomial::one(), Polynomial{1.0, 0.0, 1.0});
  const PoleAnalysis po = poles_and_stability(osc);
  CHECK_FALSE(po.stable);  // strict test: imaginary-axis poles are not stable
  CHECK(po.marginal);
  CHECK(std::abs(po.poles[0] - Cplx{0.0, -1.0}) < 1e-9);
  CHECK(std::abs(po.poles[1] - Cplx{0.0, 1.0}) < 1e-9);
}

TEST_CASE("cubic poles against the closed-form factorization") {
  // s^3 + 2s^2 + 2s + 1 = (s + 1)(s^2 + s + 1); the quadratic roots are
  // (-1 +/- j sqrt(3))/2.
  const auto tf = DelayRational(Polynomial::one(), Polynomial{1.0, 2.0, 2.0, 1.0});
  const PoleAnalysis pa = poles_and_stability(tf);
  REQUIRE(pa.poles.size() == 3);
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  CHECK(std::abs(pa.poles[0] - Cplx{-1.0, 0.0}) < 1e-9);
  CHECK(std::abs(pa.poles[1] - Cplx{-0.5, -half_sqrt3}) < 1e-9);
  CHECK(std::abs(pa.poles[2] - Cplx{-0.5, half_sqrt3}) < 1e-9);
  CHECK(pa.stable);

  const auto delayed = DelayRational(Polynomial::one(), Polynomial{1.0, 1.0}, 0.1);
  CHECK_THROWS_AS((void)poles_and_stability(delayed), NonzeroDelayError);
}

TEST_CASE("root residual property") {
  std::mt19937 rng(7151);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(1, 8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = deg(rng);
    std::vector<double> den(static_cast<std::size_t>(n) + 1);
    for (double& c : den) c = coeff(rng);
    den.back() = den.back() == 0.0 ? 1.0 : den.back();
    const auto tf = DelayRational(Polynomial::one(), Polynomial(den));
    const PoleAnalysis pa = poles_and_stability(tf);
    double max_coeff = 0.0;
    for (double c : tf.den().coeffs()) max_coeff = std::max(max_coeff, std::abs(c));
    for (const auto& r : pa.poles) {
      const double bound = 1e-8 * max_coeff *
                           std::pow(std::max(1.0, std::abs(r)), tf.den().degree());
      CHECK(std::abs(tf.den().eval(r)) <= bound);
    }
  }
}

TEST_CASE("dc_gain values and markers") {
  const auto tf = DelayRational(5.0 * Polynomial{2.0, 1.0}, Polynomial{10.0, 1.0});
  CHECK(dc_gain(tf) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(std::isinf(dc_gain(DelayRational::integrator())));
  CHECK(dc_gain(DelayRational::integrator()) > 0.0);
  CHECK(dc_gain(DelayRational(Polynomial{-1.0}, Polynomial::s())) < 0.0);

  // s/s reduces by exact common-factor removal.
  CHECK(dc_gain(DelayRational(Polynomial::s(), Polynomial::s())) == 1.0);
  CHECK(dc_gain(DelayRational(Polynomial{}, Polynomial{1.0, 1.0})) == 0.0);
}

TEST_CASE("canonicalization is idempotent and normalizes the denominator") {
  std::mt19937 rng(99123);
  for (int trial = 0; trial < 200; ++trial) {
    const auto tf = random_tf(rng, trial % 2 == 0);
    const auto again = DelayRational(tf.num(), tf.den(), tf.delay());
    CHECK(again == tf);
    CHECK(tf.den().leading() == 1.0);
  }
}

TEST_CASE("record serialization round-trips exactly") {
  std::mt19937 rng(5511);
  for (int trial = 0; trial < 50; ++trial) {
    const auto tf = random_tf(rng, true);
    CHECK(from_record(to_record(tf)) == tf);
  }
  CHECK(to_record(DelayRational(Polynomial{}, Polynomial::one())) == "0;1;0");
}

TEST_CASE("frequency grid invariants") {
  CHECK_THROWS_AS(FrequencyGrid({1.0, 1.0}), GridError);
  CHECK_THROWS_AS(FrequencyGrid({-1.0, 1.0}), GridError);
  CHECK_THROWS_AS(FrequencyGrid({}), GridError);
  const auto g = FrequencyGrid::standard();
  CHECK(g.size() == 400);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == 1.0e4);
  CHECK(g.points_per_decade() == doctest::Approx(79.8).epsilon(0.01));
}
