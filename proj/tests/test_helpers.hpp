#pragma once

// Deterministic random parameter generators shared by the property tests.
// Ranges are testing infrastructure chosen to cover physically sensible
// steering/motor hardware: L in [10 uH, 10 mH], R in [5 mOhm, 1 Ohm],
// p in {3..6}, flux in [10 mVs, 100 mVs], transport lags up to 1 ms,
// current-loop PI gains for bandwidths in the hundreds of rad/s, and
// column-scale inertias/stiffnesses.

#include <random>

#include "epsdyn/emd_control.hpp"
#include "epsdyn/mech_model.hpp"
#include "epsdyn/motor_model.hpp"

namespace epsdyn::testing {

inline double log_uniform(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline double uniform(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

inline MotorParams random_motor(std::mt19937& rng) {
  MotorParams mp;
  mp.p = 3 + static_cast<int>(rng() % 4);
  mp.lambda_m = log_uniform(rng, 0.01, 0.1);
  mp.l_d = log_uniform(rng, 1e-5, 1e-2);
  mp.l_q = log_uniform(rng, 1e-5, 1e-2);
  mp.r = log_uniform(rng, 5e-3, 1.0);
  return mp;
}

inline EstimatedParams random_estimates(std::mt19937& rng, const MotorParams& mp) {
  EstimatedParams ep;
  ep.lambda_m = mp.lambda_m * uniform(rng, 0.7, 1.4);
  ep.l_d = mp.l_d * uniform(rng, 0.6, 1.6);
  ep.l_q = mp.l_q * uniform(rng, 0.6, 1.6);
  ep.r = mp.r * uniform(rng, 0.5, 2.0);
  return ep;
}

inline PiGains random_gains(std::mt19937& rng, const MotorParams& mp) {
  // IMC-style tuning at a random current-loop bandwidth.
  const double wc = log_uniform(rng, 200.0, 2000.0);
  PiGains g;
  g.k_pd = mp.l_d * wc;
  g.k_id = mp.r * wc;
  g.k_pq = mp.l_q * wc;
  g.k_iq = mp.r * wc;
  return g;
}

inline DelayParams random_delays(std::mt19937& rng, bool allow_nonzero) {
  if (!allow_nonzero) return {0.0, 0.0};
  return {log_uniform(rng, 5e-5, 1e-3), log_uniform(rng, 5e-5, 1e-3)};
}

inline VelocityEstimator random_estimator(std::mt19937& rng) {
  VelocityEstimator ve;
  ve.tau_omega = log_uniform(rng, 1e-4, 1e-2);
  ve.variant = rng() % 2 == 0 ? VelocityVariant::kPhysical : VelocityVariant::kPaper;
  return ve;
}

inline MechanicalParams random_mech(std::mt19937& rng) {
  MechanicalParams p;
  p.j_h = log_uniform(rng, 0.01, 0.1);
  p.b_h = log_uniform(rng, 0.05, 0.5);
  p.j_m = log_uniform(rng, 0.01, 0.2);
  p.b_m = log_uniform(rng, 0.1, 1.0);
  p.k_h = log_uniform(rng, 50.0, 300.0);
  p.k_l = log_uniform(rng, 10.0, 200.0);
  p.n = uniform(rng, 5.0, 25.0);
  return p;
}

}  // namespace epsdyn::testing
