#include "epsdyn/motor_model.hpp"

#include <cmath>

#include "epsdyn/errors.hpp"

namespace epsdyn {

namespace {

void check_positive(std::vector<std::string>& out, double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    out.push_back(std::string(name) + " must be finite and > 0");
  }
}

void check_nonnegative(std::vector<std::string>& out, double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    out.push_back(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

void MotorParams::collect_violations(std::vector<std::string>& out) const {
  if (p < 1) out.push_back("p (pole pairs) must be a positive integer");
  check_positive(out, lambda_m, "lambda_m");
  check_positive(out, l_d, "l_d");
  check_positive(out, l_q, "l_q");
  check_positive(out, r, "r");
}

void MotorParams::validate() const {
  std::vector<std::string> v;
  collect_violations(v);
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

void EstimatedParams::collect_violations(std::vector<std::string>& out) const {
  check_positive(out, lambda_m, "estimated lambda_m");
  check_positive(out, l_d, "estimated l_d");
  check_positive(out, l_q, "estimated l_q");
  check_positive(out, r, "estimated r");
}

void EstimatedParams::validate() const {
  std::vector<std::string> v;
  collect_violations(v);
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

void DelayParams::collect_violations(std::vector<std::string>& out) const {
  check_nonnegative(out, tau_c, "tau_c");
  check_nonnegative(out, tau_p, "tau_p");
}

void DelayParams::validate() const {
  std::vector<std::string> v;
  collect_violations(v);
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

void VelocityEstimator::collect_violations(std::vector<std::string>& out) const {
  check_nonnegative(out, tau_omega, "tau_omega");
}

void VelocityEstimator::validate() const {
  std::vector<std::string> v;
  collect_violations(v);
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

DelayRational velocity_estimator_tf(const VelocityEstimator& ve) {
  ve.validate();
  const Polynomial den{1.0, ve.tau_omega};
  if (ve.variant == VelocityVariant::kPaper) {
    return DelayRational(Polynomial::s(), den);
  }
  return DelayRational(Polynomial::one(), den);
}

OperatingPoint::OperatingPoint(double i_d0, double i_q0, double omega_m0,
                               const MotorParams& mp)
    : i_d0_(i_d0), i_q0_(i_q0), omega_m0_(omega_m0) {
  mp.validate();
  if (!std::isfinite(i_d0) || !std::isfinite(i_q0) || !std::isfinite(omega_m0)) {
    throw Error("operating point entries must be finite");
  }
  // Steady state of the linearized voltage map at s = 0.
  const double p = static_cast<double>(mp.p);
  v_d0_ = mp.r * i_d0 + p * omega_m0 * mp.l_q * i_q0 +
          p * mp.l_q * i_q0 * omega_m0;
  v_q0_ = -p * omega_m0 * mp.l_d * i_d0 + mp.r * i_q0 +
          (-p * mp.l_d * i_d0 + p * mp.lambda_m) * omega_m0;
}

PlantModel linearized_plant(const MotorParams& mp, const OperatingPoint& op) {
  mp.validate();
  const double p = static_cast<double>(mp.p);
  const double w0 = op.omega_m0();

  PlantModel plant;
  plant.p_inv.dd = DelayRational(Polynomial{mp.r, mp.l_d}, Polynomial::one());
  plant.p_inv.dq = DelayRational::constant(p * w0 * mp.l_q);
  plant.p_inv.qd = DelayRational::constant(-p * w0 * mp.l_d);
  plant.p_inv.qq = DelayRational(Polynomial{mp.r, mp.l_q}, Polynomial::one());
  plant.e_d = DelayRational::constant(p * mp.l_q * op.i_q0());
  plant.e_q = DelayRational::constant(-p * mp.l_d * op.i_d0() + p * mp.lambda_m);
  return plant;
}

DelayElements delay_elements(const DelayParams& dp) {
  dp.validate();
  DelayElements out;
  out.b.dd = DelayRational::pure_delay(dp.tau_c);
  out.b.qq = DelayRational::pure_delay(dp.tau_c);
  out.b.dq = DelayRational(Polynomial{}, Polynomial::one());
  out.b.qd = DelayRational(Polynomial{}, Polynomial::one());
  out.x.dd = DelayRational::pure_delay(dp.tau_p);
  out.x.qq = DelayRational::pure_delay(dp.tau_p);
  out.x.dq = DelayRational(Polynomial{}, Polynomial::one());
  out.x.qd = DelayRational(Polynomial{}, Polynomial::one());
  return out;
}

CurrentRefs mtpa_map(double torque_cmd, int pole_pairs, double lambda_m) {
  return {0.0, torque_cmd / (MotorParams::kTorqueQ *
                             static_cast<double>(pole_pairs) * lambda_m)};
}

CurrentRefs mtpa_map(double torque_cmd, const MotorParams& mp) {
  return mtpa_map(torque_cmd, mp.p, mp.lambda_m);
}

double torque_from_iq(double i_q, int pole_pairs, double lambda_m) {
  return MotorParams::kTorqueQ * static_cast<double>(pole_pairs) * lambda_m * i_q;
}

double torque_from_iq(double i_q, const MotorParams& mp) {
  return torque_from_iq(i_q, mp.p, mp.lambda_m);
}

}  // namespace epsdyn
