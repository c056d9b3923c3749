#pragma once

#include <string>
#include <vector>

#include "epsdyn/delay_rational.hpp"

namespace epsdyn {

/// PMSM constants. Torque is T_m = kTorqueQ * p * lambda_m * I_q.
struct MotorParams {
  int p;            // magnetic pole pairs
  double lambda_m;  // PM flux linkage, V s/rad
  double l_d;       // d-axis inductance, H
  double l_q;       // q-axis inductance, H
  double r;         // combined motor + inverter resistance, Ohm

  /// The fixed 3/2 factor of the synchronous-frame torque expression.
  static constexpr double kTorqueQ = 1.5;

  void collect_violations(std::vector<std::string>& out) const;
  void validate() const;
};

/// Controller-side estimates of the motor constants.
struct EstimatedParams {
  double lambda_m;
  double l_d;
  double l_q;
  double r;

  void collect_violations(std::vector<std::string>& out) const;
  void validate() const;

  static EstimatedParams perfect(const MotorParams& mp) {
    return {mp.lambda_m, mp.l_d, mp.l_q, mp.r};
  }
};

/// Inverter actuation and current-estimation transport lags, seconds.
struct DelayParams {
  double tau_c;  // current-estimation lag
  double tau_p;  // inverter lag

  void collect_violations(std::vector<std::string>& out) const;
  void validate() const;
  double total() const { return tau_c + tau_p; }
};

enum class VelocityVariant {
  kPaper,     // H_w = s/(tau_w s + 1): differentiating estimate, zero DC gain
  kPhysical,  // H_w = 1/(tau_w s + 1): low-pass velocity estimate, unity DC gain
};

struct VelocityEstimator {
  double tau_omega = 0.0;
  VelocityVariant variant = VelocityVariant::kPhysical;

  void collect_violations(std::vector<std::string>& out) const;
  void validate() const;
};

/// Velocity-estimate dynamics as a transfer function. tau_omega = 0 with the
/// physical variant yields the exact identity.
DelayRational velocity_estimator_tf(const VelocityEstimator& ve);

/// Linearization set-point. The dependent steady-state voltages are computed
/// at construction, so a constructed point is consistent by definition.
class OperatingPoint {
 public:
  OperatingPoint() = default;  // the zero set-point
  OperatingPoint(double i_d0, double i_q0, double omega_m0, const MotorParams& mp);

  double i_d0() const { return i_d0_; }
  double i_q0() const { return i_q0_; }
  double omega_m0() const { return omega_m0_; }
  double v_d0() const { return v_d0_; }
  double v_q0() const { return v_q0_; }

 private:
  double i_d0_ = 0.0;
  double i_q0_ = 0.0;
  double omega_m0_ = 0.0;
  double v_d0_ = 0.0;
  double v_q0_ = 0.0;
};

/// Fixed 2x2 matrix of dynamic elements, row-major dq order.
struct TfMatrix2 {
  DelayRational dd;
  DelayRational dq;
  DelayRational qd;
  DelayRational qq;
};

/// Linearized synchronous-frame voltage map and back-EMF coupling column:
///   dV = P_inv * dI + E * dw,
///   P_inv = [L_d s + R,  p w0 L_q; -p w0 L_d,  L_q s + R],
///   E = [p L_q I_q0; -p L_d I_d0 + p lambda_m].
struct PlantModel {
  TfMatrix2 p_inv;
  DelayRational e_d;
  DelayRational e_q;
};

PlantModel linearized_plant(const MotorParams& mp, const OperatingPoint& op);

/// Diagonal transport-lag matrices: B = diag(e^{-tau_c s}) on the measured
/// currents, X = diag(e^{-tau_p s}) on the commanded voltages.
struct DelayElements {
  TfMatrix2 b;
  TfMatrix2 x;
};

DelayElements delay_elements(const DelayParams& dp);

struct CurrentRefs {
  double i_d;
  double i_q;
};

/// Maximum-torque-per-ampere current references: I_d* = 0,
/// I_q* = T / (1.5 * p * lambda_m).
CurrentRefs mtpa_map(double torque_cmd, int pole_pairs, double lambda_m);
CurrentRefs mtpa_map(double torque_cmd, const MotorParams& mp);

double torque_from_iq(double i_q, int pole_pairs, double lambda_m);
double torque_from_iq(double i_q, const MotorParams& mp);

}  // namespace epsdyn
