#pragma once

#include "epsdyn/emd_control.hpp"
#include "epsdyn/margins.hpp"
#include "epsdyn/mech_model.hpp"

namespace epsdyn {

/// Static assist law closing the steering loop from sensed handwheel torque
/// to motor torque command, with an optional series compensator.
struct AssistLaw {
  double gain = 1.0;                 // N m per N m of sensed torque
  DelayRational compensator = DelayRational();  // default: unity

  void collect_violations(std::vector<std::string>& out) const;
  void validate() const;
};

/// Effective open-loop transfer functions: torque command, rack force and
/// driver torque to sensed handwheel torque with the drive dynamics embedded.
struct Eoltf {
  Channel z_t;
  Channel z_r;
  Channel z_d;
  Architecture architecture;
};

/// Motor-torque scaling: how mechanical dynamics reshape the realized motor
/// torque, T_m = W_t T_m* + W_r T_r + W_d T_d.
struct TorqueScaling {
  Channel w_t;
  Channel w_r;
  Channel w_d;
  Architecture architecture;
};

/// Compose mechanics with the drive pair (A_t, A_omega). The velocity
/// feedback A_omega shifts the assist-mass impedance by N*s*A_omega, which
/// for the printed model gives
///   Z_t = N K_h (K_h - M_h) A_t / (D - N s A_omega M_h)
///   Z_r =   K_h (K_h - M_h)     / (D - N s A_omega M_h)
///   Z_d =   K_h (M_m - K_h - N s A_omega) / (D - N s A_omega M_h)
/// and for the first-principles model performs the same substitution
/// T_m -> A_t T_m* + A_omega w_m through the per-frequency linear solve.
/// Channels are symbolic when A_omega is rational (and, for Z_t, A_t is
/// delay-compatible); they are always exactly point-evaluable.
Eoltf eoltf(const TwoMassModel& mech, const EmdResponse& emd);

/// Companion to eoltf:
///   W_t = D A_t / (D - N s A_omega M_h)
///   W_r = s A_omega M_h / (D - N s A_omega M_h)
///   W_d = K_h s A_omega / (D - N s A_omega M_h)
/// with the analogous forms for the first-principles model.
TorqueScaling torque_scaling(const TwoMassModel& mech, const EmdResponse& emd);

struct SteeringMargins {
  Architecture architecture;
  MarginReport report;
};

/// Margins of the steering loop assist.compensator * assist.gain * Z_t.
/// The grid must carry at least 20 points per decade.
SteeringMargins steering_margins(const Eoltf& e, const AssistLaw& assist,
                                 const FrequencyGrid& grid);

/// Pointwise W_t / A_t = D / (D - N s A_omega M_h): the motor-torque-control
/// scaling caused by mechanical dynamics. Throws Error naming the frequency
/// when A_t vanishes on the grid.
FrequencyResponse torque_scaling_ratio(const TorqueScaling& ts,
                                       const EmdResponse& emd,
                                       const FrequencyGrid& grid);

}  // namespace epsdyn
