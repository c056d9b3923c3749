#pragma once

#include <string>
#include <vector>

#include "epsdyn/delay_rational.hpp"
#include "epsdyn/polynomial.hpp"

namespace epsdyn {

/// Two-mass steering mechanics: handwheel and assist mechanism (plus motor)
/// separated by the torsion bar that doubles as the torque sensor.
struct MechanicalParams {
  double j_h;  // handwheel inertia, kg m^2
  double b_h;  // handwheel damping, N m s/rad
  double j_m;  // motor + assist inertia (motor-referenced), kg m^2
  double b_m;  // motor + assist damping, N m s/rad
  double k_h;  // torsion-bar stiffness, N m/rad
  double k_l;  // linear tire-model stiffness, N m/rad
  double n;    // motor-to-steering gear ratio, dimensionless

  /// Appends one entry per violated invariant; empty means valid.
  void collect_violations(std::vector<std::string>& out) const;
  /// Throws Error listing every violation.
  void validate() const;
};

enum class MechProvenance {
  kPaperVerbatim,     // channels exactly as printed in the source model
  kFirstPrinciples,   // channels derived from the two Newton equations
};

/// Three-input two-mass model: motor torque, rack force and driver torque
/// to sensed handwheel torque. All channels share one denominator. The raw
/// (uncanonicalized) numerator/denominator polynomials are kept alongside
/// the canonical channels so downstream compositions can reuse them exactly.
struct TwoMassModel {
  DelayRational to_th_from_tm;  // motor torque command channel (includes N)
  DelayRational to_th_from_tr;  // rack force channel
  DelayRational to_th_from_td;  // driver torque channel

  Polynomial m_h;  // handwheel impedance J_h s^2 + b_h s
  Polynomial m_m;  // assist impedance   J_m s^2 + b_m s + K_l
  Polynomial den;  // shared channel denominator (D or the derived one)

  Polynomial num_tm;  // raw numerators matching `den`
  Polynomial num_tr;
  Polynomial num_td;

  MechanicalParams params;
  MechProvenance provenance;
};

struct Impedances {
  Polynomial m_h;
  Polynomial m_m;
  Polynomial d;  // M_h*M_m - K_h^2, degree 4, constant term -K_h^2
};

/// Mechanical impedances and the printed-model denominator.
Impedances impedances(const MechanicalParams& p);

/// Channels built verbatim from the printed model entries:
///   T_h = N*K_h*(K_h - M_h)/D * T_m + K_h*(K_h - M_h)/D * T_r
///       + K_h*(M_m - K_h)/D * T_d,   D = M_h*M_m - K_h^2.
TwoMassModel two_mass_paper(const MechanicalParams& p);

/// Channels derived from Newton's law for the two inertias:
///   J_h th_h'' + b_h th_h' = T_d - K_h (th_h - th_m)
///   J_m th_m'' + b_m th_m' + K_l th_m = N*T_m + T_r + K_h (th_h - th_m)
///   T_h = K_h (th_h - th_m)
/// Eliminating the angles gives
///   T_h = K_h [ M_m T_d - M_h (N T_m + T_r) ] / Delta,
///   Delta = (M_h + K_h)(M_m + K_h) - K_h^2.
TwoMassModel two_mass_first_principles(const MechanicalParams& p);

TwoMassModel two_mass(const MechanicalParams& p, MechProvenance provenance);

}  // namespace epsdyn
