#pragma once

#include <Eigen/Dense>

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "epsdyn/frequency.hpp"

namespace epsdyn {

/// Continuous-time LTI realization dx = A x + B u, y = C x + D u.
struct StateSpace {
  Eigen::MatrixXd a;      // n x n
  Eigen::MatrixXd b_in;   // n x m
  Eigen::MatrixXd c_out;  // p x n
  Eigen::MatrixXd d_dir;  // p x m

  int order() const { return static_cast<int>(a.rows()); }

  /// C (jwI - A)^-1 B + D for the SISO case.
  std::complex<double> frf(double omega) const;

  /// Every eigenvalue of A strictly left of -1e-9.
  bool is_stable() const;
  std::vector<std::complex<double>> eigenvalues() const;
};

/// Controllable-canonical realization of the (Pade-rationalized, when the
/// input carries delay) transfer function. Requires the rationalized form to
/// be proper; D is nonzero iff it is biproper. A constant gain realizes as an
/// order-0 passthrough.
StateSpace to_state_space(const DelayRational& tf, int pade_order = 4);

/// Fixed-step simulation record, uniform step h.
struct Trajectory {
  double h = 0.0;
  std::vector<double> t;
  std::vector<double> u;
  std::vector<double> y;
  bool step_size_ok = true;  // h <= 1/(50 f_max) for the declared excitation
  std::string note;
};

/// Classical fixed-step 4th-order integration from zero initial state.
/// `f_max_hz` declares the highest excitation frequency; violating the step
/// rule h <= 1/(50 f_max) is recorded in the trajectory, not a fault.
Trajectory integrate(const StateSpace& ss,
                     const std::function<double(double)>& input,
                     double duration, double h, double f_max_hz = 0.0);

/// Empirical frequency response by sine dwell: per grid frequency simulate a
/// unit sinusoid, discard the settle cycles, then least-squares fit the
/// measured cycles to a sin(wt) + b cos(wt), returning a + jb. Requires a
/// stable realization. A frequency whose response grows or goes non-finite
/// is marked NaN instead of aborting the sweep.
FrequencyResponse sine_dwell_frf(const StateSpace& ss, const FrequencyGrid& grid,
                                 int cycles_settle = 10, int cycles_measure = 5);

/// CSV export: header `t,u,y`, 17-significant-digit decimals.
void write_trajectory_csv(const Trajectory& tr, std::ostream& os);

}  // namespace epsdyn
