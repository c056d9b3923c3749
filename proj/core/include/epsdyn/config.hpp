#pragma once

#include <optional>
#include <string>

#include "epsdyn/closed_loop.hpp"
#include "epsdyn/emd_control.hpp"
#include "epsdyn/mech_model.hpp"
#include "epsdyn/motor_model.hpp"

namespace epsdyn {

struct GridSpec {
  double min_rad_s = 0.1;
  double max_rad_s = 1.0e4;
  double points_per_decade = 80.0;

  FrequencyGrid make() const {
    return FrequencyGrid::per_decade(min_rad_s, max_rad_s, points_per_decade);
  }
};

struct OperatingPointSpec {
  double i_d0 = 0.0;
  double i_q0 = 0.0;
  double omega_m0 = 0.0;
};

/// Full analysis configuration. Every sub-invariant is enforced at load;
/// validation reports every violation, not just the first.
struct SystemConfig {
  MechanicalParams mechanical{};
  MotorParams motor{};
  EstimatedParams estimates{};
  DelayParams delays{};
  VelocityEstimator velocity_estimator{};
  std::optional<PiGains> pi_gains;
  AssistLaw assist{};
  GridSpec grid{};
  OperatingPointSpec operating_point{};
  MechProvenance mech_variant = MechProvenance::kFirstPrinciples;
  SHatFilter s_hat{};
  int pade_order = 4;

  OperatingPoint make_operating_point() const {
    return OperatingPoint(operating_point.i_d0, operating_point.i_q0,
                          operating_point.omega_m0, motor);
  }
  TwoMassModel make_mech() const { return two_mass(mechanical, mech_variant); }
};

/// Parse and validate a config file (TOML-style structured text; see the
/// shipped sample for the schema). Throws ConfigParseError with line/column
/// on malformed text and ConfigValidationError listing every violated
/// invariant otherwise.
SystemConfig load_config(const std::string& path);
SystemConfig parse_config_text(const std::string& text);

}  // namespace epsdyn
