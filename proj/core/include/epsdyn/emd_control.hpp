#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epsdyn/frequency.hpp"
#include "epsdyn/motor_model.hpp"

namespace epsdyn {

/// Diagonal PI current-regulator gains.
struct PiGains {
  double k_pd = 0.0;  // V/A
  double k_id = 0.0;  // V/(A s)
  double k_pq = 0.0;
  double k_iq = 0.0;  // must be > 0: integral action gives unity DC tracking

  void collect_violations(std::vector<std::string>& out) const;
  void validate() const;
};

enum class Architecture { kFeedforward, kFeedback };

const char* architecture_name(Architecture a);

/// Controller-internal differentiator: s_hat = s/(tau_d s + 1). tau_d = 0 is
/// the ideal continuous differentiator (the default), which reproduces the
/// closed forms exactly.
struct SHatFilter {
  double tau_d = 0.0;

  /// s_hat as a transfer function.
  DelayRational tf() const {
    return DelayRational(Polynomial::s(), Polynomial{1.0, tau_d});
  }
  /// 1/s_hat: the controller integrator.
  DelayRational inverse_tf() const {
    return DelayRational(Polynomial{1.0, tau_d}, Polynomial::s());
  }
};

/// Current-control law in block form: V* = C_t * (command or error) +
/// C_omega * velocity estimate. The velocity-dependent entries of the
/// feedforward C_t are frozen at the set-point estimate omega_hat_0.
struct ControllerLaw {
  Architecture architecture;
  TfMatrix2 c_t;
  DelayRational c_omega_d;
  DelayRational c_omega_q;  // p * lambda_m_hat in both architectures
};

/// Feedforward law (inverse motor model) or feedback law (diagonal PI).
/// Feedback requires gains.
ControllerLaw controller_laws(Architecture arch, const EstimatedParams& ep,
                              const std::optional<PiGains>& gains,
                              int pole_pairs, const SHatFilter& shat = {},
                              double omega_hat_0 = 0.0);

/// Electric-motor-drive dynamics as the torque-tracking / velocity-
/// disturbance pair: T_m = A_t T_m* + A_omega w_m. Channels are symbolic
/// when an exact rational-with-delay form exists (see the builders) and are
/// always exactly point-evaluable.
struct EmdResponse {
  Architecture architecture;
  Channel a_t;
  Channel a_omega;

  bool symbolic() const { return a_t.is_symbolic() && a_omega.is_symbolic(); }
  FrequencyResponse sample_a_t(const FrequencyGrid& g) const { return sample(a_t.eval, g); }
  FrequencyResponse sample_a_omega(const FrequencyGrid& g) const { return sample(a_omega.eval, g); }

  /// The identity drive A_t = 1, A_omega = 0.
  static EmdResponse identity(Architecture arch = Architecture::kFeedback);
};

/// Feedforward torque-control dynamics at zero nominal velocity:
///   A_t = X (lambda/lambda_hat) (L_q_hat s_hat + R_hat)/(L_q s + R)
///   A_omega = 1.5 p^2 lambda (X H_w lambda_hat - lambda)/(L_q s + R)
/// A_t is always symbolic (the lag factors out); A_omega is symbolic only
/// when tau_p = 0 (a difference of delayed and undelayed terms is not
/// rational) and sampled per-frequency otherwise.
EmdResponse ff_closed_form(const MotorParams& mp, const EstimatedParams& ep,
                           const DelayParams& dp, const VelocityEstimator& ve,
                           const SHatFilter& shat = {});

/// Feedback torque-control dynamics at zero nominal velocity:
///   A_t = X (lambda/lambda_hat)(K_pq s + K_iq) /
///         (L_q s^2 + R s + XB K_pq s + XB K_iq)
///   A_omega = 1.5 p^2 lambda (X H_w lambda_hat - lambda) s / (same den)
/// (shown for the ideal differentiator). The denominator carries the delay
/// product XB, so channels are sampled per-frequency when tau_p + tau_c > 0
/// and symbolic otherwise.
EmdResponse fb_closed_form(const MotorParams& mp, const EstimatedParams& ep,
                           const PiGains& gains, const DelayParams& dp,
                           const VelocityEstimator& ve,
                           const SHatFilter& shat = {});

/// Pade-rationalized symbolic variants for pole analysis and time-domain
/// realization: every transport lag is replaced by its [order/order]
/// approximant, so both channels come out rational.
EmdResponse ff_closed_form_pade(const MotorParams& mp, const EstimatedParams& ep,
                                const DelayParams& dp, const VelocityEstimator& ve,
                                int order, const SHatFilter& shat = {});
EmdResponse fb_closed_form_pade(const MotorParams& mp, const EstimatedParams& ep,
                                const PiGains& gains, const DelayParams& dp,
                                const VelocityEstimator& ve, int order,
                                const SHatFilter& shat = {});

/// Numeric block composition: at each grid frequency assemble current
/// references, controller law, actuation delay, plant at the given set-point,
/// measurement delay and velocity path, then solve the 2x2 complex loop for
/// the q-axis current per unit torque command and per unit velocity. Valid at
/// any operating point, including omega_m0 != 0 where the closed forms are
/// not. Throws SingularLoopError naming the offending frequency.
EmdResponse block_compose_frf(Architecture arch, const MotorParams& mp,
                              const EstimatedParams& ep,
                              const std::optional<PiGains>& gains,
                              const DelayParams& dp, const VelocityEstimator& ve,
                              const OperatingPoint& op, const FrequencyGrid& grid,
                              const SHatFilter& shat = {});

}  // namespace epsdyn
