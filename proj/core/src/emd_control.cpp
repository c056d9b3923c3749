#include "epsdyn/emd_control.hpp"

#include <cmath>
#include <complex>

#include "epsdyn/errors.hpp"

namespace epsdyn {

namespace {

using Cplx = std::complex<double>;

constexpr double kQ = MotorParams::kTorqueQ;

DelayRational unity() { return DelayRational(); }

DelayRational zero_tf() { return DelayRational(Polynomial{}, Polynomial::one()); }

}  // namespace

void PiGains::collect_violations(std::vector<std::string>& out) const {
  if (!(k_pd >= 0.0) || !std::isfinite(k_pd)) out.push_back("k_pd must be finite and >= 0");
  if (!(k_id >= 0.0) || !std::isfinite(k_id)) out.push_back("k_id must be finite and >= 0");
  if (!(k_pq >= 0.0) || !std::isfinite(k_pq)) out.push_back("k_pq must be finite and >= 0");
  if (!(k_iq > 0.0) || !std::isfinite(k_iq)) {
    out.push_back("k_iq must be finite and > 0 (integral action on the q axis)");
  }
}

void PiGains::validate() const {
  std::vector<std::string> v;
  collect_violations(v);
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

const char* architecture_name(Architecture a) {
  return a == Architecture::kFeedforward ? "ff" : "fb";
}

ControllerLaw controller_laws(Architecture arch, const EstimatedParams& ep,
                              const std::optional<PiGains>& gains,
                              int pole_pairs, const SHatFilter& shat,
                              double omega_hat_0) {
  ep.validate();
  const double p = static_cast<double>(pole_pairs);

  ControllerLaw law;
  law.architecture = arch;
  law.c_omega_d = zero_tf();
  law.c_omega_q = DelayRational::constant(p * ep.lambda_m);

  if (arch == Architecture::kFeedforward) {
    const DelayRational sh = shat.tf();
    law.c_t.dd = DelayRational::constant(ep.l_d) * sh + DelayRational::constant(ep.r);
    law.c_t.qq = DelayRational::constant(ep.l_q) * sh + DelayRational::constant(ep.r);
    law.c_t.dq = DelayRational::constant(p * omega_hat_0 * ep.l_q);
    law.c_t.qd = DelayRational::constant(-p * omega_hat_0 * ep.l_d);
    return law;
  }

  if (!gains) {
    throw Error("feedback architecture requires PI gains");
  }
  gains->validate();
  const DelayRational inv_sh = shat.inverse_tf();
  law.c_t.dd = DelayRational::constant(gains->k_pd) +
               DelayRational::constant(gains->k_id) * inv_sh;
  law.c_t.qq = DelayRational::constant(gains->k_pq) +
               DelayRational::constant(gains->k_iq) * inv_sh;
  law.c_t.dq = zero_tf();
  law.c_t.qd = zero_tf();
  return law;
}

EmdResponse EmdResponse::identity(Architecture arch) {
  EmdResponse out;
  out.architecture = arch;
  out.a_t = Channel::from_tf(unity());
  out.a_omega = Channel::from_tf(zero_tf());
  return out;
}

EmdResponse ff_closed_form(const MotorParams& mp, const EstimatedParams& ep,
                           const DelayParams& dp, const VelocityEstimator& ve,
                           const SHatFilter& shat) {
  mp.validate();
  ep.validate();
  dp.validate();
  const double p = static_cast<double>(mp.p);
  const double scale = mp.lambda_m / ep.lambda_m;
  const DelayRational plant_q =
      DelayRational(Polynomial{mp.r, mp.l_q}, Polynomial::one());
  const DelayRational inv_model_q =
      DelayRational::constant(ep.l_q) * shat.tf() + DelayRational::constant(ep.r);

  EmdResponse out;
  out.architecture = Architecture::kFeedforward;

  // A_t: the actuation lag factors out, so this is symbolic for any delays.
  out.a_t = Channel::from_tf(DelayRational::pure_delay(dp.tau_p) *
                             DelayRational::constant(scale) * inv_model_q *
                             inverse(plant_q));

  const double dist_gain = kQ * p * p * mp.lambda_m;
  const DelayRational h_w = velocity_estimator_tf(ve);
  if (dp.tau_p == 0.0) {
    const DelayRational mismatch =
        h_w * DelayRational::constant(ep.lambda_m) -
        DelayRational::constant(mp.lambda_m);
    out.a_omega = Channel::from_tf(DelayRational::constant(dist_gain) *
                                   mismatch * inverse(plant_q));
  } else {
    // X H_w lambda_hat - lambda mixes a delayed and an undelayed term; no
    // rational closed form exists, so evaluate exactly per frequency.
    const double tau_p = dp.tau_p;
    const double lam = mp.lambda_m, lam_hat = ep.lambda_m;
    const double l_q = mp.l_q, r = mp.r;
    out.a_omega = Channel::from_eval([=, h = h_w](double w) {
      const Cplx s{0.0, w};
      const Cplx x = std::exp(Cplx{0.0, -w * tau_p});
      const Cplx hw = freq_eval(h, w);
      return dist_gain * (x * hw * lam_hat - lam) / (l_q * s + r);
    });
  }
  return out;
}

EmdResponse fb_closed_form(const MotorParams& mp, const EstimatedParams& ep,
                           const PiGains& gains, const DelayParams& dp,
                           const VelocityEstimator& ve, const SHatFilter& shat) {
  mp.validate();
  ep.validate();
  gains.validate();
  dp.validate();
  const double p = static_cast<double>(mp.p);
  const double scale = mp.lambda_m / ep.lambda_m;
  const double dist_gain = kQ * p * p * mp.lambda_m;
  const DelayRational plant_q =
      DelayRational(Polynomial{mp.r, mp.l_q}, Polynomial::one());
  const DelayRational c_q = DelayRational::constant(gains.k_pq) +
                            DelayRational::constant(gains.k_iq) * shat.inverse_tf();
  const DelayRational h_w = velocity_estimator_tf(ve);

  EmdResponse out;
  out.architecture = Architecture::kFeedback;

  if (dp.total() == 0.0) {
    // Lag-free loop: exact rational closure g/(1+g) of the q-axis PI loop.
    const DelayRational loop = c_q * inverse(plant_q);
    out.a_t = Channel::from_tf(DelayRational::constant(scale) *
                               feedback(loop, unity()));
    const DelayRational mismatch =
        h_w * DelayRational::constant(ep.lambda_m) -
        DelayRational::constant(mp.lambda_m);
    out.a_omega = Channel::from_tf(DelayRational::constant(dist_gain) *
                                   mismatch * inverse(plant_q + c_q));
    return out;
  }

  // Delayed loop: the denominator carries the lag product XB added to
  // rational terms, so the channels are evaluated exactly per frequency.
  const double tau_p = dp.tau_p;
  const double tau_tot = dp.total();
  const double lam = mp.lambda_m, lam_hat = ep.lambda_m;
  const double l_q = mp.l_q, r = mp.r;
  const double k_pq = gains.k_pq, k_iq = gains.k_iq;
  const double tau_d = shat.tau_d;
  auto c_q_at = [k_pq, k_iq, tau_d](Cplx s) {
    return k_pq + k_iq * (tau_d * s + 1.0) / s;
  };
  out.a_t = Channel::from_eval([=](double w) {
    const Cplx s{0.0, w};
    const Cplx x = std::exp(Cplx{0.0, -w * tau_p});
    const Cplx xb = std::exp(Cplx{0.0, -w * tau_tot});
    const Cplx cq = c_q_at(s);
    return x * scale * cq / (l_q * s + r + xb * cq);
  });
  out.a_omega = Channel::from_eval([=, h = h_w](double w) {
    const Cplx s{0.0, w};
    const Cplx x = std::exp(Cplx{0.0, -w * tau_p});
    const Cplx xb = std::exp(Cplx{0.0, -w * tau_tot});
    const Cplx cq = c_q_at(s);
    const Cplx hw = freq_eval(h, w);
    return dist_gain * (x * hw * lam_hat - lam) / (l_q * s + r + xb * cq);
  });
  return out;
}

EmdResponse ff_closed_form_pade(const MotorParams& mp, const EstimatedParams& ep,
                                const DelayParams& dp, const VelocityEstimator& ve,
                                int order, const SHatFilter& shat) {
  mp.validate();
  ep.validate();
  dp.validate();
  const double p = static_cast<double>(mp.p);
  const double scale = mp.lambda_m / ep.lambda_m;
  const double dist_gain = kQ * p * p * mp.lambda_m;
  const DelayRational plant_q =
      DelayRational(Polynomial{mp.r, mp.l_q}, Polynomial::one());
  const DelayRational inv_model_q =
      DelayRational::constant(ep.l_q) * shat.tf() + DelayRational::constant(ep.r);
  const DelayRational x_pade =
      pade_rationalize(DelayRational::pure_delay(dp.tau_p), order);
  const DelayRational h_w = velocity_estimator_tf(ve);

  EmdResponse out;
  out.architecture = Architecture::kFeedforward;
  out.a_t = Channel::from_tf(x_pade * DelayRational::constant(scale) *
                             inv_model_q * inverse(plant_q));
  const DelayRational mismatch =
      x_pade * h_w * DelayRational::constant(ep.lambda_m) -
      DelayRational::constant(mp.lambda_m);
  out.a_omega = Channel::from_tf(DelayRational::constant(dist_gain) * mismatch *
                                 inverse(plant_q));
  return out;
}

EmdResponse fb_closed_form_pade(const MotorParams& mp, const EstimatedParams& ep,
                                const PiGains& gains, const DelayParams& dp,
                                const VelocityEstimator& ve, int order,
                                const SHatFilter& shat) {
  mp.validate();
  ep.validate();
  gains.validate();
  dp.validate();
  const double p = static_cast<double>(mp.p);
  const double scale = mp.lambda_m / ep.lambda_m;
  const double dist_gain = kQ * p * p * mp.lambda_m;
  const DelayRational plant_q =
      DelayRational(Polynomial{mp.r, mp.l_q}, Polynomial::one());
  const DelayRational c_q = DelayRational::constant(gains.k_pq) +
                            DelayRational::constant(gains.k_iq) * shat.inverse_tf();
  const DelayRational x_pade =
      pade_rationalize(DelayRational::pure_delay(dp.tau_p), order);
  const DelayRational xb_pade =
      pade_rationalize(DelayRational::pure_delay(dp.total()), order);
  const DelayRational h_w = velocity_estimator_tf(ve);

  const DelayRational closed_den = plant_q + xb_pade * c_q;

  EmdResponse out;
  out.architecture = Architecture::kFeedback;
  out.a_t = Channel::from_tf(x_pade * DelayRational::constant(scale) * c_q *
                             inverse(closed_den));
  const DelayRational mismatch =
      x_pade * h_w * DelayRational::constant(ep.lambda_m) -
      DelayRational::constant(mp.lambda_m);
  out.a_omega = Channel::from_tf(DelayRational::constant(dist_gain) * mismatch *
                                 inverse(closed_den));
  return out;
}

namespace {

struct ComposeContext {
  Architecture arch;
  double p;
  double lambda_m, l_d, l_q, r;
  double lambda_hat, l_d_hat, l_q_hat, r_hat;
  double k_pd, k_id, k_pq, k_iq;
  double tau_c, tau_p;
  double tau_omega;
  bool paper_estimator;
  double tau_d;
  double w0, i_d0, i_q0;

  // Solve the per-frequency loop for the q-axis current perturbation given a
  // unit torque command (want_torque) or a unit velocity perturbation.
  Cplx delta_iq(double w, bool want_torque) const {
    const Cplx s{0.0, w};
    const Cplx x = std::exp(Cplx{0.0, -w * tau_p});
    const Cplx b = std::exp(Cplx{0.0, -w * tau_c});
    const Cplx h = paper_estimator ? s / (tau_omega * s + 1.0)
                                   : Cplx{1.0, 0.0} / (tau_omega * s + 1.0);
    const Cplx sh = s / (tau_d * s + 1.0);

    // Plant voltage map and back-EMF coupling at the set-point.
    const Cplx p11 = l_d * s + r, p12 = p * w0 * l_q;
    const Cplx p21 = -p * w0 * l_d, p22 = l_q * s + r;
    const Cplx e_d = p * l_q * i_q0;
    const Cplx e_q = -p * l_d * i_d0 + p * lambda_m;

    const double t_cmd = want_torque ? 1.0 : 0.0;
    const double d_omega = want_torque ? 0.0 : 1.0;

    // MTPA references computed with the controller-side flux estimate.
    const Cplx iq_ref = t_cmd / (kQ * p * lambda_hat);
    const Cplx id_ref = 0.0;

    Cplx a11, a12, a21, a22;  // loop matrix acting on dI
    Cplx rhs_d, rhs_q;
    if (arch == Architecture::kFeedforward) {
      const double h_dc = paper_estimator ? 0.0 : 1.0;
      const double omega_hat_0 = h_dc * w0;
      const Cplx c11 = l_d_hat * sh + r_hat, c12 = p * omega_hat_0 * l_q_hat;
      const Cplx c21 = -p * omega_hat_0 * l_d_hat, c22 = l_q_hat * sh + r_hat;
      // Velocity path: printed [0; p lambda_hat] plus the set-point current
      // terms from linearizing the omega_hat-dependent controller entries,
      // mirroring the plant-side E column.
      const Cplx cw_d = (p * l_q_hat * i_q0) * h;
      const Cplx cw_q = (-p * l_d_hat * i_d0 + p * lambda_hat) * h;
      const Cplx v_d = c11 * id_ref + c12 * iq_ref + cw_d * d_omega;
      const Cplx v_q = c21 * id_ref + c22 * iq_ref + cw_q * d_omega;
      a11 = p11;
      a12 = p12;
      a21 = p21;
      a22 = p22;
      rhs_d = x * v_d - e_d * d_omega;
      rhs_q = x * v_q - e_q * d_omega;
    } else {
      const Cplx inv_sh = (tau_d * s + 1.0) / s;
      const Cplx c_d = k_pd + k_id * inv_sh;
      const Cplx c_qq = k_pq + k_iq * inv_sh;
      const Cplx cw_q = p * lambda_hat * h;
      a11 = p11 + x * c_d * b;
      a12 = p12;
      a21 = p21;
      a22 = p22 + x * c_qq * b;
      rhs_d = x * c_d * id_ref - e_d * d_omega;
      rhs_q = x * c_qq * iq_ref + (x * cw_q - e_q) * d_omega;
    }

    const Cplx det = a11 * a22 - a12 * a21;
    const double det_scale =
        std::abs(a11) * std::abs(a22) + std::abs(a12) * std::abs(a21);
    if (std::abs(det) <= 1e-14 * det_scale + 1e-300) {
      throw SingularLoopError(
          w, "block composition loop matrix singular at omega=" +
                 std::to_string(w) + " rad/s");
    }
    return (a11 * rhs_q - a21 * rhs_d) / det;
  }
};

}  // namespace

EmdResponse block_compose_frf(Architecture arch, const MotorParams& mp,
                              const EstimatedParams& ep,
                              const std::optional<PiGains>& gains,
                              const DelayParams& dp, const VelocityEstimator& ve,
                              const OperatingPoint& op, const FrequencyGrid& grid,
                              const SHatFilter& shat) {
  mp.validate();
  ep.validate();
  dp.validate();
  ve.validate();
  if (arch == Architecture::kFeedback) {
    if (!gains) throw Error("feedback architecture requires PI gains");
    gains->validate();
  }

  ComposeContext ctx;
  ctx.arch = arch;
  ctx.p = static_cast<double>(mp.p);
  ctx.lambda_m = mp.lambda_m;
  ctx.l_d = mp.l_d;
  ctx.l_q = mp.l_q;
  ctx.r = mp.r;
  ctx.lambda_hat = ep.lambda_m;
  ctx.l_d_hat = ep.l_d;
  ctx.l_q_hat = ep.l_q;
  ctx.r_hat = ep.r;
  ctx.k_pd = gains ? gains->k_pd : 0.0;
  ctx.k_id = gains ? gains->k_id : 0.0;
  ctx.k_pq = gains ? gains->k_pq : 0.0;
  ctx.k_iq = gains ? gains->k_iq : 0.0;
  ctx.tau_c = dp.tau_c;
  ctx.tau_p = dp.tau_p;
  ctx.tau_omega = ve.tau_omega;
  ctx.paper_estimator = ve.variant == VelocityVariant::kPaper;
  ctx.tau_d = shat.tau_d;
  ctx.w0 = op.omega_m0();
  ctx.i_d0 = op.i_d0();
  ctx.i_q0 = op.i_q0();

  const double torque_gain = kQ * ctx.p * ctx.lambda_m;

  EmdResponse out;
  out.architecture = arch;
  out.a_t = Channel::from_eval(
      [ctx, torque_gain](double w) { return torque_gain * ctx.delta_iq(w, true); });
  out.a_omega = Channel::from_eval(
      [ctx, torque_gain](double w) { return torque_gain * ctx.delta_iq(w, false); });

  // Walk the grid once so singularities surface at composition time.
  for (double w : grid.omegas()) {
    (void)out.a_t(w);
    (void)out.a_omega(w);
  }
  return out;
}

}  // namespace epsdyn
