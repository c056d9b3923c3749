#include "epsdyn/closed_loop.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "epsdyn/errors.hpp"

namespace epsdyn {

namespace {

using Cplx = std::complex<double>;

// Modified channel denominator with the velocity feedback absorbed into the
// assist-mass impedance: every occurrence of M_m picks up -N*s*A_omega.
Polynomial paper_modified_den(const TwoMassModel& mech, const Polynomial& awn,
                              const Polynomial& awd) {
  return mech.den * awd - mech.params.n * (awn.times_s() * mech.m_h);
}

Polynomial fp_modified_den(const TwoMassModel& mech, const Polynomial& awn,
                           const Polynomial& awd) {
  const Polynomial kh = Polynomial::constant(mech.params.k_h);
  return (mech.m_h + kh) * ((mech.m_m + kh) * awd -
                            mech.params.n * awn.times_s()) -
         Polynomial::constant(mech.params.k_h * mech.params.k_h) * awd;
}

bool symbolic_a_omega(const EmdResponse& emd) {
  return emd.a_omega.is_symbolic() && emd.a_omega.symbolic->is_rational();
}

}  // namespace

void AssistLaw::collect_violations(std::vector<std::string>& out) const {
  if (!std::isfinite(gain)) {
    out.push_back("assist gain must be finite");
  }
}

void AssistLaw::validate() const {
  std::vector<std::string> v;
  collect_violations(v);
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

Eoltf eoltf(const TwoMassModel& mech, const EmdResponse& emd) {
  Eoltf out;
  out.architecture = emd.architecture;

  const double kh = mech.params.k_h;
  const double n = mech.params.n;
  const bool paper = mech.provenance == MechProvenance::kPaperVerbatim;

  // Exactly point-evaluable channels, valid for sampled and symbolic drives.
  const auto at = emd.a_t.eval;
  const auto aw = emd.a_omega.eval;
  if (paper) {
    const Polynomial num_tm = mech.num_tm, num_tr = mech.num_tr,
                     num_td = mech.num_td, den = mech.den, m_h = mech.m_h;
    auto denom = [den, m_h, n, aw](Cplx s, double w) {
      return den.eval(s) - n * s * aw(w) * m_h.eval(s);
    };
    out.z_t = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return num_tm.eval(s) * at(w) / denom(s, w);
    });
    out.z_r = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return num_tr.eval(s) / denom(s, w);
    });
    out.z_d = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return (num_td.eval(s) - kh * n * s * aw(w)) / denom(s, w);
    });
  } else {
    // First-principles substitution T_m -> A_t T_m* + A_omega w_m through the
    // per-frequency 2x2 solve of the two Newton equations.
    const Polynomial m_h = mech.m_h, m_m = mech.m_m;
    auto solve = [m_h, m_m, kh, n, at, aw](double w, int input) {
      const Cplx s{0.0, w};
      const Cplx a11 = m_h.eval(s) + kh;
      const Cplx a12 = -kh;
      const Cplx a21 = -kh;
      const Cplx a22 = m_m.eval(s) + kh - n * s * aw(w);
      Cplx r1{0.0, 0.0}, r2{0.0, 0.0};
      if (input == 0) r2 = n * at(w);  // torque command
      if (input == 1) r2 = 1.0;        // rack force
      if (input == 2) r1 = 1.0;        // driver torque
      const Cplx det = a11 * a22 - a12 * a21;
      const Cplx th_h = (a22 * r1 - a12 * r2) / det;
      const Cplx th_m = (a11 * r2 - a21 * r1) / det;
      return kh * (th_h - th_m);
    };
    out.z_t = Channel::from_eval([solve](double w) { return solve(w, 0); });
    out.z_r = Channel::from_eval([solve](double w) { return solve(w, 1); });
    out.z_d = Channel::from_eval([solve](double w) { return solve(w, 2); });
  }

  // Symbolic channels when every factor is delay-compatible rational.
  if (symbolic_a_omega(emd)) {
    const Polynomial awn = emd.a_omega.symbolic->num();
    const Polynomial awd = emd.a_omega.symbolic->den();
    const Polynomial dmod = paper ? paper_modified_den(mech, awn, awd)
                                  : fp_modified_den(mech, awn, awd);
    out.z_r.symbolic = DelayRational(mech.num_tr * awd, dmod);
    out.z_d.symbolic =
        DelayRational(mech.num_td * awd - kh * n * awn.times_s(), dmod);
    if (emd.a_t.is_symbolic()) {
      out.z_t.symbolic =
          DelayRational(mech.num_tm * awd, dmod) * (*emd.a_t.symbolic);
    }
  }
  return out;
}

TorqueScaling torque_scaling(const TwoMassModel& mech, const EmdResponse& emd) {
  TorqueScaling out;
  out.architecture = emd.architecture;

  const double kh = mech.params.k_h;
  const double n = mech.params.n;
  const bool paper = mech.provenance == MechProvenance::kPaperVerbatim;

  const auto at = emd.a_t.eval;
  const auto aw = emd.a_omega.eval;
  const Polynomial m_h = mech.m_h;
  const Polynomial den = mech.den;
  if (paper) {
    auto denom = [den, m_h, n, aw](Cplx s, double w) {
      return den.eval(s) - n * s * aw(w) * m_h.eval(s);
    };
    out.w_t = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return den.eval(s) * at(w) / denom(s, w);
    });
    out.w_r = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return s * aw(w) * m_h.eval(s) / denom(s, w);
    });
    out.w_d = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return kh * s * aw(w) / denom(s, w);
    });
  } else {
    auto denom = [den, m_h, kh, n, aw](Cplx s, double w) {
      return den.eval(s) - n * s * aw(w) * (m_h.eval(s) + kh);
    };
    out.w_t = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return den.eval(s) * at(w) / denom(s, w);
    });
    out.w_r = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return s * aw(w) * (m_h.eval(s) + kh) / denom(s, w);
    });
    out.w_d = Channel::from_eval([=](double w) {
      const Cplx s{0.0, w};
      return kh * s * aw(w) / denom(s, w);
    });
  }

  if (symbolic_a_omega(emd)) {
    const Polynomial awn = emd.a_omega.symbolic->num();
    const Polynomial awd = emd.a_omega.symbolic->den();
    const Polynomial dmod = paper ? paper_modified_den(mech, awn, awd)
                                  : fp_modified_den(mech, awn, awd);
    const Polynomial coupling =
        paper ? mech.m_h : mech.m_h + Polynomial::constant(kh);
    out.w_r.symbolic = DelayRational(awn.times_s() * coupling, dmod);
    out.w_d.symbolic = DelayRational(kh * awn.times_s(), dmod);
    if (emd.a_t.is_symbolic()) {
      out.w_t.symbolic =
          DelayRational(mech.den * awd, dmod) * (*emd.a_t.symbolic);
    }
  }
  return out;
}

SteeringMargins steering_margins(const Eoltf& e, const AssistLaw& assist,
                                 const FrequencyGrid& grid) {
  assist.validate();
  if (grid.points_per_decade() < 20.0 - 1e-9) {
    throw GridError(
        "steering margin analysis requires >= 20 grid points per decade");
  }
  const double gain = assist.gain;
  const DelayRational comp = assist.compensator;
  const auto zt = e.z_t.eval;
  const Evaluator loop = [gain, comp, zt](double w) {
    return gain * freq_eval(comp, w) * zt(w);
  };
  SteeringMargins out;
  out.architecture = e.architecture;
  out.report = stability_margins(sample(loop, grid), loop);
  return out;
}

FrequencyResponse torque_scaling_ratio(const TorqueScaling& ts,
                                       const EmdResponse& emd,
                                       const FrequencyGrid& grid) {
  std::vector<Cplx> values;
  values.reserve(grid.size());
  for (double w : grid.omegas()) {
    const Cplx at = emd.a_t(w);
    if (std::abs(at) == 0.0) {
      throw Error("torque scaling ratio undefined: A_t vanishes at omega=" +
                  std::to_string(w) + " rad/s");
    }
    values.push_back(ts.w_t(w) / at);
  }
  return FrequencyResponse(grid, std::move(values));
}

}  // namespace epsdyn
