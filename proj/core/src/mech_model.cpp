#include "epsdyn/mech_model.hpp"

#include <cmath>

#include "epsdyn/errors.hpp"

namespace epsdyn {

namespace {

void require_positive(std::vector<std::string>& out, double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    out.push_back(std::string(name) + " must be finite and > 0");
  }
}

void require_nonnegative(std::vector<std::string>& out, double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    out.push_back(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

void MechanicalParams::collect_violations(std::vector<std::string>& out) const {
  require_positive(out, j_h, "j_h");
  require_positive(out, j_m, "j_m");
  require_nonnegative(out, b_h, "b_h");
  require_nonnegative(out, b_m, "b_m");
  require_positive(out, k_h, "k_h");
  require_positive(out, k_l, "k_l");
  require_positive(out, n, "n");
}

void MechanicalParams::validate() const {
  std::vector<std::string> v;
  collect_violations(v);
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

Impedances impedances(const MechanicalParams& p) {
  Impedances out;
  out.m_h = Polynomial{0.0, p.b_h, p.j_h};
  out.m_m = Polynomial{p.k_l, p.b_m, p.j_m};
  out.d = out.m_h * out.m_m - Polynomial::constant(p.k_h * p.k_h);
  return out;
}

TwoMassModel two_mass_paper(const MechanicalParams& p) {
  const Impedances imp = impedances(p);

  TwoMassModel model;
  model.m_h = imp.m_h;
  model.m_m = imp.m_m;
  model.den = imp.d;
  model.num_tr = p.k_h * (Polynomial::constant(p.k_h) - imp.m_h);
  model.num_tm = p.n * model.num_tr;
  model.num_td = p.k_h * (imp.m_m - Polynomial::constant(p.k_h));
  model.to_th_from_tm = DelayRational(model.num_tm, model.den);
  model.to_th_from_tr = DelayRational(model.num_tr, model.den);
  model.to_th_from_td = DelayRational(model.num_td, model.den);
  model.params = p;
  model.provenance = MechProvenance::kPaperVerbatim;
  return model;
}

TwoMassModel two_mass_first_principles(const MechanicalParams& p) {
  const Impedances imp = impedances(p);
  const Polynomial kh = Polynomial::constant(p.k_h);

  TwoMassModel model;
  model.m_h = imp.m_h;
  model.m_m = imp.m_m;
  // Delta = (M_h + K_h)(M_m + K_h) - K_h^2
  model.den = (imp.m_h + kh) * (imp.m_m + kh) - Polynomial::constant(p.k_h * p.k_h);
  model.num_tr = -(p.k_h * imp.m_h);
  model.num_tm = p.n * model.num_tr;
  model.num_td = p.k_h * imp.m_m;
  model.to_th_from_tm = DelayRational(model.num_tm, model.den);
  model.to_th_from_tr = DelayRational(model.num_tr, model.den);
  model.to_th_from_td = DelayRational(model.num_td, model.den);
  model.params = p;
  model.provenance = MechProvenance::kFirstPrinciples;
  return model;
}

TwoMassModel two_mass(const MechanicalParams& p, MechProvenance provenance) {
  return provenance == MechProvenance::kPaperVerbatim
             ? two_mass_paper(p)
             : two_mass_first_principles(p);
}

}  // namespace epsdyn
