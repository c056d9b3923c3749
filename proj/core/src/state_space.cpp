#include "epsdyn/state_space.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>

#include "epsdyn/errors.hpp"

namespace epsdyn {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::complex<double> StateSpace::frf(double omega) const {
  const int n = order();
  const std::complex<double> d{d_dir.rows() > 0 ? d_dir(0, 0) : 0.0, 0.0};
  if (n == 0) return d;
  Eigen::MatrixXcd m = -a.cast<std::complex<double>>();
  for (int i = 0; i < n; ++i) m(i, i) += std::complex<double>{0.0, omega};
  const Eigen::VectorXcd x = m.partialPivLu().solve(b_in.cast<std::complex<double>>());
  return (c_out.cast<std::complex<double>>() * x)(0, 0) + d;
}

std::vector<std::complex<double>> StateSpace::eigenvalues() const {
  std::vector<std::complex<double>> out;
  if (order() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  for (int i = 0; i < order(); ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

bool StateSpace::is_stable() const {
  for (const auto& ev : eigenvalues()) {
    if (!(ev.real() < -1e-9)) return false;
  }
  return true;
}

StateSpace to_state_space(const DelayRational& tf, int pade_order) {
  const DelayRational rat =
      tf.delay() == 0.0 ? tf : pade_rationalize(tf, pade_order);
  if (!rat.is_proper()) {
    throw ImproperTfError(
        "transfer function is improper after rationalization; no state-space "
        "realization exists");
  }
  const int n = rat.den().degree();

  StateSpace ss;
  if (n == 0) {
    // Constant gain: order-0 passthrough (den is monic, so den == 1).
    ss.a.resize(0, 0);
    ss.b_in.resize(0, 1);
    ss.c_out.resize(1, 0);
    ss.d_dir.resize(1, 1);
    ss.d_dir(0, 0) = rat.num().coeff(0);
    return ss;
  }

  // Controllable canonical form over the monic denominator.
  const double bn = rat.num().coeff(static_cast<std::size_t>(n));
  ss.a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) ss.a(i, i + 1) = 1.0;
  for (int i = 0; i < n; ++i) {
    ss.a(n - 1, i) = -rat.den().coeff(static_cast<std::size_t>(i));
  }
  ss.b_in = Eigen::MatrixXd::Zero(n, 1);
  ss.b_in(n - 1, 0) = 1.0;
  ss.c_out.resize(1, n);
  for (int i = 0; i < n; ++i) {
    ss.c_out(0, i) = rat.num().coeff(static_cast<std::size_t>(i)) -
                     bn * rat.den().coeff(static_cast<std::size_t>(i));
  }
  ss.d_dir.resize(1, 1);
  ss.d_dir(0, 0) = bn;
  return ss;
}

Trajectory integrate(const StateSpace& ss,
                     const std::function<double(double)>& input,
                     double duration, double h, double f_max_hz) {
  if (!(h > 0.0) || !(duration > 0.0)) {
    throw Error("integration requires positive step and duration");
  }
  Trajectory tr;
  tr.h = h;
  if (f_max_hz > 0.0 && h > 1.0 / (50.0 * f_max_hz)) {
    tr.step_size_ok = false;
    tr.note = "step size exceeds 1/(50 f_max); results may be inaccurate";
  }

  const auto steps = static_cast<std::size_t>(std::llround(duration / h));
  const int n = ss.order();
  const double d = ss.d_dir.rows() > 0 ? ss.d_dir(0, 0) : 0.0;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  tr.t.reserve(steps + 1);
  tr.u.reserve(steps + 1);
  tr.y.reserve(steps + 1);

  auto deriv = [&ss](const Eigen::VectorXd& state, double u) -> Eigen::VectorXd {
    return ss.a * state + ss.b_in.col(0) * u;
  };

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const double u = input(t);
    const double y = (n > 0 ? (ss.c_out * x)(0, 0) : 0.0) + d * u;
    tr.t.push_back(t);
    tr.u.push_back(u);
    tr.y.push_back(y);
    if (k == steps) break;
    if (n == 0) continue;

    const double u_mid = input(t + 0.5 * h);
    const double u_end = input(t + h);
    const Eigen::VectorXd k1 = deriv(x, u);
    const Eigen::VectorXd k2 = deriv(x + 0.5 * h * k1, u_mid);
    const Eigen::VectorXd k3 = deriv(x + 0.5 * h * k2, u_mid);
    const Eigen::VectorXd k4 = deriv(x + h * k3, u_end);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return tr;
}

FrequencyResponse sine_dwell_frf(const StateSpace& ss, const FrequencyGrid& grid,
                                 int cycles_settle, int cycles_measure) {
  if (ss.order() > 0 && !ss.is_stable()) {
    throw Error("sine dwell requires a stable realization");
  }
  if (cycles_settle < 1 || cycles_measure < 1) {
    throw Error("sine dwell requires at least one settle and one measure cycle");
  }

  double rho = 0.0;  // spectral radius bounds the usable step
  for (const auto& ev : ss.eigenvalues()) rho = std::max(rho, std::abs(ev));

  std::vector<std::complex<double>> values;
  values.reserve(grid.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (double w : grid.omegas()) {
    const double period = kTwoPi / w;
    double h = period / 200.0;
    if (rho > 0.0) h = std::min(h, 1.0 / rho);
    const double duration = (cycles_settle + cycles_measure) * period;
    const Trajectory tr = integrate(
        ss, [w](double t) { return std::sin(w * t); }, duration, h,
        w / kTwoPi);

    // Least-squares fit of the measured cycles to a sin + b cos.
    const double t_start = cycles_settle * period;
    double s_ss = 0.0, s_cc = 0.0, s_sc = 0.0, s_ys = 0.0, s_yc = 0.0;
    bool bad = false;
    double first_cycle_rms = 0.0, last_cycle_rms = 0.0;
    int first_count = 0, last_count = 0;
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      const double t = tr.t[k];
      if (t < t_start) continue;
      const double y = tr.y[k];
      if (!std::isfinite(y)) {
        bad = true;
        break;
      }
      const double sn = std::sin(w * t);
      const double cs = std::cos(w * t);
      s_ss += sn * sn;
      s_cc += cs * cs;
      s_sc += sn * cs;
      s_ys += y * sn;
      s_yc += y * cs;
      if (t < t_start + period) {
        first_cycle_rms += y * y;
        ++first_count;
      }
      if (t >= t_start + (cycles_measure - 1) * period) {
        last_cycle_rms += y * y;
        ++last_count;
      }
    }
    if (!bad && first_count > 0 && last_count > 0) {
      first_cycle_rms = std::sqrt(first_cycle_rms / first_count);
      last_cycle_rms = std::sqrt(last_cycle_rms / last_count);
      // Growing envelope marks the dwell as unusable (instability guard).
      if (last_cycle_rms > 10.0 * first_cycle_rms + 1e-12) bad = true;
    }
    if (bad) {
      values.emplace_back(nan, nan);
      continue;
    }
    const double det = s_ss * s_cc - s_sc * s_sc;
    const double a = (s_ys * s_cc - s_yc * s_sc) / det;
    const double b = (s_yc * s_ss - s_ys * s_sc) / det;
    values.emplace_back(a, b);
  }
  return FrequencyResponse(grid, std::move(values));
}

void write_trajectory_csv(const Trajectory& tr, std::ostream& os) {
  os << "t,u,y\n";
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    os << g17(tr.t[k]) << ',' << g17(tr.u[k]) << ',' << g17(tr.y[k]) << '\n';
  }
}

}  // namespace epsdyn
