#include "epsdyn/delay_rational.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "epsdyn/errors.hpp"

namespace epsdyn {

DelayRational::DelayRational(Polynomial num, Polynomial den, double delay)
    : num_(std::move(num)), den_(std::move(den)), delay_(delay) {
  canonicalize();
}

void DelayRational::canonicalize() {
  if (den_.is_zero()) {
    throw Error("transfer function denominator is identically zero");
  }
  if (!std::isfinite(delay_) || delay_ < 0.0) {
    throw Error("transport delay must be finite and >= 0");
  }
  if (num_.is_zero()) {
    num_ = Polynomial{};
    den_ = Polynomial::one();
    delay_ = 0.0;
    return;
  }

  // Strip common exact s^k factors.
  const std::size_t k = std::min(num_.lowest_nonzero(), den_.lowest_nonzero());
  if (k > 0) {
    auto strip = [k](const Polynomial& p) {
      std::vector<double> c(p.coeffs().begin() + static_cast<std::ptrdiff_t>(k),
                            p.coeffs().end());
      return Polynomial(std::move(c));
    };
    num_ = strip(num_);
    den_ = strip(den_);
  }

  // Reduce exactly-proportional num/den (e.g. (s+1)/(s+1) -> 1).
  if (num_.degree() == den_.degree()) {
    const double ratio = num_.leading() / den_.leading();
    bool proportional = true;
    for (std::size_t i = 0; i < num_.coeffs().size(); ++i) {
      if (num_.coeff(i) != ratio * den_.coeff(i)) {
        proportional = false;
        break;
      }
    }
    if (proportional) {
      num_ = Polynomial::constant(ratio);
      den_ = Polynomial::one();
      return;
    }
  }

  // Monic denominator.
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ = num_.divided_by(lead);
    den_ = den_.divided_by(lead);
  }
}

std::complex<double> freq_eval(const DelayRational& tf, double omega) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw Error("freq_eval requires a finite positive angular frequency");
  }
  const std::complex<double> s{0.0, omega};
  const std::complex<double> d = tf.den().eval(s);
  if (std::abs(d) < 1e-300) {
    throw PoleEvaluationError(
        omega, "denominator vanishes on the imaginary axis near omega=" +
                   std::to_string(omega) + " rad/s");
  }
  const std::complex<double> n = tf.num().eval(s);
  const std::complex<double> lag =
      tf.delay() == 0.0
          ? std::complex<double>{1.0, 0.0}
          : std::exp(std::complex<double>{0.0, -omega * tf.delay()});
  return n / d * lag;
}

DelayRational operator*(const DelayRational& a, const DelayRational& b) {
  return DelayRational(a.num() * b.num(), a.den() * b.den(),
                       a.delay() + b.delay());
}

DelayRational operator+(const DelayRational& a, const DelayRational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.delay() != b.delay()) {
    throw UnequalDelayError(
        "cannot add transfer functions with distinct transport delays; "
        "rationalize first via pade_rationalize");
  }
  if (a.den() == b.den()) {
    return DelayRational(a.num() + b.num(), a.den(), a.delay());
  }
  return DelayRational(a.num() * b.den() + b.num() * a.den(),
                       a.den() * b.den(), a.delay());
}

DelayRational operator-(const DelayRational& a, const DelayRational& b) {
  return a + DelayRational(-b.num(), b.den(), b.delay());
}

DelayRational feedback(const DelayRational& g, const DelayRational& h) {
  if (g.delay() != 0.0 || h.delay() != 0.0) {
    throw NonzeroDelayError(
        "feedback closure requires rational (delay-free) operands; use "
        "pade_rationalize or a per-frequency closure");
  }
  const Polynomial den = g.den() * h.den() + g.num() * h.num();
  if (den.is_zero()) {
    throw DegenerateFeedbackError("1 + g*h is identically zero");
  }
  return DelayRational(g.num() * h.den(), den);
}

DelayRational inverse(const DelayRational& tf) {
  if (tf.delay() != 0.0) {
    throw NonzeroDelayError("cannot invert a transfer function with delay");
  }
  if (tf.is_zero()) {
    throw Error("cannot invert the zero transfer function");
  }
  return DelayRational(tf.den(), tf.num());
}

DelayRational pade_rationalize(const DelayRational& tf, int order) {
  if (order < 1 || order > 10) {
    throw Error("Pade order must lie in [1, 10]");
  }
  if (tf.delay() == 0.0) return tf;

  // Diagonal [m/m] Pade approximant of exp(-tau*s): Q(-tau*s)/Q(tau*s) with
  // coefficient recurrence q_{j+1} = q_j * (m-j) / ((2m-j)(j+1)) * tau.
  const double tau = tf.delay();
  const int m = order;
  std::vector<double> qp(static_cast<std::size_t>(m) + 1);  // Q(tau*s)
  std::vector<double> qn(static_cast<std::size_t>(m) + 1);  // Q(-tau*s)
  qp[0] = 1.0;
  qn[0] = 1.0;
  for (int j = 0; j < m; ++j) {
    const double r = static_cast<double>(m - j) /
                     (static_cast<double>(2 * m - j) * static_cast<double>(j + 1));
    qp[static_cast<std::size_t>(j) + 1] = qp[static_cast<std::size_t>(j)] * r * tau;
    qn[static_cast<std::size_t>(j) + 1] = -qn[static_cast<std::size_t>(j)] * r * tau;
  }
  return DelayRational(tf.num() * Polynomial(std::move(qn)),
                       tf.den() * Polynomial(std::move(qp)));
}

double dc_gain(const DelayRational& tf) {
  if (tf.is_zero()) return 0.0;
  const double n0 = tf.num().coeff(0);
  const double d0 = tf.den().coeff(0);
  if (d0 != 0.0) return n0 / d0;
  // Canonical form already removed common exact s factors, so den(0)=0 here
  // implies num(0) != 0: a genuine pole at the origin.
  const double lead_low = tf.den().coeff(tf.den().lowest_nonzero());
  return std::copysign(std::numeric_limits<double>::infinity(), n0 * lead_low);
}

namespace {

// One to three Newton steps to tighten companion-matrix eigenvalues.
std::complex<double> polish_root(const Polynomial& p, const Polynomial& dp,
                                 std::complex<double> r) {
  for (int it = 0; it < 3; ++it) {
    const std::complex<double> f = p.eval(r);
    const std::complex<double> g = dp.eval(r);
    if (std::abs(g) == 0.0) break;
    const std::complex<double> step = f / g;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    const std::complex<double> next = r - step;
    if (std::abs(p.eval(next)) < std::abs(f)) {
      r = next;
    } else {
      break;
    }
  }
  return r;
}

}  // namespace

PoleAnalysis poles_and_stability(const DelayRational& tf) {
  if (tf.delay() != 0.0) {
    throw NonzeroDelayError(
        "exact delay systems have infinitely many poles; rationalize first");
  }
  const Polynomial& den = tf.den();
  const int n = den.degree();
  if (n < 1) {
    throw Error("pole analysis requires denominator degree >= 1");
  }

  // Canonical form guarantees a monic denominator.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -den.coeff(static_cast<std::size_t>(i));

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error("companion-matrix eigenvalue computation failed");
  }

  PoleAnalysis out;
  out.poles.reserve(static_cast<std::size_t>(n));
  const Polynomial dden = den.derivative();
  for (int i = 0; i < n; ++i) {
    out.poles.push_back(polish_root(den, dden, solver.eigenvalues()(i)));
  }
  std::sort(out.poles.begin(), out.poles.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });

  constexpr double kAxisTol = 1e-9;
  out.stable = true;
  for (const auto& p : out.poles) {
    if (!(p.real() < -kAxisTol)) out.stable = false;
    if (std::abs(p.real()) <= kAxisTol) out.marginal = true;
  }
  return out;
}

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string poly_text(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i > 0) out += ',';
    out += g17(p.coeffs()[i]);
  }
  return out;
}

std::vector<double> parse_coeffs(const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(field);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    out.push_back(v);
  }
  if (out.empty()) throw Error("empty coefficient list in record");
  return out;
}

}  // namespace

std::string to_record(const DelayRational& tf) {
  return poly_text(tf.num()) + ";" + poly_text(tf.den()) + ";" + g17(tf.delay());
}

DelayRational from_record(const std::string& record) {
  const std::size_t p1 = record.find(';');
  const std::size_t p2 = record.find(';', p1 == std::string::npos ? 0 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos) {
    throw Error("malformed transfer-function record: " + record);
  }
  const Polynomial num(parse_coeffs(record.substr(0, p1)));
  const Polynomial den(parse_coeffs(record.substr(p1 + 1, p2 - p1 - 1)));
  const double delay = std::stod(record.substr(p2 + 1));
  return DelayRational(num, den, delay);
}

}  // namespace epsdyn
