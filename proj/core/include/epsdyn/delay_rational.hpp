#pragma once

#include <complex>
#include <string>
#include <vector>

#include "epsdyn/polynomial.hpp"

namespace epsdyn {

/// Rational transfer function times a pure transport lag:
///
///   H(s) = num(s)/den(s) * exp(-delay * s),   delay >= 0.
///
/// Canonical form, established at construction and preserved by every
/// operation: numerator and denominator trimmed, common exact s^k factors
/// removed, exactly-proportional num/den pairs reduced to a constant, and
/// the denominator normalized to be monic. Only exactly-zero coefficients
/// are ever cancelled; no approximate pole-zero cancellation is performed.
class DelayRational {
 public:
  /// The identity transfer function 1/1.
  DelayRational() : num_(Polynomial::one()), den_(Polynomial::one()), delay_(0.0) {}
  DelayRational(Polynomial num, Polynomial den, double delay = 0.0);

  static DelayRational constant(double k) {
    return DelayRational(Polynomial::constant(k), Polynomial::one());
  }
  static DelayRational pure_delay(double tau) {
    return DelayRational(Polynomial::one(), Polynomial::one(), tau);
  }
  /// 1/s.
  static DelayRational integrator() {
    return DelayRational(Polynomial::one(), Polynomial::s());
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  double delay() const { return delay_; }
  bool is_rational() const { return delay_ == 0.0; }
  bool is_zero() const { return num_.is_zero(); }
  /// True when numerator degree <= denominator degree.
  bool is_proper() const { return num_.degree() <= den_.degree(); }

  /// Exact structural equality of canonical forms.
  friend bool operator==(const DelayRational& a, const DelayRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_ && a.delay_ == b.delay_;
  }

 private:
  void canonicalize();
  Polynomial num_;
  Polynomial den_;
  double delay_;
};

/// Evaluate H(j*omega). omega must be finite and positive. Throws
/// PoleEvaluationError when |den(j*omega)| falls below 1e-300.
std::complex<double> freq_eval(const DelayRational& tf, double omega);

/// Series composition: delays add, numerators and denominators multiply.
DelayRational operator*(const DelayRational& a, const DelayRational& b);

/// Parallel composition over a common denominator. Requires exactly equal
/// delays; throws UnequalDelayError otherwise.
DelayRational operator+(const DelayRational& a, const DelayRational& b);
DelayRational operator-(const DelayRational& a, const DelayRational& b);

/// Negative-feedback closure g/(1 + g*h). Both operands must be rational
/// (zero delay); throws NonzeroDelayError otherwise, and
/// DegenerateFeedbackError when 1 + g*h is identically zero.
DelayRational feedback(const DelayRational& g, const DelayRational& h);

/// Multiplicative inverse den/num of a rational transfer function.
DelayRational inverse(const DelayRational& tf);

/// Replace the transport-lag factor by its diagonal [order/order] Pade
/// approximant; the result has zero delay. order must lie in [1, 10].
/// A zero-delay input is returned unchanged.
DelayRational pade_rationalize(const DelayRational& tf, int order);

/// num(0)/den(0) with markers instead of faults: returns +/-infinity when
/// den(0) == 0 and num(0) != 0 (common exact s factors are already removed
/// by the canonical form). The zero transfer function has DC gain 0.
double dc_gain(const DelayRational& tf);

struct PoleAnalysis {
  std::vector<std::complex<double>> poles;  // sorted by (real, imag)
  bool stable = false;    // every pole has real part < -1e-9
  bool marginal = false;  // some pole lies within 1e-9 of the imaginary axis
};

/// Denominator roots via balanced companion-matrix eigenvalues with Newton
/// polish. Requires zero delay (exact delay systems have infinitely many
/// poles) and denominator degree >= 1.
PoleAnalysis poles_and_stability(const DelayRational& tf);

/// Golden-file record: `num;den;delay`, coefficients ascending,
/// comma-separated decimal text at 17 significant digits.
std::string to_record(const DelayRational& tf);
DelayRational from_record(const std::string& record);

}  // namespace epsdyn
