#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace epsdyn {

/// Real polynomial in the Laplace variable s, stored ascending: coeff(k)
/// multiplies s^k. Trailing zero coefficients are trimmed on construction,
/// so the highest stored coefficient is nonzero unless the polynomial is
/// identically zero (stored as an empty coefficient vector).
class Polynomial {
 public:
  Polynomial() = default;  // the zero polynomial
  Polynomial(std::initializer_list<double> ascending)
      : c_(ascending) {
    trim();
  }
  explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {
    trim();
  }

  static Polynomial constant(double c) { return Polynomial{c}; }
  static Polynomial one() { return Polynomial{1.0}; }
  static Polynomial s() { return Polynomial{0.0, 1.0}; }

  bool is_zero() const { return c_.empty(); }
  /// Degree of the polynomial; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  /// Coefficient of s^k; zero beyond the stored range.
  double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }
  /// Highest stored coefficient; 0 for the zero polynomial.
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }
  /// Index of the lowest-order nonzero coefficient; 0 for the zero polynomial.
  std::size_t lowest_nonzero() const;

  std::complex<double> eval(std::complex<double> at) const;
  double eval(double at) const;

  Polynomial derivative() const;
  /// Multiply by s^k (shift coefficients up).
  Polynomial times_s(std::size_t k = 1) const;
  /// Divide every coefficient by a nonzero scalar.
  Polynomial divided_by(double scalar) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double k, const Polynomial& p);
  friend Polynomial operator*(const Polynomial& p, double k) { return k * p; }

  /// Exact (bitwise) coefficient equality.
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.c_ == b.c_;
  }

 private:
  void trim();
  std::vector<double> c_;
};

}  // namespace epsdyn
