#include "epsdyn/polynomial.hpp"

#include <algorithm>

namespace epsdyn {

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) {
    c_.pop_back();
  }
}

std::size_t Polynomial::lowest_nonzero() const {
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] != 0.0) return k;
  }
  return 0;
}

std::complex<double> Polynomial::eval(std::complex<double> at) const {
  std::complex<double> acc{0.0, 0.0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * at + *it;
  }
  return acc;
}

double Polynomial::eval(double at) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * at + *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial{};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * c_[k];
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::times_s(std::size_t k) const {
  if (is_zero() || k == 0) return k == 0 ? *this : Polynomial{};
  std::vector<double> out(c_.size() + k, 0.0);
  std::copy(c_.begin(), c_.end(), out.begin() + static_cast<std::ptrdiff_t>(k));
  return Polynomial(std::move(out));
}

Polynomial Polynomial::divided_by(double scalar) const {
  std::vector<double> out(c_);
  for (double& v : out) v /= scalar;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-() const {
  std::vector<double> out(c_);
  for (double& v : out) v = -v;
  return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = a.coeff(k) + b.coeff(k);
  }
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = a.coeff(k) - b.coeff(k);
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      out[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(double k, const Polynomial& p) {
  std::vector<double> out(p.c_);
  for (double& v : out) v *= k;
  return Polynomial(std::move(out));
}

}  // namespace epsdyn
