#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "epsdyn/delay_rational.hpp"

namespace epsdyn {

/// Strictly increasing positive angular frequencies, rad/s.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> omegas);

  /// n log-spaced points over [lo, hi].
  static FrequencyGrid log_spaced(double lo, double hi, std::size_t n);
  /// Log-spaced at a fixed density; at least two points.
  static FrequencyGrid per_decade(double lo, double hi, double points_per_decade);
  /// 400 log-spaced points over 0.1..1e4 rad/s, the default analysis band.
  static FrequencyGrid standard() { return log_spaced(0.1, 1.0e4, 400); }

  std::size_t size() const { return omegas_.size(); }
  double operator[](std::size_t i) const { return omegas_[i]; }
  const std::vector<double>& omegas() const { return omegas_; }
  double front() const { return omegas_.front(); }
  double back() const { return omegas_.back(); }
  double decades() const;
  double points_per_decade() const;

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
    return a.omegas_ == b.omegas_;
  }

 private:
  std::vector<double> omegas_;
};

/// Complex response values over a frequency grid.
struct FrequencyResponse {
  FrequencyResponse(FrequencyGrid g, std::vector<std::complex<double>> v);
  FrequencyGrid grid;
  std::vector<std::complex<double>> values;
};

/// A point-evaluable frequency response H(j*omega).
using Evaluator = std::function<std::complex<double>(double omega)>;

Evaluator evaluator_of(const DelayRational& tf);
FrequencyResponse sample(const Evaluator& eval, const FrequencyGrid& grid);

/// A dynamic element carried in symbolic (DelayRational) form when an exact
/// rational-with-delay expression exists, and always point-evaluable. The
/// evaluator is the authoritative value; the symbolic form, when present,
/// agrees with it exactly.
struct Channel {
  std::optional<DelayRational> symbolic;
  Evaluator eval;

  std::complex<double> operator()(double omega) const { return eval(omega); }
  bool is_symbolic() const { return symbolic.has_value(); }

  static Channel from_tf(const DelayRational& tf) {
    return Channel{tf, evaluator_of(tf)};
  }
  static Channel from_eval(Evaluator e) { return Channel{std::nullopt, std::move(e)}; }
};

}  // namespace epsdyn
