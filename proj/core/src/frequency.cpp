#include "epsdyn/frequency.hpp"

#include <cmath>

#include "epsdyn/errors.hpp"

namespace epsdyn {

FrequencyGrid::FrequencyGrid(std::vector<double> omegas)
    : omegas_(std::move(omegas)) {
  if (omegas_.empty()) {
    throw GridError("frequency grid must not be empty");
  }
  double prev = 0.0;
  for (double w : omegas_) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw GridError("frequency grid entries must be finite and positive");
    }
    if (w <= prev) {
      throw GridError("frequency grid must be strictly increasing");
    }
    prev = w;
  }
}

FrequencyGrid FrequencyGrid::log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw GridError("log_spaced requires 0 < lo < hi and n >= 2");
  }
  std::vector<double> w(n);
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    w[i] = std::pow(10.0, llo + f * (lhi - llo));
  }
  w.front() = lo;
  w.back() = hi;
  return FrequencyGrid(std::move(w));
}

FrequencyGrid FrequencyGrid::per_decade(double lo, double hi,
                                        double points_per_decade) {
  if (!(points_per_decade > 0.0)) {
    throw GridError("points_per_decade must be positive");
  }
  const double decades = std::log10(hi / lo);
  const auto n = static_cast<std::size_t>(
      std::max(2.0, std::round(points_per_decade * decades) + 1.0));
  return log_spaced(lo, hi, n);
}

double FrequencyGrid::decades() const {
  return std::log10(omegas_.back() / omegas_.front());
}

double FrequencyGrid::points_per_decade() const {
  return static_cast<double>(omegas_.size() - 1) / decades();
}

FrequencyResponse::FrequencyResponse(FrequencyGrid g,
                                     std::vector<std::complex<double>> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw GridError("frequency response length does not match its grid");
  }
}

Evaluator evaluator_of(const DelayRational& tf) {
  return [tf](double omega) { return freq_eval(tf, omega); };
}

FrequencyResponse sample(const Evaluator& eval, const FrequencyGrid& grid) {
  std::vector<std::complex<double>> v;
  v.reserve(grid.size());
  for (double w : grid.omegas()) {
    v.push_back(eval(w));
  }
  return FrequencyResponse(grid, std::move(v));
}

}  // namespace epsdyn
