#include "epsdyn/margins.hpp"

#include <algorithm>
#include <cmath>

#include "epsdyn/errors.hpp"

namespace epsdyn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double to_deg(double rad) { return rad * 180.0 / kPi; }

// Unwrap `raw` onto the branch nearest `reference`.
double unwrap_near(double reference, double raw) {
  return raw + 2.0 * kPi * std::round((reference - raw) / (2.0 * kPi));
}

struct Samples {
  std::vector<double> logw;
  std::vector<double> logmag;  // log10 |H|
  std::vector<double> phase;   // unwrapped, radians
};

Samples prepare(const FrequencyResponse& fr) {
  Samples s;
  const std::size_t n = fr.grid.size();
  s.logw.resize(n);
  s.logmag.resize(n);
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.logw[i] = std::log10(fr.grid[i]);
    s.logmag[i] = std::log10(std::abs(fr.values[i]));
    raw[i] = std::arg(fr.values[i]);
  }
  s.phase = unwrap_phase(raw);
  return s;
}

double lerp(double x0, double y0, double x1, double y1, double x) {
  if (x1 == x0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

// Bisection for log10|L(jw)| == 0 inside [wa, wb].
double bisect_gain(const Evaluator& eval, double wa, double wb, double fa) {
  double lo = wa, hi = wb;
  bool lo_positive = fa > 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    const double f = std::log10(std::abs(eval(mid)));
    if (f == 0.0) return mid;
    if ((f > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
    if ((hi - lo) <= 1e-13 * hi) break;
  }
  return std::sqrt(lo * hi);
}

// Bisection for unwrapped phase == level inside [wa, wb]. `pa`/`pb` are the
// unwrapped phases at the endpoints; midpoints are unwrapped against the
// local linear-interpolation estimate.
double bisect_phase(const Evaluator& eval, double wa, double wb, double pa,
                    double pb, double level) {
  double lo = wa, hi = wb;
  double plo = pa, phi = pb;
  bool lo_above = pa > level;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    const double expect =
        lerp(std::log10(lo), plo, std::log10(hi), phi, std::log10(mid));
    const double p = unwrap_near(expect, std::arg(eval(mid)));
    if (p == level) return mid;
    if ((p > level) == lo_above) {
      lo = mid;
      plo = p;
    } else {
      hi = mid;
      phi = p;
    }
    if ((hi - lo) <= 1e-13 * hi) break;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

std::vector<double> unwrap_phase(const std::vector<double>& radians) {
  std::vector<double> out(radians.size());
  if (radians.empty()) return out;
  out[0] = radians[0];
  for (std::size_t i = 1; i < radians.size(); ++i) {
    out[i] = unwrap_near(out[i - 1], radians[i]);
  }
  return out;
}

MarginReport stability_margins(const FrequencyResponse& fr,
                               const Evaluator& refine) {
  if (fr.grid.decades() < 2.0 - 1e-12) {
    throw GridError("margin analysis requires a grid spanning >= 2 decades");
  }
  const Samples s = prepare(fr);
  const std::size_t n = fr.grid.size();

  MarginReport report;

  // --- gain crossovers: |L| through unity -------------------------------
  struct GainHit {
    double omega;
    double phase;  // unwrapped radians at the crossover
  };
  std::vector<GainHit> gain_hits;
  for (std::size_t i = 0; i < n; ++i) {
    if (s.logmag[i] == 0.0) {
      gain_hits.push_back({fr.grid[i], s.phase[i]});
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double fa = s.logmag[i];
    const double fb = s.logmag[i + 1];
    if (!(fa * fb < 0.0)) continue;
    double omega;
    double phase;
    if (refine) {
      omega = bisect_gain(refine, fr.grid[i], fr.grid[i + 1], fa);
      const double expect = lerp(s.logw[i], s.phase[i], s.logw[i + 1],
                                 s.phase[i + 1], std::log10(omega));
      phase = unwrap_near(expect, std::arg(refine(omega)));
    } else {
      const double lw = lerp(fa, s.logw[i], fb, s.logw[i + 1], 0.0);
      omega = std::pow(10.0, lw);
      phase = lerp(s.logw[i], s.phase[i], s.logw[i + 1], s.phase[i + 1], lw);
    }
    gain_hits.push_back({omega, phase});
  }

  for (const GainHit& hit : gain_hits) {
    const double pm = 180.0 + to_deg(hit.phase);
    report.all_crossovers.push_back({hit.omega, true, pm});
    if (!report.phase_margin_deg || pm < *report.phase_margin_deg) {
      report.phase_margin_deg = pm;
      report.gain_crossover_rad_s = hit.omega;
    }
  }

  // --- phase crossovers: phase through -180deg + 360k -------------------
  const auto [pmin_it, pmax_it] =
      std::minmax_element(s.phase.begin(), s.phase.end());
  std::vector<double> levels;
  {
    // Odd multiples of pi inside the observed phase range.
    const int m_lo = static_cast<int>(std::ceil((*pmin_it / kPi - 1.0) / 2.0));
    const int m_hi = static_cast<int>(std::floor((*pmax_it / kPi - 1.0) / 2.0));
    for (int m = m_lo; m <= m_hi; ++m) {
      levels.push_back((2.0 * m + 1.0) * kPi);
    }
  }

  struct PhaseHit {
    double omega;
    double logmag;
  };
  std::vector<PhaseHit> phase_hits;
  for (double level : levels) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s.phase[i] == level) {
        phase_hits.push_back({fr.grid[i], s.logmag[i]});
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double pa = s.phase[i] - level;
      const double pb = s.phase[i + 1] - level;
      if (!(pa * pb < 0.0)) continue;
      double omega;
      double lm;
      if (refine) {
        omega = bisect_phase(refine, fr.grid[i], fr.grid[i + 1], s.phase[i],
                             s.phase[i + 1], level);
        lm = std::log10(std::abs(refine(omega)));
      } else {
        const double lw =
            lerp(pa, s.logw[i], pb, s.logw[i + 1], 0.0);
        omega = std::pow(10.0, lw);
        lm = lerp(s.logw[i], s.logmag[i], s.logw[i + 1], s.logmag[i + 1], lw);
      }
      phase_hits.push_back({omega, lm});
    }
  }

  for (const PhaseHit& hit : phase_hits) {
    const double gm_db = -20.0 * hit.logmag;
    report.all_crossovers.push_back({hit.omega, false, gm_db});
    if (gm_db < report.gain_margin_db) {
      report.gain_margin_db = gm_db;
      report.phase_crossover_rad_s = hit.omega;
    }
  }

  std::sort(report.all_crossovers.begin(), report.all_crossovers.end(),
            [](const Crossover& a, const Crossover& b) {
              return a.omega_rad_s < b.omega_rad_s;
            });
  return report;
}

MarginReport stability_margins(const DelayRational& tf,
                               const FrequencyGrid& grid) {
  const Evaluator eval = evaluator_of(tf);
  return stability_margins(sample(eval, grid), eval);
}

}  // namespace epsdyn
