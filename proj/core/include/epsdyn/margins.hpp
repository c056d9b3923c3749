#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "epsdyn/frequency.hpp"

namespace epsdyn {

/// One unity-gain or -180deg crossing of an open-loop response.
struct Crossover {
  double omega_rad_s = 0.0;
  bool is_gain_crossover = false;  // false: phase crossover
  /// Phase margin in degrees at a gain crossover; gain margin in dB at a
  /// phase crossover.
  double margin = 0.0;
};

/// Classical stability margins. Missing crossings are reported as markers:
/// no gain crossover leaves phase_margin_deg unset (never silently zero);
/// no phase crossover leaves gain_margin_db at +infinity.
struct MarginReport {
  std::optional<double> phase_margin_deg;
  double gain_margin_db = std::numeric_limits<double>::infinity();
  std::optional<double> gain_crossover_rad_s;
  std::optional<double> phase_crossover_rad_s;
  std::vector<Crossover> all_crossovers;  // sorted by frequency

  /// Grid-based Nyquist heuristic: a defined nonpositive margin flags the
  /// closed loop as unstable (valid for open-loop-stable plants).
  bool loop_stable() const {
    if (phase_margin_deg && *phase_margin_deg <= 0.0) return false;
    if (gain_margin_db <= 0.0) return false;
    return true;
  }
};

/// Unwrap phase samples (radians) by nearest-multiple-of-2pi continuation.
std::vector<double> unwrap_phase(const std::vector<double>& radians);

/// Compute gain and phase margins of an open-loop frequency response.
/// The grid must span at least two decades and should hold >= 20 points per
/// decade (the phase-unwrap contract). When `refine` is provided, crossover
/// frequencies are tightened by bisection on the underlying evaluator;
/// otherwise local log-log interpolation is used. With multiple crossings
/// every one is reported and the headline fields carry the worst case.
MarginReport stability_margins(const FrequencyResponse& fr,
                               const Evaluator& refine = {});

/// Convenience: sample tf on the grid, then compute margins with refinement
/// against the exact evaluator.
MarginReport stability_margins(const DelayRational& tf,
                               const FrequencyGrid& grid);

}  // namespace epsdyn
