#pragma once

#include <ostream>
#include <string>

#include "epsdyn/frequency.hpp"

namespace epsdyn {

/// Shortest faithful decimal text at 17 significant digits.
std::string format_g17(double v);

/// Bode CSV: header `omega_rad_s,mag_db,phase_deg`, one row per grid point,
/// phase unwrapped across the grid.
void write_bode_csv(const FrequencyResponse& fr, std::ostream& os);

/// Two Bode sets over a shared grid:
/// `omega_rad_s,mag_db_<a>,phase_deg_<a>,mag_db_<b>,phase_deg_<b>`.
void write_bode_pair_csv(const FrequencyResponse& a, const std::string& label_a,
                         const FrequencyResponse& b, const std::string& label_b,
                         std::ostream& os);

}  // namespace epsdyn
