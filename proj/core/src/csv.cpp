#include "epsdyn/csv.hpp"

#include <cmath>
#include <cstdio>

#include "epsdyn/errors.hpp"
#include "epsdyn/margins.hpp"

namespace epsdyn {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

constexpr double kRadToDeg = 57.295779513082320877;

struct BodeColumns {
  std::vector<double> mag_db;
  std::vector<double> phase_deg;
};

BodeColumns bode_columns(const FrequencyResponse& fr) {
  BodeColumns out;
  out.mag_db.reserve(fr.values.size());
  std::vector<double> raw;
  raw.reserve(fr.values.size());
  for (const auto& v : fr.values) {
    out.mag_db.push_back(20.0 * std::log10(std::abs(v)));
    raw.push_back(std::arg(v));
  }
  const std::vector<double> unwrapped = unwrap_phase(raw);
  out.phase_deg.reserve(unwrapped.size());
  for (double p : unwrapped) out.phase_deg.push_back(p * kRadToDeg);
  return out;
}

}  // namespace

void write_bode_csv(const FrequencyResponse& fr, std::ostream& os) {
  const BodeColumns cols = bode_columns(fr);
  os << "omega_rad_s,mag_db,phase_deg\n";
  for (std::size_t i = 0; i < fr.grid.size(); ++i) {
    os << format_g17(fr.grid[i]) << ',' << format_g17(cols.mag_db[i]) << ','
       << format_g17(cols.phase_deg[i]) << '\n';
  }
}

void write_bode_pair_csv(const FrequencyResponse& a, const std::string& label_a,
                         const FrequencyResponse& b, const std::string& label_b,
                         std::ostream& os) {
  if (!(a.grid == b.grid)) {
    throw GridError("paired Bode export requires a shared grid");
  }
  const BodeColumns ca = bode_columns(a);
  const BodeColumns cb = bode_columns(b);
  os << "omega_rad_s,mag_db_" << label_a << ",phase_deg_" << label_a
     << ",mag_db_" << label_b << ",phase_deg_" << label_b << '\n';
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    os << format_g17(a.grid[i]) << ',' << format_g17(ca.mag_db[i]) << ','
       << format_g17(ca.phase_deg[i]) << ',' << format_g17(cb.mag_db[i]) << ','
       << format_g17(cb.phase_deg[i]) << '\n';
  }
}

}  // namespace epsdyn
