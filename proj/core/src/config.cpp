#include "epsdyn/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "epsdyn/errors.hpp"

namespace epsdyn {

namespace {

using Value = std::variant<double, std::string, std::vector<double>>;

struct Entry {
  Value value;
  int line = 0;
};

using Table = std::map<std::string, Entry>;  // "section.key" -> entry

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

// Cut an unquoted comment off a line.
std::string drop_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& text, int line, int col) {
  const std::string t = strip(text);
  if (t.empty()) throw ConfigParseError(line, col, "expected a number");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) {
    throw ConfigParseError(line, col, "malformed number '" + t + "'");
  }
  return v;
}

Value parse_value(const std::string& text, int line, int col) {
  const std::string t = strip(text);
  if (t.empty()) throw ConfigParseError(line, col, "missing value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') {
      throw ConfigParseError(line, col, "unterminated string");
    }
    return t.substr(1, t.size() - 2);
  }
  if (t.front() == '[') {
    if (t.back() != ']') {
      throw ConfigParseError(line, col, "unterminated array");
    }
    std::vector<double> items;
    std::stringstream ss(t.substr(1, t.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (strip(item).empty() && items.empty() && ss.eof()) break;  // []
      items.push_back(parse_number(item, line, col));
    }
    return items;
  }
  return parse_number(t, line, col);
}

Table parse_table(const std::string& text) {
  Table table;
  std::stringstream ss(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    const std::string line = strip(drop_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigParseError(line_no, 1, "malformed section header");
      }
      section = strip(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigParseError(line_no, 2, "empty section name");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigParseError(line_no, 1, "expected 'key = value'");
    }
    const std::string key = strip(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigParseError(line_no, 1, "empty key");
    }
    if (section.empty()) {
      throw ConfigParseError(line_no, 1, "key '" + key + "' outside any section");
    }
    const int col = static_cast<int>(raw.find('=')) + 2;
    const std::string full = section + "." + key;
    if (table.count(full)) {
      throw ConfigParseError(line_no, 1, "duplicate key '" + full + "'");
    }
    table[full] = {parse_value(line.substr(eq + 1), line_no, col), line_no};
  }
  return table;
}

// Typed access over the parsed table; records violations instead of throwing
// so every problem is reported at once.
class Reader {
 public:
  explicit Reader(Table table) : table_(std::move(table)) {}

  bool has(const std::string& key) const { return table_.count(key) > 0; }
  bool has_section(const std::string& section) const {
    const std::string prefix = section + ".";
    auto it = table_.lower_bound(prefix);
    return it != table_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
  }

  double number(const std::string& key, double fallback) {
    auto it = find(key);
    if (it == table_.end()) return fallback;
    if (const double* v = std::get_if<double>(&it->second.value)) return *v;
    violations_.push_back(key + " must be a number");
    return fallback;
  }

  double required_number(const std::string& key) {
    auto it = find(key);
    if (it == table_.end()) {
      violations_.push_back("missing required key " + key);
      return std::nan("");
    }
    if (const double* v = std::get_if<double>(&it->second.value)) return *v;
    violations_.push_back(key + " must be a number");
    return std::nan("");
  }

  int integer(const std::string& key, int fallback) {
    auto it = find(key);
    if (it == table_.end()) return fallback;
    if (const double* v = std::get_if<double>(&it->second.value)) {
      if (*v == std::floor(*v) && std::abs(*v) < 1e9) return static_cast<int>(*v);
    }
    violations_.push_back(key + " must be an integer");
    return fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    auto it = find(key);
    if (it == table_.end()) return fallback;
    if (const std::string* v = std::get_if<std::string>(&it->second.value)) return *v;
    violations_.push_back(key + " must be a quoted string");
    return fallback;
  }

  std::vector<double> array(const std::string& key, std::vector<double> fallback) {
    auto it = find(key);
    if (it == table_.end()) return fallback;
    if (const auto* v = std::get_if<std::vector<double>>(&it->second.value)) return *v;
    violations_.push_back(key + " must be an array of numbers");
    return fallback;
  }

  void add_violation(const std::string& v) { violations_.push_back(v); }

  void finish() {
    for (const auto& [key, entry] : table_) {
      if (!consumed_.count(key)) {
        violations_.push_back("unknown key " + key + " (line " +
                              std::to_string(entry.line) + ")");
      }
    }
    if (!violations_.empty()) {
      throw ConfigValidationError(std::move(violations_));
    }
  }

 private:
  Table::iterator find(const std::string& key) {
    auto it = table_.find(key);
    if (it != table_.end()) consumed_.insert(key);
    return it;
  }
  Table table_;
  std::set<std::string> consumed_;
  std::vector<std::string> violations_;
};

}  // namespace

SystemConfig parse_config_text(const std::string& text) {
  Reader r(parse_table(text));
  SystemConfig cfg;

  cfg.mechanical.j_h = r.required_number("mechanical.j_h");
  cfg.mechanical.b_h = r.required_number("mechanical.b_h");
  cfg.mechanical.j_m = r.required_number("mechanical.j_m");
  cfg.mechanical.b_m = r.required_number("mechanical.b_m");
  cfg.mechanical.k_h = r.required_number("mechanical.k_h");
  cfg.mechanical.k_l = r.required_number("mechanical.k_l");
  cfg.mechanical.n = r.required_number("mechanical.n");

  cfg.motor.p = r.integer("motor.p", 0);
  cfg.motor.lambda_m = r.required_number("motor.lambda_m");
  cfg.motor.l_d = r.required_number("motor.l_d");
  cfg.motor.l_q = r.required_number("motor.l_q");
  cfg.motor.r = r.required_number("motor.r");

  // Estimates default to the true constants (a perfect-model study).
  cfg.estimates.lambda_m = r.number("estimates.lambda_m", cfg.motor.lambda_m);
  cfg.estimates.l_d = r.number("estimates.l_d", cfg.motor.l_d);
  cfg.estimates.l_q = r.number("estimates.l_q", cfg.motor.l_q);
  cfg.estimates.r = r.number("estimates.r", cfg.motor.r);

  cfg.delays.tau_c = r.number("delays.tau_c", 0.0);
  cfg.delays.tau_p = r.number("delays.tau_p", 0.0);

  cfg.velocity_estimator.tau_omega = r.number("velocity_estimator.tau_omega", 0.0);
  const std::string variant = r.text("velocity_estimator.variant", "physical");
  if (variant == "physical") {
    cfg.velocity_estimator.variant = VelocityVariant::kPhysical;
  } else if (variant == "paper") {
    cfg.velocity_estimator.variant = VelocityVariant::kPaper;
  } else {
    r.add_violation("velocity_estimator.variant must be \"physical\" or \"paper\"");
  }

  if (r.has_section("pi_gains")) {
    PiGains g;
    g.k_pd = r.number("pi_gains.k_pd", 0.0);
    g.k_id = r.number("pi_gains.k_id", 0.0);
    g.k_pq = r.required_number("pi_gains.k_pq");
    g.k_iq = r.required_number("pi_gains.k_iq");
    cfg.pi_gains = g;
  }

  cfg.assist.gain = r.number("assist.gain", 1.0);
  {
    const std::vector<double> cn = r.array("assist.compensator_num", {1.0});
    const std::vector<double> cd = r.array("assist.compensator_den", {1.0});
    const double cdelay = r.number("assist.compensator_delay", 0.0);
    try {
      cfg.assist.compensator =
          DelayRational(Polynomial(cn), Polynomial(cd), cdelay);
    } catch (const Error& e) {
      r.add_violation(std::string("assist.compensator: ") + e.what());
    }
  }

  cfg.grid.min_rad_s = r.number("grid.min_rad_s", 0.1);
  cfg.grid.max_rad_s = r.number("grid.max_rad_s", 1.0e4);
  cfg.grid.points_per_decade = r.number("grid.points_per_decade", 80.0);

  cfg.operating_point.i_d0 = r.number("operating_point.i_d0", 0.0);
  cfg.operating_point.i_q0 = r.number("operating_point.i_q0", 0.0);
  cfg.operating_point.omega_m0 = r.number("operating_point.omega_m0", 0.0);

  const std::string mech_variant =
      r.text("options.mech_variant", "first_principles");
  if (mech_variant == "first_principles") {
    cfg.mech_variant = MechProvenance::kFirstPrinciples;
  } else if (mech_variant == "paper") {
    cfg.mech_variant = MechProvenance::kPaperVerbatim;
  } else {
    r.add_violation("options.mech_variant must be \"first_principles\" or \"paper\"");
  }
  cfg.s_hat.tau_d = r.number("options.s_hat_tau_d", 0.0);
  cfg.pade_order = r.integer("options.pade_order", 4);

  // Collect every violated invariant before reporting.
  std::vector<std::string> v;
  cfg.mechanical.collect_violations(v);
  cfg.motor.collect_violations(v);
  cfg.estimates.collect_violations(v);
  cfg.delays.collect_violations(v);
  cfg.velocity_estimator.collect_violations(v);
  if (cfg.pi_gains) cfg.pi_gains->collect_violations(v);
  cfg.assist.collect_violations(v);
  if (!(cfg.grid.min_rad_s > 0.0) || !std::isfinite(cfg.grid.min_rad_s)) {
    v.push_back("grid.min_rad_s must be finite and > 0");
  }
  if (!(cfg.grid.max_rad_s > cfg.grid.min_rad_s) || !std::isfinite(cfg.grid.max_rad_s)) {
    v.push_back("grid.max_rad_s must be finite and > grid.min_rad_s");
  }
  if (!(cfg.grid.points_per_decade > 0.0)) {
    v.push_back("grid.points_per_decade must be > 0");
  }
  if (!std::isfinite(cfg.operating_point.i_d0) ||
      !std::isfinite(cfg.operating_point.i_q0) ||
      !std::isfinite(cfg.operating_point.omega_m0)) {
    v.push_back("operating_point entries must be finite");
  }
  if (!(cfg.s_hat.tau_d >= 0.0) || !std::isfinite(cfg.s_hat.tau_d)) {
    v.push_back("options.s_hat_tau_d must be finite and >= 0");
  }
  if (cfg.pade_order < 1 || cfg.pade_order > 10) {
    v.push_back("options.pade_order must lie in [1, 10]");
  }
  for (auto& item : v) r.add_violation(item);

  r.finish();
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) {
    throw Error("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace epsdyn
