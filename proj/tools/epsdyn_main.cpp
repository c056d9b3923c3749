// epsdyn: delay-aware frequency-domain analysis of steering
// electromechanical dynamics behind a deterministic, CSV-emitting CLI.
//
// Exit codes: 0 success, 1 usage error, 2 compute/config error,
// 3 loop unstable (margins/sim).

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "epsdyn/closed_loop.hpp"
#include "epsdyn/config.hpp"
#include "epsdyn/csv.hpp"
#include "epsdyn/emd_control.hpp"
#include "epsdyn/errors.hpp"
#include "epsdyn/margins.hpp"
#include "epsdyn/state_space.hpp"

namespace {

using namespace epsdyn;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCompute = 2;
constexpr int kExitUnstable = 3;

constexpr double kRadToDeg = 57.295779513082320877;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string grid_spec;  // "min:max:ppd" override
  int pade_override = 0;  // 0: use config
};

// Parse "--grid min:max:ppd" into the config grid.
void apply_grid_override(SystemConfig& cfg, const std::string& spec) {
  if (spec.empty()) return;
  double lo = 0.0, hi = 0.0, ppd = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(spec);
  ss >> lo >> c1 >> hi >> c2 >> ppd;
  if (ss.fail() || c1 != ':' || c2 != ':') {
    throw Error("--grid expects min:max:points_per_decade");
  }
  cfg.grid.min_rad_s = lo;
  cfg.grid.max_rad_s = hi;
  cfg.grid.points_per_decade = ppd;
  cfg.grid.make();  // validate now
}

SystemConfig load(const CommonOpts& opts) {
  SystemConfig cfg = load_config(opts.config_path);
  apply_grid_override(cfg, opts.grid_spec);
  if (opts.pade_override > 0) cfg.pade_order = opts.pade_override;
  return cfg;
}

Architecture parse_arch(const std::string& name) {
  if (name == "ff") return Architecture::kFeedforward;
  if (name == "fb") return Architecture::kFeedback;
  throw CLI::ValidationError("--arch", "must be ff or fb");
}

/// Drive dynamics for one architecture at the configured set-point. At the
/// zero set-point this uses the closed forms (symbolic whenever exact);
/// elsewhere it falls back to the numeric block composition.
EmdResponse make_emd(const SystemConfig& cfg, Architecture arch) {
  const bool zero_point = cfg.operating_point.i_d0 == 0.0 &&
                          cfg.operating_point.i_q0 == 0.0 &&
                          cfg.operating_point.omega_m0 == 0.0;
  if (zero_point) {
    if (arch == Architecture::kFeedforward) {
      return ff_closed_form(cfg.motor, cfg.estimates, cfg.delays,
                            cfg.velocity_estimator, cfg.s_hat);
    }
    if (!cfg.pi_gains) throw Error("feedback analysis requires [pi_gains]");
    return fb_closed_form(cfg.motor, cfg.estimates, *cfg.pi_gains, cfg.delays,
                          cfg.velocity_estimator, cfg.s_hat);
  }
  if (arch == Architecture::kFeedback && !cfg.pi_gains) {
    throw Error("feedback analysis requires [pi_gains]");
  }
  return block_compose_frf(arch, cfg.motor, cfg.estimates, cfg.pi_gains,
                           cfg.delays, cfg.velocity_estimator,
                           cfg.make_operating_point(), cfg.grid.make(),
                           cfg.s_hat);
}

/// Rational (Pade-substituted) drive dynamics for pole/time-domain work.
EmdResponse make_emd_pade(const SystemConfig& cfg, Architecture arch) {
  if (arch == Architecture::kFeedforward) {
    return ff_closed_form_pade(cfg.motor, cfg.estimates, cfg.delays,
                               cfg.velocity_estimator, cfg.pade_order,
                               cfg.s_hat);
  }
  if (!cfg.pi_gains) throw Error("feedback analysis requires [pi_gains]");
  return fb_closed_form_pade(cfg.motor, cfg.estimates, *cfg.pi_gains,
                             cfg.delays, cfg.velocity_estimator,
                             cfg.pade_order, cfg.s_hat);
}

enum class Subject { kAt, kAw, kZt, kZr, kZd, kWt, kWr, kWd, kRatio };

const std::map<std::string, Subject> kSubjects = {
    {"A_t", Subject::kAt},  {"A_omega", Subject::kAw}, {"Z_t", Subject::kZt},
    {"Z_r", Subject::kZr},  {"Z_d", Subject::kZd},     {"W_t", Subject::kWt},
    {"W_r", Subject::kWr},  {"W_d", Subject::kWd},     {"ratio", Subject::kRatio}};

Channel subject_channel(const SystemConfig& cfg, Architecture arch,
                        Subject subject, const EmdResponse& emd) {
  switch (subject) {
    case Subject::kAt:
      return emd.a_t;
    case Subject::kAw:
      return emd.a_omega;
    case Subject::kZt:
    case Subject::kZr:
    case Subject::kZd: {
      const Eoltf e = eoltf(cfg.make_mech(), emd);
      if (subject == Subject::kZt) return e.z_t;
      if (subject == Subject::kZr) return e.z_r;
      return e.z_d;
    }
    case Subject::kWt:
    case Subject::kWr:
    case Subject::kWd: {
      const TorqueScaling ts = torque_scaling(cfg.make_mech(), emd);
      if (subject == Subject::kWt) return ts.w_t;
      if (subject == Subject::kWr) return ts.w_r;
      return ts.w_d;
    }
    case Subject::kRatio: {
      const TorqueScaling ts = torque_scaling(cfg.make_mech(), emd);
      const auto wt = ts.w_t.eval;
      const auto at = emd.a_t.eval;
      return Channel::from_eval([wt, at](double w) {
        const std::complex<double> a = at(w);
        if (std::abs(a) == 0.0) {
          throw Error("ratio undefined: A_t vanishes at omega=" +
                      std::to_string(w));
        }
        return wt(w) / a;
      });
    }
  }
  throw Error("unreachable subject");
}

std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f.good()) throw Error("cannot write " + path.string());
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f.good()) throw Error("failed writing " + path.string());
}

std::string margin_value(const std::optional<double>& v) {
  return v ? format_g17(*v) : "none";
}

std::string machine_report(const SteeringMargins& sm) {
  const MarginReport& r = sm.report;
  std::string out;
  out += std::string("architecture=") + architecture_name(sm.architecture) + "\n";
  out += "phase_margin_deg=" +
         (r.phase_margin_deg ? format_g17(*r.phase_margin_deg) : "undefined") + "\n";
  out += "gain_margin_db=" + (std::isinf(r.gain_margin_db)
                                  ? std::string("inf")
                                  : format_g17(r.gain_margin_db)) + "\n";
  out += "gain_crossover_rad_s=" + margin_value(r.gain_crossover_rad_s) + "\n";
  out += "phase_crossover_rad_s=" + margin_value(r.phase_crossover_rad_s) + "\n";
  out += std::string("loop_stable=") + (r.loop_stable() ? "true" : "false") + "\n";
  out += "crossover_count=" + std::to_string(r.all_crossovers.size()) + "\n";
  return out;
}

void print_human_report(const SteeringMargins& sm, std::ostream& os) {
  const MarginReport& r = sm.report;
  os << "Steering loop margins ("
     << (sm.architecture == Architecture::kFeedforward ? "feedforward"
                                                       : "feedback")
     << " torque control)\n";
  if (r.phase_margin_deg) {
    os << "  phase margin : " << *r.phase_margin_deg << " deg at "
       << *r.gain_crossover_rad_s << " rad/s\n";
  } else {
    os << "  phase margin : undefined (no unity-gain crossing in band)\n";
  }
  if (std::isinf(r.gain_margin_db)) {
    os << "  gain margin  : infinite (no -180 deg crossing in band)\n";
  } else {
    os << "  gain margin  : " << r.gain_margin_db << " dB at "
       << *r.phase_crossover_rad_s << " rad/s\n";
  }
  os << "  crossings    : " << r.all_crossovers.size() << "\n";
}

int run_bode(const CommonOpts& opts, const std::string& subject_name,
             const std::string& arch_name) {
  const SystemConfig cfg = load(opts);
  const Architecture arch = parse_arch(arch_name);
  const auto it = kSubjects.find(subject_name);
  if (it == kSubjects.end()) {
    throw CLI::ValidationError("--subject", "unknown subject " + subject_name);
  }
  const EmdResponse emd = make_emd(cfg, arch);
  const Channel ch = subject_channel(cfg, arch, it->second, emd);
  const FrequencyResponse fr = sample(ch.eval, cfg.grid.make());

  std::ostringstream body;
  write_bode_csv(fr, body);
  const auto out = ensure_out_dir(opts.out_dir) /
                   ("bode_" + subject_name + "_" + arch_name + ".csv");
  write_file(out, body.str());
  std::cout << out.string() << "\n";
  return kExitOk;
}

int run_margins(const CommonOpts& opts, const std::string& arch_name) {
  const SystemConfig cfg = load(opts);
  const Architecture arch = parse_arch(arch_name);
  const EmdResponse emd = make_emd(cfg, arch);
  const SteeringMargins sm =
      steering_margins(eoltf(cfg.make_mech(), emd), cfg.assist, cfg.grid.make());
  print_human_report(sm, std::cout);
  std::cout << machine_report(sm);
  return sm.report.loop_stable() ? kExitOk : kExitUnstable;
}

int run_compare(const CommonOpts& opts) {
  const SystemConfig cfg = load(opts);
  if (!cfg.pi_gains) throw Error("compare requires [pi_gains]");
  const FrequencyGrid grid = cfg.grid.make();
  const TwoMassModel mech = cfg.make_mech();

  const EmdResponse ff = make_emd(cfg, Architecture::kFeedforward);
  const EmdResponse fb = make_emd(cfg, Architecture::kFeedback);

  const auto dir = ensure_out_dir(opts.out_dir);

  // Panel (a): motor torque scaling due to mechanical dynamics, per arch.
  for (const EmdResponse* emd : {&ff, &fb}) {
    const FrequencyResponse ratio =
        torque_scaling_ratio(torque_scaling(mech, *emd), *emd, grid);
    std::ostringstream body;
    write_bode_csv(ratio, body);
    write_file(dir / (std::string("compare_ratio_") +
                      architecture_name(emd->architecture) + ".csv"),
               body.str());
  }

  // Panel (b): bare mechanical channel and both effective open loops.
  {
    const Eoltf bare = eoltf(mech, EmdResponse::identity());
    std::ostringstream body;
    write_bode_csv(sample(bare.z_t.eval, grid), body);
    write_file(dir / "compare_mech_bare.csv", body.str());
  }
  const Eoltf e_ff = eoltf(mech, ff);
  const Eoltf e_fb = eoltf(mech, fb);
  {
    std::ostringstream body;
    write_bode_pair_csv(sample(e_ff.z_t.eval, grid), "ff",
                        sample(e_fb.z_t.eval, grid), "fb", body);
    write_file(dir / "compare_eoltf.csv", body.str());
  }

  const SteeringMargins m_ff = steering_margins(e_ff, cfg.assist, grid);
  const SteeringMargins m_fb = steering_margins(e_fb, cfg.assist, grid);
  std::string summary = machine_report(m_ff) + machine_report(m_fb);
  write_file(dir / "compare_margins.txt", summary);

  std::cout << "wrote compare_ratio_ff.csv, compare_ratio_fb.csv, "
               "compare_mech_bare.csv, compare_eoltf.csv, compare_margins.txt to "
            << dir.string() << "\n";
  std::cout << summary;
  return kExitOk;
}

int run_sim(const CommonOpts& opts, const std::string& subject_name,
            const std::string& arch_name, const std::string& excitation,
            double duration) {
  const SystemConfig cfg = load(opts);
  const Architecture arch = parse_arch(arch_name);
  const auto it = kSubjects.find(subject_name);
  if (it == kSubjects.end()) {
    throw CLI::ValidationError("--subject", "unknown subject " + subject_name);
  }

  // Rationalized (delay-free) dynamics so a state-space realization exists.
  const EmdResponse emd_pade = make_emd_pade(cfg, arch);
  const Channel ch = subject_channel(cfg, arch, it->second, emd_pade);
  if (!ch.is_symbolic()) {
    throw Error("subject " + subject_name +
                " has no rational form; cannot simulate");
  }
  // Exact-delay counterpart for the analytic comparison.
  const EmdResponse emd_exact = make_emd(cfg, arch);
  const Channel ch_exact = subject_channel(cfg, arch, it->second, emd_exact);

  const DelayRational& tf = *ch.symbolic;
  const StateSpace ss = to_state_space(tf, cfg.pade_order);
  if (ss.order() > 0 && !ss.is_stable()) {
    std::cerr << "subject is unstable; poles:\n";
    const PoleAnalysis pa = poles_and_stability(tf);
    for (const auto& pole : pa.poles) {
      std::cerr << "  " << format_g17(pole.real()) << " + "
                << format_g17(pole.imag()) << "j\n";
    }
    return kExitUnstable;
  }

  double sine_omega = 0.0;
  std::function<double(double)> u;
  double f_max_hz = 0.0;
  if (excitation == "step") {
    u = [](double) { return 1.0; };
  } else if (excitation.rfind("sine:", 0) == 0) {
    sine_omega = std::stod(excitation.substr(5));
    if (!(sine_omega > 0.0)) throw Error("sine frequency must be > 0 rad/s");
    u = [sine_omega](double t) { return std::sin(sine_omega * t); };
    f_max_hz = sine_omega / (2.0 * 3.14159265358979323846);
  } else {
    throw CLI::ValidationError("--excitation", "expected step or sine:<rad/s>");
  }

  // Step small enough for both the excitation and the fastest pole.
  double rho = 0.0;
  for (const auto& ev : ss.eigenvalues()) rho = std::max(rho, std::abs(ev));
  double h = duration / 2000.0;
  if (rho > 0.0) h = std::min(h, 1.0 / rho);
  if (f_max_hz > 0.0) h = std::min(h, 1.0 / (200.0 * f_max_hz));

  const Trajectory tr = integrate(ss, u, duration, h, f_max_hz);
  std::ostringstream body;
  write_trajectory_csv(tr, body);
  std::string stem = "sim_" + subject_name + "_" + arch_name + "_" +
                     (excitation == "step" ? "step" : "sine");
  const auto out = ensure_out_dir(opts.out_dir) / (stem + ".csv");
  write_file(out, body.str());
  std::cout << out.string() << "\n";

  if (sine_omega > 0.0) {
    // Fit the steady-state cycles and report the deviation from the exact
    // analytic evaluation.
    const double period = 2.0 * 3.14159265358979323846 / sine_omega;
    double s_ss = 0, s_cc = 0, s_sc = 0, s_ys = 0, s_yc = 0;
    const double t_start = std::max(0.0, duration - 5.0 * period);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      if (tr.t[k] < t_start) continue;
      const double sn = std::sin(sine_omega * tr.t[k]);
      const double cs = std::cos(sine_omega * tr.t[k]);
      s_ss += sn * sn;
      s_cc += cs * cs;
      s_sc += sn * cs;
      s_ys += tr.y[k] * sn;
      s_yc += tr.y[k] * cs;
    }
    const double det = s_ss * s_cc - s_sc * s_sc;
    const std::complex<double> fitted{(s_ys * s_cc - s_yc * s_sc) / det,
                                      (s_yc * s_ss - s_ys * s_sc) / det};
    const std::complex<double> analytic = ch_exact(sine_omega);
    const double mag_pct =
        100.0 * std::abs(std::abs(fitted) / std::abs(analytic) - 1.0);
    const double phase_deg =
        std::abs(std::arg(fitted / analytic)) * kRadToDeg;
    std::cout << "frf_delta_mag_pct=" << format_g17(mag_pct) << "\n";
    std::cout << "frf_delta_phase_deg=" << format_g17(phase_deg) << "\n";
  } else {
    std::cout << "final_value=" << format_g17(tr.y.back()) << "\n";
  }
  return kExitOk;
}

int run_validate(const CommonOpts& opts) {
  const SystemConfig cfg = load(opts);
  std::cout << "config ok\n";
  std::cout << "mech_variant="
            << (cfg.mech_variant == MechProvenance::kPaperVerbatim
                    ? "paper"
                    : "first_principles")
            << "\n";
  std::cout << "velocity_variant="
            << (cfg.velocity_estimator.variant == VelocityVariant::kPaper
                    ? "paper"
                    : "physical")
            << "\n";
  std::cout << "pi_gains=" << (cfg.pi_gains ? "present" : "absent") << "\n";
  std::cout << "grid_points=" << cfg.grid.make().size() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-aware transfer-function analysis of electric power "
               "steering electromechanical dynamics"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string subject;
  std::string arch;
  std::string excitation = "step";
  double duration = 1.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "Config file path")->required();
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--grid", opts.grid_spec, "Grid override min:max:ppd");
    cmd->add_option("--pade", opts.pade_override, "Pade order override");
  };

  CLI::App* bode = app.add_subcommand("bode", "Emit Bode CSV for a subject");
  add_common(bode);
  bode->add_option("--subject", subject, "A_t A_omega Z_t Z_r Z_d W_t W_r W_d ratio")
      ->required();
  bode->add_option("--arch", arch, "ff or fb")->required();

  CLI::App* margins = app.add_subcommand("margins", "Steering-loop margins");
  add_common(margins);
  margins->add_option("--arch", arch, "ff or fb")->required();

  CLI::App* compare = app.add_subcommand(
      "compare", "FF-vs-FB comparison bundle (scaling ratios, open loops, margins)");
  add_common(compare);

  CLI::App* sim = app.add_subcommand("sim", "Time-domain simulation of a subject");
  add_common(sim);
  sim->add_option("--subject", subject, "Subject transfer function")->required();
  sim->add_option("--arch", arch, "ff or fb")->required();
  sim->add_option("--excitation", excitation, "step or sine:<rad/s>");
  sim->add_option("--duration", duration, "Simulation horizon, s");

  CLI::App* validate = app.add_subcommand("validate", "Validate a config file");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bode->parsed()) return run_bode(opts, subject, arch);
    if (margins->parsed()) return run_margins(opts, arch);
    if (compare->parsed()) return run_compare(opts);
    if (sim->parsed()) return run_sim(opts, subject, arch, excitation, duration);
    if (validate->parsed()) return run_validate(opts);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigParseError& e) {
    std::cerr << "config parse error at line " << e.line() << ", column "
              << e.column() << ": " << e.what() << "\n";
    return kExitCompute;
  } catch (const ConfigValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitCompute;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitUsage;
}
