// wgment: command-line front end for the entanglement pipeline.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wgm/config.hpp"
#include "wgm/errors.hpp"
#include "wgm/gaussian_state.hpp"
#include "wgm/oracle.hpp"
#include "wgm/pipeline.hpp"
#include "wgm/sweep.hpp"

namespace {

using nlohmann::json;
using namespace wgm;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Globals {
  std::string config_path;
  std::string output_path;
  std::string format;
  std::vector<std::string> overrides;
};

// "min:max:count" or a single value
AxisSpec parse_range(const std::string& name, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  AxisSpec a;
  a.name = name;
  if (parts.size() == 1) {
    a.min = a.max = parse_scalar(parts[0]);
    a.count = 1;
    return a;
  }
  if (parts.size() != 3) throw ValidationError(name, "expected value or min:max:count, got '" + text + "'");
  a.min = parse_scalar(parts[0]);
  a.max = parse_scalar(parts[1]);
  try {
    a.count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ValidationError(name, "count must be an integer, got '" + parts[2] + "'");
  }
  if (a.count < 1) throw ValidationError(name, "count must be >= 1");
  if (a.count == 1 && a.min != a.max) throw ValidationError(name, "a single node needs min == max");
  return a;
}

Config load(const Globals& g) {
  json doc = json::object();
  if (!g.config_path.empty()) doc = load_config_document(g.config_path);
  for (const auto& s : g.overrides) apply_override(doc, s);
  Config cfg = parse_config(doc);
  if (!g.format.empty()) cfg.sweep.format = parse_output_format(g.format);
  return cfg;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ValidationError("output", "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) {
  const std::string s = format_number(v);
  return s.empty() ? "" : s;
}

// key,value tables for single-point reports
struct KeyValues {
  std::vector<std::pair<std::string, json>> items;
  std::vector<std::string> comments;

  void add(std::string key, double v) { items.emplace_back(std::move(key), v); }
  void add_text(std::string key, std::string v) { items.emplace_back(std::move(key), std::move(v)); }

  void write(std::ostream& os, OutputFormat f) const {
    if (f == OutputFormat::json) {
      json doc = json::object();
      for (const auto& [k, v] : items) {
        if (v.is_number_float() && !std::isfinite(v.get<double>())) {
          doc[k] = nullptr;
        } else {
          doc[k] = v;
        }
      }
      if (!comments.empty()) doc["notes"] = comments;
      os << doc.dump(1) << '\n';
      return;
    }
    os << "# tool wgment " << WGMENT_VERSION << '\n';
    for (const auto& c : comments) os << "# " << c << '\n';
    os << "quantity,value\n";
    for (const auto& [k, v] : items) {
      os << k << ',' << (v.is_number() ? num(v.get<double>()) : v.get<std::string>()) << '\n';
    }
  }
};

int cmd_derive(const Globals& g) {
  const Config cfg = load(g);
  const ResolvedPoint p = resolve(cfg);
  const DerivedParams d = derive_constants(p.system, p.drive);
  KeyValues kv;
  kv.add("omega_c", d.omega_c);
  kv.add("omega_l", d.omega_l);
  kv.add("kappa_0", d.kappa_0);
  kv.add("kappa_ex", d.kappa_ex);
  kv.add("Gamma", d.Gamma);
  kv.add("G0", d.G0);
  kv.add("eps_cw", d.eps_cw);
  kv.add("eps_ccw", d.eps_ccw);
  kv.add("n_m", d.n_m);
  kv.add("J", p.system.coupling_J);
  kv.add("detuning", p.drive.detuning);
  kv.add("phase_cw", p.drive.phase_cw);
  kv.add("phase_ccw", p.drive.phase_ccw);
  for (const auto& w : d.warnings) kv.comments.push_back("warning " + w);
  Output out(g.output_path);
  kv.write(out.stream(), cfg.sweep.format);
  return kExitOk;
}

int cmd_steady(const Globals& g) {
  const Config cfg = load(g);
  const ResolvedPoint p = resolve(cfg);
  const DerivedParams d = derive_constants(p.system, p.drive);
  const SteadyState s = solve_steady_state(d, p.system, p.drive, p.solver);
  KeyValues kv;
  kv.add("alpha_cw_re", s.alpha_cw.real());
  kv.add("alpha_cw_im", s.alpha_cw.imag());
  kv.add("alpha_ccw_re", s.alpha_ccw.real());
  kv.add("alpha_ccw_im", s.alpha_ccw.imag());
  kv.add("N_cw", s.photons_cw);
  kv.add("N_ccw", s.photons_ccw);
  kv.add("q_s", s.q_s);
  kv.add("p_s", s.p_s);
  kv.add("delta_eff", s.delta_eff);
  kv.add("delta_eff_ratio", s.delta_eff / p.system.omega_m);
  kv.add("residual", s.residual);
  kv.add("iterations", s.iterations);
  kv.add_text("method", s.used_bisection ? "bisection" : "fixed_point");
  for (const auto& w : d.warnings) kv.comments.push_back("warning " + w);
  for (const auto& w : s.warnings) kv.comments.push_back("warning " + w);
  Output out(g.output_path);
  kv.write(out.stream(), cfg.sweep.format);
  return kExitOk;
}

// Table over optional theta / detuning ranges; a single row without them.
int run_table(const Globals& g, const std::string& theta_range, const std::string& detuning_range,
              std::vector<std::string> outputs, const std::string& name) {
  Config cfg = load(g);
  std::vector<AxisSpec> axes;
  if (!theta_range.empty()) axes.push_back(parse_range("drive.theta", theta_range));
  if (!detuning_range.empty()) axes.push_back(parse_range("drive.detuning_ratio", detuning_range));
  // single-node ranges fix the parameter instead of adding an axis
  std::erase_if(axes, [&](const AxisSpec& a) {
    if (a.count != 1) return false;
    set_parameter(cfg, a.name, a.min);
    return true;
  });
  (void)resolve(cfg);
  SweepSpec spec = spec_from_config(cfg, name);
  spec.axes = std::move(axes);
  spec.outputs = std::move(outputs);
  spec.status_column = false;
  spec.format = cfg.sweep.format;

  SweepResult res;
  int code = kExitOk;
  if (spec.axes.empty()) {
    const ResolvedPoint p = resolve(cfg);
    const PointResult r = evaluate_point(p.system, p.drive, p.solver);
    res.name = name;
    res.columns = column_names(spec);
    res.status_column = false;
    res.rows.push_back({row_values(spec, {}, p, r), r.status});
    res.provenance = {std::string("tool wgment ") + WGMENT_VERSION, "config " + to_json(cfg).dump(),
                      std::string("status ") + std::string(to_string(r.status))};
    if (!r.message.empty()) res.provenance.push_back("message " + r.message);
    if (r.status == PointStatus::no_converge) {
      std::cerr << "wgment: " << r.message << '\n';
      code = kExitNumerical;
    }
  } else {
    res = run_sweep(spec);
  }
  Output out(g.output_path);
  write(out.stream(), res, spec.format);
  return code;
}

QuadraturePair parse_pair(const std::string& s) {
  if (s == "qX" || s == "q_X") return QuadraturePair::q_X;
  if (s == "qY" || s == "q_Y") return QuadraturePair::q_Y;
  if (s == "qp" || s == "q_p") return QuadraturePair::q_p;
  if (s == "XY" || s == "X_Y") return QuadraturePair::X_Y;
  throw ValidationError("pair", "expected qX, qY, qp or XY");
}

int cmd_wigner(const Globals& g, const std::string& pair_name, const std::string& mode_name,
               int grid, double extent) {
  const Config cfg = load(g);
  const QuadraturePair pair = parse_pair(pair_name);
  if (mode_name != "cw" && mode_name != "ccw") throw ValidationError("mode", "expected cw or ccw");
  const Bipartition b = mode_name == "cw" ? Bipartition::cw_mech : Bipartition::ccw_mech;
  if (grid < 0 || grid == 1) throw ValidationError("grid", "must be 0 (ellipse only) or >= 2");
  if (!(extent > 0.0)) throw ValidationError("extent", "must be > 0");

  const ResolvedPoint p = resolve(cfg);
  const PointResult r = evaluate_point(p.system, p.drive, p.solver);
  if (!r.ok()) {
    std::cerr << "wgment: no steady state covariance (" << to_string(r.status) << "): " << r.message << '\n';
    return kExitNumerical;
  }
  const ReducedCM vp = reduce_cm(*r.cm, b);
  const SqueezingEllipse e = wigner_ellipse(vp, pair);
  Output out(g.output_path);
  std::ostream& os = out.stream();

  if (cfg.sweep.format == OutputFormat::json) {
    json doc;
    doc["pair"] = std::string(to_string(pair));
    doc["mode"] = mode_name;
    doc["sub_cm"] = {{e.sub_cm(0, 0), e.sub_cm(0, 1)}, {e.sub_cm(1, 0), e.sub_cm(1, 1)}};
    doc["minor"] = e.minor;
    doc["major"] = e.major;
    doc["angle"] = e.angle;
    doc["squeezed"] = e.squeezed;
    if (grid >= 2) {
      json pts = json::array();
      for (const auto& s : wigner_grid(e.sub_cm, grid, extent)) pts.push_back({s.x, s.y, s.w});
      doc["grid"] = std::move(pts);
    }
    os << doc.dump(1) << '\n';
    return kExitOk;
  }
  os << "# tool wgment " << WGMENT_VERSION << '\n';
  os << "# pair " << to_string(pair) << " mode " << mode_name << '\n';
  os << "# sub_cm " << num(e.sub_cm(0, 0)) << ' ' << num(e.sub_cm(0, 1)) << ' ' << num(e.sub_cm(1, 1)) << '\n';
  os << "# ellipse minor " << num(e.minor) << " major " << num(e.major) << " angle " << num(e.angle)
     << " squeezed " << (e.squeezed ? 1 : 0) << '\n';
  if (grid >= 2) {
    os << "x,y,w\n";
    for (const auto& s : wigner_grid(e.sub_cm, grid, extent)) {
      os << num(s.x) << ',' << num(s.y) << ',' << num(s.w) << '\n';
    }
  } else {
    os << "minor,major,angle,squeezed\n"
       << num(e.minor) << ',' << num(e.major) << ',' << num(e.angle) << ',' << (e.squeezed ? 1 : 0) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const Globals& g, const std::string& scenario_name, bool list, unsigned threads) {
  if (list) {
    Output out(g.output_path);
    for (const auto& n : scenario_names()) out.stream() << n << '\n';
    return kExitOk;
  }
  SweepSpec spec;
  if (!scenario_name.empty()) {
    spec = scenario(scenario_name);
    // config file and --set refine the preset base
    if (!g.config_path.empty() || !g.overrides.empty()) {
      json doc = to_json(spec.base);
      doc.erase("sweep");
      if (!g.config_path.empty()) overlay(doc, load_config_document(g.config_path));
      for (const auto& s : g.overrides) apply_override(doc, s);
      spec.base = parse_config(doc);
    }
    if (!g.format.empty()) spec.format = parse_output_format(g.format);
  } else {
    spec = spec_from_config(load(g));
  }
  SweepOptions opt;
  opt.threads = threads;
  const SweepResult res = run_sweep(spec, opt);
  Output out(g.output_path);
  write(out.stream(), res, spec.format);
  return kExitOk;
}

int cmd_verify(const Globals& g) {
  const Config cfg = load(g);
  const ResolvedPoint p = resolve(cfg);
  const DerivedParams d = derive_constants(p.system, p.drive);
  const SteadyState s = solve_steady_state(d, p.system, p.drive, p.solver);
  const LinearModel m = build_linear_model(s, d, p.system);
  const oracle::ThreeWayReport rep = oracle::verify(m);
  constexpr double kMomentTol = 1e-6;
  constexpr double kIntegralTol = 1e-5;
  const bool pass = rep.moment_vs_lyapunov <= kMomentTol && rep.integral_vs_lyapunov <= kIntegralTol;

  KeyValues kv;
  kv.add("moment_vs_lyapunov", rep.moment_vs_lyapunov);
  kv.add("integral_vs_lyapunov", rep.integral_vs_lyapunov);
  kv.add("moment_vs_integral", rep.moment_vs_integral);
  kv.add("moment_tolerance", kMomentTol);
  kv.add("integral_tolerance", kIntegralTol);
  kv.add("moment_dt", rep.grid.moment_dt);
  kv.add("moment_t_final", rep.grid.moment_t_final);
  kv.add("integral_t_max", rep.grid.integral_t_max);
  kv.add("integral_steps", static_cast<double>(rep.grid.integral_steps));
  kv.add_text("verdict", pass ? "pass" : "fail");
  Output out(g.output_path);
  kv.write(out.stream(), cfg.sweep.format);
  return pass ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optomechanical entanglement in a backscattering WGM resonator"};
  app.set_version_flag("--version", std::string(WGMENT_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--output", g.output_path, "write results here instead of stdout");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", g.overrides, "dotted-path override, e.g. drive.theta=0.6")->take_all();

  auto* derive = app.add_subcommand("derive", "derived constants");
  auto* steady = app.add_subcommand("steady", "classical steady state");

  std::string theta_range, detuning_range;
  auto* stability = app.add_subcommand("stability", "Routh-Hurwitz and eigenvalue stability");
  stability->add_option("--theta", theta_range, "phase difference, value or min:max:count (pi allowed)");
  stability->add_option("--detuning", detuning_range, "detuning ratio, value or min:max:count");

  auto* entangle = app.add_subcommand("entangle", "logarithmic negativity for both bipartitions");
  entangle->add_option("--theta", theta_range, "phase difference, value or min:max:count (pi allowed)");
  entangle->add_option("--detuning", detuning_range, "detuning ratio, value or min:max:count");

  std::string pair = "qX", mode = "cw";
  int grid = 0;
  double extent = 4.0;
  auto* wigner = app.add_subcommand("wigner", "squeezing ellipse and Wigner marginal");
  wigner->add_option("--pair", pair, "qX, qY, qp or XY")->capture_default_str();
  wigner->add_option("--mode", mode, "optical mode of the pair: cw or ccw")->capture_default_str();
  wigner->add_option("--grid", grid, "sample the marginal on an N x N grid (0: ellipse only)");
  wigner->add_option("--extent", extent, "half-width of the sampling window")->capture_default_str();

  std::string scenario_name;
  bool list = false;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "grid sweep from a preset or the config's sweep section");
  sweep->add_option("--scenario", scenario_name, "named preset");
  sweep->add_flag("--list", list, "list presets");
  sweep->add_option("--threads", threads, "worker threads (default: WGMENT_THREADS or all cores)");

  auto* verify = app.add_subcommand("verify", "cross-check the covariance against the brute-force oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (derive->parsed()) return cmd_derive(g);
    if (steady->parsed()) return cmd_steady(g);
    if (stability->parsed()) {
      return run_table(g, theta_range, detuning_range,
                       {"theta", "detuning_ratio", "lambda6", "max_real_part", "stable"}, "stability");
    }
    if (entangle->parsed()) {
      return run_table(g, theta_range, detuning_range,
                       {"theta", "detuning_ratio", "J_over_Gamma", "E_N", "nu_minus", "stable"},
                       "entangle");
    }
    if (wigner->parsed()) return cmd_wigner(g, pair, mode, grid, extent);
    if (sweep->parsed()) return cmd_sweep(g, scenario_name, list, threads);
    if (verify->parsed()) return cmd_verify(g);
  } catch (const ValidationError& e) {
    std::cerr << "wgment: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "wgment: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "wgment: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}
