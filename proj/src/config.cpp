#include "wgm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "wgm/constants.hpp"
#include "wgm/errors.hpp"

namespace wgm {

using nlohmann::json;

namespace {

// Pairs of mutually exclusive keys inside one section. theta displaces both
// phases and vice versa.
struct Alternative {
  std::string_view section;
  std::vector<std::string_view> first;
  std::vector<std::string_view> second;
};

const std::vector<Alternative>& alternatives() {
  static const std::vector<Alternative> alts{
      {"system", {"coupling_J"}, {"J_over_Gamma"}},
      {"drive", {"theta"}, {"phase_cw", "phase_ccw"}},
      {"drive", {"detuning"}, {"detuning_ratio"}},
  };
  return alts;
}

bool contains(const std::vector<std::string_view>& v, std::string_view key) {
  return std::find(v.begin(), v.end(), key) != v.end();
}

void displace(json& section, std::string_view section_name, std::string_view key) {
  for (const auto& alt : alternatives()) {
    if (alt.section != section_name) continue;
    const std::vector<std::string_view>* other = nullptr;
    if (contains(alt.first, key)) other = &alt.second;
    if (contains(alt.second, key)) other = &alt.first;
    if (other == nullptr) continue;
    for (auto k : *other) section.erase(std::string(k));
  }
}

std::string path_of(std::string_view section, std::string_view key) {
  return std::string(section) + "." + std::string(key);
}

void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError(std::string(where), "must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      std::ostringstream os;
      os << "unknown key '" << item.key() << "'; allowed:";
      for (auto a : allowed) os << ' ' << a;
      throw ValidationError(where.empty() ? item.key() : path_of(where, item.key()), os.str());
    }
  }
}

double get_number(const json& obj, std::string_view section, std::string_view key) {
  const json& v = obj.at(std::string(key));
  if (!v.is_number()) throw ValidationError(path_of(section, key), "expected a number");
  return v.get<double>();
}

void read_number(const json& obj, std::string_view section, std::string_view key, double& out) {
  if (obj.contains(std::string(key))) out = get_number(obj, section, key);
}

int read_int(const json& obj, std::string_view section, std::string_view key, int fallback) {
  if (!obj.contains(std::string(key))) return fallback;
  const json& v = obj.at(std::string(key));
  if (!v.is_number_integer()) throw ValidationError(path_of(section, key), "expected an integer");
  return v.get<int>();
}

std::string read_string(const json& obj, std::string_view section, std::string_view key) {
  const json& v = obj.at(std::string(key));
  if (!v.is_string()) throw ValidationError(path_of(section, key), "expected a string");
  return v.get<std::string>();
}

// Reads a group of alternatives: if any key of the group is present, the
// defaults for the whole group are cleared first.
void read_alternatives(const json& obj, std::string_view section,
                       std::initializer_list<std::pair<std::string_view, std::optional<double>*>> group) {
  bool any = false;
  for (const auto& [key, slot] : group) any = any || obj.contains(std::string(key));
  if (!any) return;
  for (const auto& [key, slot] : group) {
    slot->reset();
    if (obj.contains(std::string(key))) *slot = get_number(obj, section, key);
  }
}

void require_exclusive(bool a, bool b, const std::string& field, const std::string& msg) {
  if (a && b) throw ValidationError(field, msg);
}

// Parameter validators name bare fields; prefix them with the config section.
template <class T>
void validate_in(std::string_view section, const T& value) {
  try {
    validate(value);
  } catch (const ValidationError& e) {
    if (e.field().find('.') != std::string::npos) throw;
    const std::string msg = std::string(e.what()).substr(e.field().empty() ? 0 : e.field().size() + 2);
    throw ValidationError(path_of(section, e.field()), msg);
  }
}

void put(json& obj, const char* key, const std::optional<double>& v) {
  if (v) obj[key] = *v;
}

}  // namespace

// Accepts plain numbers and multiples of pi: "0.4", "pi", "2pi", "pi/5", "9pi/5".
double parse_scalar(const std::string& text) {
  const auto pos = text.find("pi");
  if (pos == std::string::npos) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw ValidationError("value", "cannot parse '" + text + "'");
    return v;
  }
  double coef = 1.0;
  if (pos > 0) {
    const std::string head = text.substr(0, pos);
    coef = head == "-" ? -1.0 : parse_scalar(head);
  }
  double den = 1.0;
  const std::string tail = text.substr(pos + 2);
  if (!tail.empty()) {
    if (tail[0] != '/') throw ValidationError("value", "cannot parse '" + text + "'");
    den = parse_scalar(tail.substr(1));
  }
  return coef * std::numbers::pi / den;
}

std::string_view to_string(FrequencyConvention c) noexcept {
  return c == FrequencyConvention::angular ? "angular" : "ordinary";
}

std::string_view to_string(AxisScale s) noexcept {
  return s == AxisScale::linear ? "linear" : "log";
}

std::string_view to_string(OutputFormat f) noexcept {
  return f == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ValidationError("format", "expected csv or json, got '" + std::string(s) + "'");
}

double AxisSpec::value(int i) const {
  if (i == 0) return min;
  if (i == count - 1) return max;
  const double f = static_cast<double>(i) / static_cast<double>(count - 1);
  if (scale == AxisScale::log) return std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
  return min + f * (max - min);
}

Config default_config() { return Config{}; }

Config parse_config(const json& doc) {
  check_keys(doc, "", {"system", "drive", "solver", "sweep"});
  Config cfg = default_config();

  if (doc.contains("system")) {
    const json& s = doc.at("system");
    check_keys(s, "system",
               {"omega_m", "gamma_m", "temperature", "mass", "wavelength", "quality_c", "radius",
                "kappa_ex", "coupling_J", "J_over_Gamma", "frequency_convention"});
    auto& sys = cfg.system;
    read_number(s, "system", "omega_m", sys.omega_m);
    read_number(s, "system", "gamma_m", sys.gamma_m);
    read_number(s, "system", "temperature", sys.temperature);
    read_number(s, "system", "mass", sys.mass);
    read_number(s, "system", "wavelength", sys.wavelength);
    read_number(s, "system", "quality_c", sys.quality_c);
    read_number(s, "system", "radius", sys.radius);
    if (s.contains("kappa_ex")) {
      if (s.at("kappa_ex").is_null()) {
        sys.kappa_ex.reset();
      } else {
        sys.kappa_ex = get_number(s, "system", "kappa_ex");
      }
    }
    require_exclusive(s.contains("coupling_J"), s.contains("J_over_Gamma"), "system.coupling_J",
                      "give either coupling_J or J_over_Gamma, not both");
    read_alternatives(s, "system", {{"coupling_J", &sys.coupling_J}, {"J_over_Gamma", &sys.J_over_Gamma}});
    if (s.contains("frequency_convention")) {
      const auto c = read_string(s, "system", "frequency_convention");
      if (c == "angular") {
        sys.convention = FrequencyConvention::angular;
      } else if (c == "ordinary") {
        sys.convention = FrequencyConvention::ordinary;
      } else {
        throw ValidationError("system.frequency_convention", "expected angular or ordinary");
      }
    }
  }

  if (doc.contains("drive")) {
    const json& d = doc.at("drive");
    check_keys(d, "drive",
               {"power_cw", "power_ccw", "theta", "phase_cw", "phase_ccw", "detuning",
                "detuning_ratio"});
    auto& drv = cfg.drive;
    read_number(d, "drive", "power_cw", drv.power_cw);
    read_number(d, "drive", "power_ccw", drv.power_ccw);
    require_exclusive(d.contains("theta"), d.contains("phase_cw") || d.contains("phase_ccw"),
                      "drive.theta", "give either theta or phase_cw/phase_ccw, not both");
    read_alternatives(d, "drive",
                      {{"theta", &drv.theta}, {"phase_cw", &drv.phase_cw}, {"phase_ccw", &drv.phase_ccw}});
    require_exclusive(d.contains("detuning"), d.contains("detuning_ratio"), "drive.detuning",
                      "give either detuning or detuning_ratio, not both");
    read_alternatives(d, "drive",
                      {{"detuning", &drv.detuning}, {"detuning_ratio", &drv.detuning_ratio}});
  }

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    check_keys(s, "solver", {"tolerance", "damping", "max_iterations", "scan_points"});
    auto& o = cfg.solver;
    read_number(s, "solver", "tolerance", o.tolerance);
    read_number(s, "solver", "damping", o.damping);
    o.max_iterations = read_int(s, "solver", "max_iterations", o.max_iterations);
    o.scan_points = read_int(s, "solver", "scan_points", o.scan_points);
    if (!(o.tolerance > 0.0)) throw ValidationError("solver.tolerance", "must be > 0");
    if (!(o.damping > 0.0 && o.damping <= 1.0)) {
      throw ValidationError("solver.damping", "must lie in (0, 1]");
    }
    if (o.max_iterations < 1) throw ValidationError("solver.max_iterations", "must be >= 1");
    if (o.scan_points < 16) throw ValidationError("solver.scan_points", "must be >= 16");
  }

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    check_keys(s, "sweep", {"axes", "outputs", "format", "max_points"});
    auto& sw = cfg.sweep;
    if (s.contains("axes")) {
      const json& axes = s.at("axes");
      if (!axes.is_array()) throw ValidationError("sweep.axes", "expected an array");
      sw.axes.clear();
      for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string where = "sweep.axes[" + std::to_string(i) + "]";
        const json& a = axes[i];
        check_keys(a, where, {"name", "min", "max", "count", "scale"});
        if (!a.contains("name") || !a.contains("min") || !a.contains("max") || !a.contains("count")) {
          throw ValidationError(where, "axis needs name, min, max and count");
        }
        AxisSpec ax;
        ax.name = read_string(a, where, "name");
        ax.min = get_number(a, where, "min");
        ax.max = get_number(a, where, "max");
        ax.count = read_int(a, where, "count", 0);
        if (a.contains("scale")) {
          const auto sc = read_string(a, where, "scale");
          if (sc == "linear") {
            ax.scale = AxisScale::linear;
          } else if (sc == "log") {
            ax.scale = AxisScale::log;
          } else {
            throw ValidationError(where + ".scale", "expected linear or log");
          }
        }
        sw.axes.push_back(ax);
      }
    }
    if (s.contains("outputs")) {
      const json& o = s.at("outputs");
      if (!o.is_array()) throw ValidationError("sweep.outputs", "expected an array of names");
      sw.outputs.clear();
      for (const auto& v : o) {
        if (!v.is_string()) throw ValidationError("sweep.outputs", "expected strings");
        sw.outputs.push_back(v.get<std::string>());
      }
    }
    if (s.contains("format")) sw.format = parse_output_format(read_string(s, "sweep", "format"));
    if (s.contains("max_points")) {
      const json& v = s.at("max_points");
      if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
        throw ValidationError("sweep.max_points", "expected a positive integer");
      }
      sw.max_points = v.get<std::size_t>();
    }
  }

  // Validate by resolving once; errors name the offending field.
  (void)resolve(cfg);
  return cfg;
}

json to_json(const Config& cfg) {
  json doc;
  json& s = doc["system"];
  s["omega_m"] = cfg.system.omega_m;
  s["gamma_m"] = cfg.system.gamma_m;
  s["temperature"] = cfg.system.temperature;
  s["mass"] = cfg.system.mass;
  s["wavelength"] = cfg.system.wavelength;
  s["quality_c"] = cfg.system.quality_c;
  s["radius"] = cfg.system.radius;
  put(s, "kappa_ex", cfg.system.kappa_ex);
  put(s, "coupling_J", cfg.system.coupling_J);
  put(s, "J_over_Gamma", cfg.system.J_over_Gamma);
  s["frequency_convention"] = std::string(to_string(cfg.system.convention));

  json& d = doc["drive"];
  d["power_cw"] = cfg.drive.power_cw;
  d["power_ccw"] = cfg.drive.power_ccw;
  put(d, "theta", cfg.drive.theta);
  put(d, "phase_cw", cfg.drive.phase_cw);
  put(d, "phase_ccw", cfg.drive.phase_ccw);
  put(d, "detuning", cfg.drive.detuning);
  put(d, "detuning_ratio", cfg.drive.detuning_ratio);

  json& o = doc["solver"];
  o["tolerance"] = cfg.solver.tolerance;
  o["damping"] = cfg.solver.damping;
  o["max_iterations"] = cfg.solver.max_iterations;
  o["scan_points"] = cfg.solver.scan_points;

  json& w = doc["sweep"];
  w["axes"] = json::array();
  for (const auto& a : cfg.sweep.axes) {
    w["axes"].push_back({{"name", a.name},
                         {"min", a.min},
                         {"max", a.max},
                         {"count", a.count},
                         {"scale", std::string(to_string(a.scale))}});
  }
  w["outputs"] = cfg.sweep.outputs;
  w["format"] = std::string(to_string(cfg.sweep.format));
  w["max_points"] = cfg.sweep.max_points;
  return doc;
}

json load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void overlay(json& base, const json& patch) {
  if (!patch.is_object()) throw ValidationError("config", "overlay must be a JSON object");
  if (!base.is_object()) base = json::object();
  for (const auto& item : patch.items()) {
    json& section = base[item.key()];
    if (item.value().is_object() && (section.is_object() || section.is_null())) {
      if (section.is_null()) section = json::object();
      for (const auto& kv : item.value().items()) {
        displace(section, item.key(), kv.key());
        section[kv.key()] = kv.value();
      }
    } else {
      section = item.value();
    }
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("--set", "expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    try {
      value = parse_scalar(text);
    } catch (const ValidationError&) {
      value = text;
    }
  }
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    json patch;
    patch[path] = value;
    overlay(doc, patch);
    return;
  }
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  if (key.empty() || key.find('.') != std::string::npos) {
    throw ValidationError(path, "override paths have the form section.key");
  }
  json patch;
  patch[section][key] = value;
  overlay(doc, patch);
}

ResolvedPoint resolve(const Config& cfg) {
  const auto& s = cfg.system;
  const double scale = s.convention == FrequencyConvention::ordinary ? constants::two_pi : 1.0;

  if (s.coupling_J.has_value() == s.J_over_Gamma.has_value()) {
    throw ValidationError("system.coupling_J", "exactly one of coupling_J and J_over_Gamma is needed");
  }
  const auto& d = cfg.drive;
  if (d.detuning.has_value() == d.detuning_ratio.has_value()) {
    throw ValidationError("drive.detuning", "exactly one of detuning and detuning_ratio is needed");
  }
  if (d.theta && (d.phase_cw || d.phase_ccw)) {
    throw ValidationError("drive.theta", "give either theta or phase_cw/phase_ccw, not both");
  }

  ResolvedPoint r;
  r.solver = cfg.solver;
  SystemParams& p = r.system;
  p.omega_m = s.omega_m * scale;
  p.gamma_m = s.gamma_m * scale;
  p.temperature = s.temperature;
  p.mass = s.mass;
  p.wavelength = s.wavelength;
  p.quality_c = s.quality_c;
  p.radius = s.radius;
  if (s.kappa_ex) p.kappa_ex = *s.kappa_ex * scale;
  p.coupling_J = 0.0;
  validate_in("system", p);
  if (s.coupling_J) {
    p.coupling_J = *s.coupling_J * scale;
  } else {
    if (!std::isfinite(*s.J_over_Gamma)) {
      throw ValidationError("system.J_over_Gamma", "must be finite");
    }
    p.coupling_J = *s.J_over_Gamma * total_optical_decay(p);
  }
  validate_in("system", p);

  const double detuning = d.detuning ? *d.detuning * scale : *d.detuning_ratio * p.omega_m;
  if (d.theta) {
    if (!std::isfinite(*d.theta)) throw ValidationError("drive.theta", "must be finite");
    r.drive = DriveConfig::with_phase_difference(d.power_cw, d.power_ccw, *d.theta, detuning);
  } else {
    const double pc = d.phase_cw.value_or(0.0);
    const double pcc = d.phase_ccw.value_or(0.0);
    if (!std::isfinite(pc)) throw ValidationError("drive.phase_cw", "must be finite");
    if (!std::isfinite(pcc)) throw ValidationError("drive.phase_ccw", "must be finite");
    r.drive.power_cw = d.power_cw;
    r.drive.power_ccw = d.power_ccw;
    r.drive.phase_cw = reduce_phase(pc);
    r.drive.phase_ccw = reduce_phase(pcc);
    r.drive.detuning = detuning;
  }
  validate_in("drive", r.drive);
  return r;
}

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names{
      "system.omega_m",   "system.gamma_m",     "system.temperature", "system.mass",
      "system.wavelength", "system.quality_c",  "system.radius",      "system.kappa_ex",
      "system.coupling_J", "system.J_over_Gamma", "drive.power",      "drive.power_cw",
      "drive.power_ccw",  "drive.theta",        "drive.phase_cw",     "drive.phase_ccw",
      "drive.detuning",   "drive.detuning_ratio",
  };
  return names;
}

bool is_parameter_name(std::string_view name) {
  const auto& n = parameter_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

void set_parameter(Config& cfg, std::string_view name, double value) {
  auto& s = cfg.system;
  auto& d = cfg.drive;
  if (name == "system.omega_m") {
    s.omega_m = value;
  } else if (name == "system.gamma_m") {
    s.gamma_m = value;
  } else if (name == "system.temperature") {
    s.temperature = value;
  } else if (name == "system.mass") {
    s.mass = value;
  } else if (name == "system.wavelength") {
    s.wavelength = value;
  } else if (name == "system.quality_c") {
    s.quality_c = value;
  } else if (name == "system.radius") {
    s.radius = value;
  } else if (name == "system.kappa_ex") {
    s.kappa_ex = value;
  } else if (name == "system.coupling_J") {
    s.coupling_J = value;
    s.J_over_Gamma.reset();
  } else if (name == "system.J_over_Gamma") {
    s.J_over_Gamma = value;
    s.coupling_J.reset();
  } else if (name == "drive.power") {
    // both pumps at the same power; a pump that is off stays off
    if (d.power_cw > 0.0 || d.power_ccw == 0.0) d.power_cw = value;
    if (d.power_ccw > 0.0) d.power_ccw = value;
  } else if (name == "drive.power_cw") {
    d.power_cw = value;
  } else if (name == "drive.power_ccw") {
    d.power_ccw = value;
  } else if (name == "drive.theta") {
    d.theta = value;
    d.phase_cw.reset();
    d.phase_ccw.reset();
  } else if (name == "drive.phase_cw" || name == "drive.phase_ccw") {
    if (d.theta) {
      // keep the other phase where theta put it
      const double half = 0.5 * *d.theta;
      d.phase_cw = half;
      d.phase_ccw = -half;
      d.theta.reset();
    }
    (name == "drive.phase_cw" ? d.phase_cw : d.phase_ccw) = value;
  } else if (name == "drive.detuning") {
    d.detuning = value;
    d.detuning_ratio.reset();
  } else if (name == "drive.detuning_ratio") {
    d.detuning_ratio = value;
    d.detuning.reset();
  } else {
    throw ValidationError(std::string(name), "not a recognized parameter path");
  }
}

}  // namespace wgm
