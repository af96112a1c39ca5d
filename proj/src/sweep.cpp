#include "wgm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "wgm/constants.hpp"
#include "wgm/errors.hpp"

namespace wgm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string>& ellipse_outputs() {
  static const std::vector<std::string> v{"ellipse_qX", "ellipse_qY", "ellipse_qp", "ellipse_XY"};
  return v;
}

QuadraturePair pair_of(std::string_view output) {
  if (output == "ellipse_qX") return QuadraturePair::q_X;
  if (output == "ellipse_qY") return QuadraturePair::q_Y;
  if (output == "ellipse_qp") return QuadraturePair::q_p;
  return QuadraturePair::X_Y;
}

std::string short_name(std::string_view path) {
  const auto dot = path.rfind('.');
  return std::string(dot == std::string_view::npos ? path : path.substr(dot + 1));
}

// Columns produced by one output name, in order.
std::vector<std::string> expand(std::string_view out) {
  if (out == "E_N") return {"E_N_cw", "E_N_ccw"};
  if (out == "nu_minus") return {"nu_minus_cw", "nu_minus_ccw"};
  if (out == "photons") return {"N_cw", "N_ccw"};
  if (out == "hurwitz") return {"lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6"};
  if (std::find(ellipse_outputs().begin(), ellipse_outputs().end(), out) != ellipse_outputs().end()) {
    const std::string stem(out.substr(std::string_view("ellipse_").size()));
    std::vector<std::string> cols;
    for (const char* b : {"cw", "ccw"}) {
      for (const char* f : {"minor", "major", "angle", "squeezed"}) {
        cols.push_back(stem + "_" + b + "_" + f);
      }
    }
    return cols;
  }
  return {std::string(out)};
}

std::vector<std::size_t> axis_strides(const SweepSpec& spec) {
  std::vector<std::size_t> strides(spec.axes.size(), 1);
  for (std::size_t i = spec.axes.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * static_cast<std::size_t>(spec.axes[i].count);
  }
  return strides;
}

std::vector<double> node_coords(const SweepSpec& spec, std::size_t index) {
  const auto strides = axis_strides(spec);
  std::vector<double> c(spec.axes.size());
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    const auto i = static_cast<int>((index / strides[a]) % static_cast<std::size_t>(spec.axes[a].count));
    c[a] = spec.axes[a].value(i);
  }
  return c;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

void append_ellipses(std::vector<double>& out, const PointResult& r, QuadraturePair pair) {
  for (Bipartition b : {Bipartition::cw_mech, Bipartition::ccw_mech}) {
    if (!r.ok()) {
      out.insert(out.end(), {kNaN, kNaN, kNaN, kNaN});
      continue;
    }
    try {
      const SqueezingEllipse e = wigner_ellipse(reduce_cm(*r.cm, b), pair);
      out.insert(out.end(), {e.minor, e.major, e.angle, flag(e.squeezed)});
    } catch (const NumericalError&) {
      out.insert(out.end(), {kNaN, kNaN, kNaN, kNaN});
    }
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> make_provenance(const SweepSpec& spec, const SweepResult& res,
                                         bool timestamp, unsigned threads) {
  std::vector<std::string> p;
  p.push_back(std::string("tool wgment ") + WGMENT_VERSION);
  if (timestamp) p.push_back("generated " + utc_timestamp());
  p.push_back("scenario " + spec.name);
  p.push_back(std::string("conventions frequencies ") + std::string(to_string(spec.base.system.convention)) +
              (spec.base.system.convention == FrequencyConvention::angular
                   ? " (values in rad/s as given)"
                   : " (values in Hz, multiplied by 2pi)"));
  p.push_back(std::string("conventions kappa_ex ") +
              (spec.base.system.kappa_ex ? "explicit" : "critical coupling (kappa_ex = kappa_0)"));
  p.push_back("conventions pump powers are per pump (each pump carries its full power_cw / power_ccw)");
  p.push_back("conventions phases split symmetrically: phase_cw = theta/2, phase_ccw = -theta/2");
  for (const auto& a : spec.axes) {
    std::ostringstream os;
    os << "axis " << a.name << ' ' << to_string(a.scale) << " [" << format_number(a.min) << ", "
       << format_number(a.max) << "] count " << a.count;
    p.push_back(os.str());
  }
  for (const auto& n : spec.notes) p.push_back("note " + n);
  Config resolved = spec.base;
  resolved.sweep.axes = spec.axes;
  resolved.sweep.outputs = spec.outputs;
  resolved.sweep.format = spec.format;
  resolved.sweep.max_points = spec.max_points;
  p.push_back("config " + to_json(resolved).dump());
  {
    std::ostringstream os;
    os << "points " << res.rows.size() << " ok " << res.ok << " unstable " << res.unstable
       << " no_converge " << res.no_converge;
    p.push_back(os.str());
  }
  p.push_back("threads " + std::to_string(threads) + " simd " +
              std::string(simd::to_string(simd::active().isa)));
  return p;
}

}  // namespace

SweepSpec spec_from_config(const Config& cfg, std::string name) {
  SweepSpec s;
  s.name = std::move(name);
  s.base = cfg;
  s.axes = cfg.sweep.axes;
  s.outputs = cfg.sweep.outputs;
  s.format = cfg.sweep.format;
  s.max_points = cfg.sweep.max_points;
  return s;
}

const std::vector<std::string>& output_names() {
  static const std::vector<std::string> names{
      "E_N",        "E_N_cw",     "E_N_ccw",    "nu_minus",       "photons",
      "q_s",        "delta_eff",  "lambda6",    "hurwitz",        "max_real_part",
      "stable",     "ellipse_qX", "ellipse_qY", "ellipse_qp",     "ellipse_XY",
      "theta",      "detuning_ratio", "J_over_Gamma",
  };
  return names;
}

std::vector<std::string> column_names(const SweepSpec& spec) {
  std::vector<std::string> cols;
  for (const auto& a : spec.axes) cols.push_back(short_name(a.name));
  for (const auto& o : spec.outputs) {
    for (auto& c : expand(o)) {
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(std::move(c));
    }
  }
  return cols;
}

std::size_t point_count(const SweepSpec& spec) {
  std::size_t n = 1;
  for (const auto& a : spec.axes) n *= static_cast<std::size_t>(std::max(a.count, 0));
  return n;
}

void validate(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw ValidationError("sweep.axes", "a sweep needs one or two axes");
  }
  double budget = 1.0;
  for (std::size_t i = 0; i < spec.axes.size(); ++i) {
    const auto& a = spec.axes[i];
    const std::string where = "sweep.axes[" + std::to_string(i) + "]";
    if (!is_parameter_name(a.name)) {
      std::string names;
      for (const auto& n : parameter_names()) names += " " + n;
      throw ValidationError(where + ".name", "unknown parameter '" + a.name + "'; known:" + names);
    }
    if (a.count < 2) throw ValidationError(where + ".count", "must be >= 2");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw ValidationError(where, "min and max must be finite");
    }
    if (a.scale == AxisScale::log && !(a.min > 0.0 && a.max > 0.0)) {
      throw ValidationError(where + ".scale", "log axes need min, max > 0");
    }
    budget *= static_cast<double>(a.count);
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) {
    throw ValidationError("sweep.axes", "the two axes sweep the same parameter");
  }
  if (budget > static_cast<double>(spec.max_points)) {
    std::ostringstream os;
    os << "grid has " << budget << " points, budget is " << spec.max_points;
    throw ValidationError("sweep.max_points", os.str());
  }
  if (spec.outputs.empty()) throw ValidationError("sweep.outputs", "no outputs requested");
  for (const auto& o : spec.outputs) {
    if (std::find(output_names().begin(), output_names().end(), o) == output_names().end()) {
      std::string names;
      for (const auto& n : output_names()) names += " " + n;
      throw ValidationError("sweep.outputs", "unknown output '" + o + "'; known:" + names);
    }
  }
  // Corners of the grid must resolve; interior points then do as well since
  // every bound is monotone along an axis.
  const std::size_t n0 = static_cast<std::size_t>(spec.axes[0].count);
  const std::size_t n1 = spec.axes.size() == 2 ? static_cast<std::size_t>(spec.axes[1].count) : 1;
  for (std::size_t i : {std::size_t{0}, n0 - 1}) {
    for (std::size_t j : {std::size_t{0}, n1 - 1}) {
      const Config c = node_config(spec, i * n1 + j);
      const ResolvedPoint p = resolve(c);
      (void)derive_constants(p.system, p.drive);
    }
  }
}

Config node_config(const SweepSpec& spec, std::size_t index) {
  Config c = spec.base;
  const auto coords = node_coords(spec, index);
  for (std::size_t a = 0; a < spec.axes.size(); ++a) set_parameter(c, spec.axes[a].name, coords[a]);
  return c;
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WGMENT_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096) {
      throw ValidationError("WGMENT_THREADS", "expected a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> row_values(const SweepSpec& spec, const std::vector<double>& coords,
                               const ResolvedPoint& point, const PointResult& r) {
  std::vector<double> v(coords);
  std::vector<std::string> seen;
  for (const auto& a : spec.axes) seen.push_back(short_name(a.name));
  const bool have_stab = r.stability.has_value();

  for (const auto& o : spec.outputs) {
    const auto cols = expand(o);
    // skip outputs fully covered by axis columns or earlier outputs
    bool fresh = false;
    for (const auto& c : cols) fresh = fresh || std::find(seen.begin(), seen.end(), c) == seen.end();
    if (!fresh) continue;
    seen.insert(seen.end(), cols.begin(), cols.end());

    if (o == "E_N") {
      v.insert(v.end(), {r.cw.E_N, r.ccw.E_N});
    } else if (o == "E_N_cw") {
      v.push_back(r.cw.E_N);
    } else if (o == "E_N_ccw") {
      v.push_back(r.ccw.E_N);
    } else if (o == "nu_minus") {
      v.insert(v.end(), {r.cw.nu_minus, r.ccw.nu_minus});
    } else if (o == "photons") {
      if (r.steady) {
        v.insert(v.end(), {r.steady->photons_cw, r.steady->photons_ccw});
      } else {
        v.insert(v.end(), {kNaN, kNaN});
      }
    } else if (o == "q_s") {
      v.push_back(r.steady ? r.steady->q_s : kNaN);
    } else if (o == "delta_eff") {
      v.push_back(r.steady ? r.steady->delta_eff : kNaN);
    } else if (o == "lambda6") {
      v.push_back(have_stab ? r.stability->hurwitz[5] : kNaN);
    } else if (o == "hurwitz") {
      for (int i = 0; i < 6; ++i) v.push_back(have_stab ? r.stability->hurwitz[static_cast<std::size_t>(i)] : kNaN);
    } else if (o == "max_real_part") {
      v.push_back(have_stab ? r.stability->max_real_part : kNaN);
    } else if (o == "stable") {
      v.push_back(have_stab ? flag(r.stability->stable_by_eigen) : kNaN);
    } else if (o == "theta") {
      v.push_back(point.drive.phase_difference());
    } else if (o == "detuning_ratio") {
      v.push_back(point.drive.detuning / point.system.omega_m);
    } else if (o == "J_over_Gamma") {
      v.push_back(point.system.coupling_J / r.derived.Gamma);
    } else {
      append_ellipses(v, r, pair_of(o));
    }
  }
  return v;
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  validate(spec);
  const unsigned threads = resolve_thread_count(options.threads);
  const std::size_t n = point_count(spec);
  const simd::KernelTable& kernels = simd::active();

  SweepResult res;
  res.name = spec.name;
  res.columns = column_names(spec);
  res.status_column = spec.status_column;
  res.rows.resize(n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        const auto coords = node_coords(spec, i);
        const Config c = node_config(spec, i);
        const ResolvedPoint p = resolve(c);
        PointResult r;
        try {
          r = evaluate_point(p.system, p.drive, p.solver, kernels);
        } catch (const ValidationError& e) {
          // corners were validated; an interior point should not get here
          r.status = PointStatus::no_converge;
          r.message = e.what();
          r.cw = r.ccw = {kNaN, kNaN, kNaN};
        }
        res.rows[i].values = row_values(spec, coords, p, r);
        res.rows[i].status = r.status;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };

  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (used <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned t = 0; t < used; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& row : res.rows) {
    switch (row.status) {
      case PointStatus::ok: ++res.ok; break;
      case PointStatus::unstable: ++res.unstable; break;
      case PointStatus::no_converge: ++res.no_converge; break;
    }
  }
  res.provenance = make_provenance(spec, res, options.timestamp, used);
  return res;
}

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

void write_csv(std::ostream& os, const SweepResult& result) {
  for (const auto& line : result.provenance) os << "# " << line << '\n';
  for (std::size_t i = 0; i < result.columns.size(); ++i) os << (i ? "," : "") << result.columns[i];
  if (result.status_column) os << ",status";
  os << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) os << (i ? "," : "") << format_number(row.values[i]);
    if (result.status_column) os << ',' << to_string(row.status);
    os << '\n';
  }
}

void write_json(std::ostream& os, const SweepResult& result) {
  nlohmann::json doc;
  doc["provenance"] = result.provenance;
  std::vector<std::string> cols = result.columns;
  if (result.status_column) cols.emplace_back("status");
  doc["columns"] = cols;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row.values) {
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(nullptr);
      }
    }
    if (result.status_column) r.push_back(std::string(to_string(row.status)));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(1) << '\n';
}

void write(std::ostream& os, const SweepResult& result, OutputFormat format) {
  if (format == OutputFormat::json) {
    write_json(os, result);
  } else {
    write_csv(os, result);
  }
}

}  // namespace wgm
