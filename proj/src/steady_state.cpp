#include "wgm/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wgm/errors.hpp"

namespace wgm {

namespace {

using cplx = std::complex<double>;

struct Problem {
  const DerivedParams& derived;
  const SystemParams& params;
  cplx drive_cw;   // eps_cw e^{-i theta_cw}
  cplx drive_ccw;  // eps_ccw e^{-i theta_ccw}

  CavityAmplitudes amplitudes(double delta) const {
    const cplx z{derived.Gamma, delta};  // i Delta + Gamma
    const cplx iJ{0.0, params.coupling_J};
    const cplx den = z * z + params.coupling_J * params.coupling_J;
    return {(drive_cw * z - iJ * drive_ccw) / den, (drive_ccw * z - iJ * drive_cw) / den};
  }

  double delta_at(double q) const { return -derived.G0 * q + detuning; }

  double mapped(double q) const {
    const auto a = amplitudes(delta_at(q));
    return derived.G0 * (std::norm(a.cw) + std::norm(a.ccw)) / params.omega_m;
  }

  double residual(double q) const { return q - mapped(q); }

  double detuning = 0.0;
};

Problem make_problem(const DerivedParams& derived, const SystemParams& params,
                     const DriveConfig& drive) {
  Problem p{derived, params, std::polar(derived.eps_cw, -drive.phase_cw),
            std::polar(derived.eps_ccw, -drive.phase_ccw)};
  p.detuning = drive.detuning;
  return p;
}

double tolerance_for(double q, double tol) { return tol * std::max(1.0, std::abs(q)); }

SteadyState finish(const Problem& p, double q, double residual) {
  SteadyState s;
  s.q_s = q;
  s.p_s = 0.0;
  s.delta_eff = p.delta_at(q);
  const auto a = p.amplitudes(s.delta_eff);
  s.alpha_cw = a.cw;
  s.alpha_ccw = a.ccw;
  s.photons_cw = std::norm(a.cw);
  s.photons_ccw = std::norm(a.ccw);
  s.residual = residual;
  return s;
}

// Refines a sign change of f on [lo, hi] down to floating-point resolution.
double bisect(const Problem& p, double lo, double hi) {
  double f_lo = p.residual(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = p.residual(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(p.residual(lo)) <= std::abs(p.residual(hi)) ? lo : hi;
}

std::vector<double> bracket_roots(const Problem& p, const DerivedParams& d,
                                  const SystemParams& params, int samples) {
  // f(0) <= 0 and f(q) -> +inf as the detuning is pulled away from resonance.
  const double eps2 = std::max(d.eps_cw, d.eps_ccw) * std::max(d.eps_cw, d.eps_ccw);
  double hi = 4.0 * d.G0 * eps2 / (d.Gamma * d.Gamma * params.omega_m);
  if (!(hi > 0.0)) hi = 1.0;
  for (int i = 0; i < 200 && p.residual(hi) <= 0.0; ++i) hi *= 2.0;

  std::vector<double> roots;
  double q_prev = 0.0;
  double f_prev = p.residual(0.0);
  if (f_prev == 0.0) roots.push_back(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double q = hi * static_cast<double>(i) / samples;
    const double f = p.residual(q);
    if (f == 0.0) {
      roots.push_back(q);
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      roots.push_back(bisect(p, q_prev, q));
    }
    q_prev = q;
    f_prev = f;
  }
  return roots;
}

}  // namespace

CavityAmplitudes cavity_amplitudes(const DerivedParams& derived, const SystemParams& params,
                                   const DriveConfig& drive, double delta_eff) {
  return make_problem(derived, params, drive).amplitudes(delta_eff);
}

double self_consistency_residual(const DerivedParams& derived, const SystemParams& params,
                                 const DriveConfig& drive, double q_s) {
  return make_problem(derived, params, drive).residual(q_s);
}

SteadyState solve_steady_state(const DerivedParams& derived, const SystemParams& params,
                               const DriveConfig& drive, const SteadyStateOptions& options) {
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw ValidationError("solver.damping", "must lie in (0, 1]");
  }
  if (options.max_iterations < 1) throw ValidationError("solver.max_iterations", "must be >= 1");
  if (options.scan_points < 2) throw ValidationError("solver.scan_points", "must be >= 2");

  const Problem p = make_problem(derived, params, drive);
  const double beta = options.damping;

  std::vector<double> history;
  history.reserve(64);
  double q = 0.0;
  bool oscillating = false;
  int sign_flips = 0;
  double last_signed = 0.0;
  for (int k = 0; k < options.max_iterations; ++k) {
    const double g = p.mapped(q);
    const double r = q - g;
    history.push_back(std::abs(r));
    if (std::abs(r) <= tolerance_for(q, options.tolerance)) {
      SteadyState s = finish(p, q, std::abs(r));
      s.iterations = k;
      return s;
    }
    if (!std::isfinite(r)) break;
    if (last_signed != 0.0 && (r < 0.0) != (last_signed < 0.0)) ++sign_flips;
    last_signed = r;
    // Stalled: no real progress over the last 50 updates.
    if (k >= 100 && history[k] >= 0.9 * history[k - 50]) {
      oscillating = sign_flips > k / 2;
      break;
    }
    q = (1.0 - beta) * q + beta * g;
  }

  const std::vector<double> roots = bracket_roots(p, derived, params, options.scan_points);
  if (roots.empty()) {
    throw ConvergenceError("steady state: no self-consistent q_s found", std::move(history));
  }
  const double root = roots.front();
  const double r = std::abs(p.residual(root));
  if (!(r <= tolerance_for(root, options.tolerance))) {
    std::ostringstream os;
    os << "steady state: bisection residual " << r << " exceeds tolerance";
    history.push_back(r);
    throw ConvergenceError(os.str(), std::move(history));
  }

  SteadyState s = finish(p, root, r);
  s.iterations = static_cast<int>(history.size());
  s.used_bisection = true;
  s.roots = roots;
  if (oscillating) s.warnings.emplace_back("fixed-point iteration oscillated between branches");
  if (roots.size() > 1) {
    std::ostringstream os;
    os << "multistability: " << roots.size() << " self-consistent roots q_s =";
    for (double x : roots) os << ' ' << x;
    os << "; returning the smallest";
    s.warnings.push_back(os.str());
  }
  return s;
}

std::pair<double, double> intracavity_photons(const SteadyState& state) noexcept {
  return {std::norm(state.alpha_cw), std::norm(state.alpha_ccw)};
}

}  // namespace wgm
