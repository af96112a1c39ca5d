#pragma once

// Shared test helpers: the reference operating point, frozen high-precision
// values, random parameter draws and an independent characteristic
// polynomial expansion.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "wgm/config.hpp"
#include "wgm/linear_model.hpp"
#include "wgm/params.hpp"
#include "wgm/pipeline.hpp"
#include "wgm/stability.hpp"
#include "wgm/steady_state.hpp"

namespace wgm::test {

inline constexpr double kPi = std::numbers::pi;

// Frozen values at the reference point, evaluated independently with 40-digit
// arithmetic (mpmath) from the closed-form expressions.
namespace frozen {
inline constexpr double omega_c = 1215259075683131.1;
inline constexpr double kappa_0 = 18988423.057548924;
inline constexpr double Gamma = 37976846.115097848;
inline constexpr double G0 = 452.00578548522924;
inline constexpr double n_m = 269.65338937077367;
inline constexpr double eps_28mW_ratio04 = 2880487206063.6302;  // detuning ratio 0.4, 28 mW
inline constexpr double D66 = 270153.38937077367;               // gamma_m (2 n_m + 1)
// detuning ratio 0.4, theta = pi/5 split symmetrically, J = Gamma, 28 mW per pump
inline constexpr double q_s = 33966.789546362822;
inline constexpr double alpha_cw_re = 39107.581010383055;
inline constexpr double alpha_cw_im = -50265.061193243216;
inline constexpr double alpha_ccw_re = 16686.585640796291;
inline constexpr double alpha_ccw_im = -19995.678424704985;
inline constexpr double photons_cw = 4055979269.2441584;
inline constexpr double photons_ccw = 678269296.01184138;
inline constexpr double delta_eff = 9846814.6106847993;
}  // namespace frozen

inline SystemParams reference_system(double J_over_Gamma = 1.0) {
  SystemParams p;
  p.omega_m = 6.3e7;
  p.gamma_m = 500.0;
  p.temperature = 0.13;
  p.mass = 1e-11;
  p.wavelength = 1550e-9;
  p.quality_c = 6.4e7;
  p.radius = 1.1e-3;
  p.coupling_J = J_over_Gamma * total_optical_decay(p);
  return p;
}

inline DriveConfig reference_drive(const SystemParams& p, double theta, double detuning_ratio,
                                   double power_cw = 0.028, double power_ccw = 0.028) {
  return DriveConfig::with_phase_difference(power_cw, power_ccw, theta, detuning_ratio * p.omega_m);
}

struct Point {
  SystemParams system;
  DriveConfig drive;
  DerivedParams derived;
  SteadyState steady;
  LinearModel model;
  StabilityReport stability;
};

inline Point solve_point(const SystemParams& sys, const DriveConfig& drive) {
  Point pt;
  pt.system = sys;
  pt.drive = drive;
  pt.derived = derive_constants(sys, drive);
  pt.steady = solve_steady_state(pt.derived, sys, drive);
  pt.model = build_linear_model(pt.steady, pt.derived, sys);
  pt.stability = eigen_stability(pt.model);
  return pt;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

// A parameter point around the reference regime: random detuning, phase,
// backscattering, pump powers, temperature and optical Q.
struct RandomDraw {
  SystemParams system;
  DriveConfig drive;
};

inline RandomDraw draw_point(std::mt19937_64& rng) {
  RandomDraw d;
  d.system = reference_system(0.0);
  d.system.temperature = log_uniform(rng, 0.01, 2.0);
  d.system.quality_c = log_uniform(rng, 5e6, 1e8);
  d.system.coupling_J = uniform(rng, 0.0, 1.5) * total_optical_decay(d.system);
  const double ratio = uniform(rng, -2.0, 2.0);
  const double theta = uniform(rng, 0.0, 2.0 * kPi);
  d.drive = reference_drive(d.system, theta, ratio, uniform(rng, 0.0, 0.028), uniform(rng, 0.0, 0.028));
  return d;
}

// Drift parameters drawn directly, covering both stable and unstable models.
inline DriftParameters draw_drift(std::mt19937_64& rng) {
  DriftParameters p;
  p.omega_m = 6.3e7;
  p.gamma_m = log_uniform(rng, 50.0, 5e4);
  p.Gamma = log_uniform(rng, 1e6, 2e8);
  p.delta_eff = uniform(rng, -2.5, 2.5) * p.omega_m;
  p.J = uniform(rng, 0.0, 1.5) * p.Gamma;
  p.n_m = log_uniform(rng, 1.0, 1e4);
  const double scale = log_uniform(rng, 1e5, 1e8);
  p.G_cw = std::polar(scale * uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 2.0 * kPi));
  p.G_ccw = std::polar(scale * uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 2.0 * kPi));
  return p;
}

// Monic det(eta I - A) via the Faddeev-LeVerrier recursion in long double.
// Returns c[0..6] with c[0] = 1, c[k] the coefficient of eta^(6-k).
inline std::array<long double, 7> faddeev_leverrier(const Matrix6& a) {
  using M = Eigen::Matrix<long double, 6, 6>;
  const M al = a.cast<long double>();
  std::array<long double, 7> c{};
  c[0] = 1.0L;
  M mk = M::Zero();
  for (int k = 1; k <= 6; ++k) {
    mk = al * mk + c[static_cast<std::size_t>(k - 1)] * M::Identity();
    c[static_cast<std::size_t>(k)] = -(al * mk).trace() / static_cast<long double>(k);
  }
  return c;
}

// Relative distance between two coefficients, scaled by the magnitude the
// coefficient would have from the eigenvalue moduli (cancellation-aware).
inline double coefficient_scale(const Matrix6& a, int k) {
  Eigen::EigenSolver<Matrix6> es(a, false);
  std::array<double, 6> mod{};
  for (int i = 0; i < 6; ++i) mod[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
  // elementary symmetric polynomial of the moduli
  std::array<double, 7> e{};
  e[0] = 1.0;
  for (double m : mod) {
    for (int j = 6; j >= 1; --j) e[static_cast<std::size_t>(j)] += m * e[static_cast<std::size_t>(j - 1)];
  }
  return e[static_cast<std::size_t>(k)];
}

}  // namespace wgm::test
