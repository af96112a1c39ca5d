#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "wgm/params.hpp"

namespace wgm {

struct SteadyStateOptions {
  double tolerance = 1e-10;   // mixed abs/rel residual bound on q_s
  double damping = 0.5;       // fixed-point mixing factor beta
  int max_iterations = 10000;
  int scan_points = 4096;     // bracket samples for the bisection fallback
};

struct SteadyState {
  std::complex<double> alpha_cw;
  std::complex<double> alpha_ccw;
  double q_s = 0.0;
  double p_s = 0.0;  // always zero
  double delta_eff = 0.0;
  double photons_cw = 0.0;
  double photons_ccw = 0.0;

  double residual = 0.0;  // |q_s - G0 (N_cw + N_ccw) / omega_m|
  int iterations = 0;
  bool used_bisection = false;
  std::vector<double> roots;  // all roots found by the bracket scan, if it ran
  std::vector<std::string> warnings;
};

struct CavityAmplitudes {
  std::complex<double> cw;
  std::complex<double> ccw;
};

// Closed-form intracavity amplitudes at a given effective detuning.
CavityAmplitudes cavity_amplitudes(const DerivedParams& derived, const SystemParams& params,
                                   const DriveConfig& drive, double delta_eff);

// f(q) = q - G0 (|alpha_cw(q)|^2 + |alpha_ccw(q)|^2) / omega_m
double self_consistency_residual(const DerivedParams& derived, const SystemParams& params,
                                 const DriveConfig& drive, double q_s);

SteadyState solve_steady_state(const DerivedParams& derived, const SystemParams& params,
                               const DriveConfig& drive, const SteadyStateOptions& options = {});

std::pair<double, double> intracavity_photons(const SteadyState& state) noexcept;

}  // namespace wgm
