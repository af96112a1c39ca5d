#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wgm {

// Raw experimental inputs. All rates and frequencies are angular (rad/s).
struct SystemParams {
  double omega_m = 0.0;      // mechanical frequency
  double gamma_m = 0.0;      // mechanical damping
  double temperature = 0.0;  // K
  double mass = 0.0;         // kg
  double wavelength = 0.0;   // m
  double quality_c = 0.0;    // optical Q, omega_c / kappa_0
  double radius = 0.0;       // m
  std::optional<double> kappa_ex;  // fiber coupling; defaults to kappa_0 (critical coupling)
  double coupling_J = 0.0;   // backscattering coupling, absolute

  double quality_m() const noexcept { return omega_m / gamma_m; }
};

struct DriveConfig {
  double power_cw = 0.0;   // W
  double power_ccw = 0.0;  // W
  double phase_cw = 0.0;   // rad, in [0, 2pi)
  double phase_ccw = 0.0;  // rad, in [0, 2pi)
  double detuning = 0.0;   // Delta_c = omega_c - omega_l, rad/s

  // theta = theta_cw - theta_ccw, reduced to [0, 2pi).
  double phase_difference() const noexcept;

  // Splits theta symmetrically: theta_cw = theta/2, theta_ccw = -theta/2.
  static DriveConfig with_phase_difference(double power_cw, double power_ccw, double theta,
                                           double detuning);
};

struct DerivedParams {
  double omega_c = 0.0;   // cavity frequency, 2 pi c / lambda
  double omega_l = 0.0;   // laser frequency, omega_c - Delta_c
  double kappa_0 = 0.0;   // intrinsic decay
  double kappa_ex = 0.0;  // external decay actually used
  double Gamma = 0.0;     // kappa_0 + kappa_ex
  double G0 = 0.0;        // single-photon coupling
  double eps_cw = 0.0;    // |eps_j| = sqrt(2 kappa_ex P_j / (hbar omega_l))
  double eps_ccw = 0.0;
  double n_m = 0.0;       // thermal phonon number
  std::vector<std::string> warnings;
};

// Reduces an angle to [0, 2pi).
double reduce_phase(double angle) noexcept;

double cavity_frequency(double wavelength) noexcept;

// Bose-Einstein occupation; exactly zero at T = 0.
double thermal_occupation(double omega, double temperature) noexcept;

// kappa_0 + kappa_ex, needed to resolve couplings given as J / Gamma.
double total_optical_decay(const SystemParams& params);

void validate(const SystemParams& params);
void validate(const DriveConfig& drive);

DerivedParams derive_constants(const SystemParams& params, const DriveConfig& drive);

}  // namespace wgm
