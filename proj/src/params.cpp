#include "wgm/params.hpp"

#include <cmath>
#include <sstream>

#include "wgm/constants.hpp"
#include "wgm/errors.hpp"

namespace wgm {

namespace {

void require_positive(const char* field, double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream os;
    os << "must be finite and > 0 (got " << value << ")";
    throw ValidationError(field, os.str());
  }
}

void require_non_negative(const char* field, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    std::ostringstream os;
    os << "must be finite and >= 0 (got " << value << ")";
    throw ValidationError(field, os.str());
  }
}

void require_finite(const char* field, double value) {
  if (!std::isfinite(value)) throw ValidationError(field, "must be finite");
}

}  // namespace

double DriveConfig::phase_difference() const noexcept { return reduce_phase(phase_cw - phase_ccw); }

DriveConfig DriveConfig::with_phase_difference(double power_cw, double power_ccw, double theta,
                                               double detuning) {
  DriveConfig d;
  d.power_cw = power_cw;
  d.power_ccw = power_ccw;
  d.phase_cw = reduce_phase(0.5 * theta);
  d.phase_ccw = reduce_phase(-0.5 * theta);
  d.detuning = detuning;
  return d;
}

double reduce_phase(double angle) noexcept {
  double r = std::fmod(angle, constants::two_pi);
  if (r < 0.0) r += constants::two_pi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi itself;
  if (r >= constants::two_pi || r == 0.0) r = 0.0;  // also folds -0 to +0
  return r;
}

double cavity_frequency(double wavelength) noexcept {
  return constants::two_pi * constants::speed_of_light / wavelength;
}

double thermal_occupation(double omega, double temperature) noexcept {
  if (temperature <= 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double total_optical_decay(const SystemParams& params) {
  require_positive("wavelength", params.wavelength);
  require_positive("quality_c", params.quality_c);
  const double kappa_0 = cavity_frequency(params.wavelength) / params.quality_c;
  if (params.kappa_ex) {
    require_positive("kappa_ex", *params.kappa_ex);
    return kappa_0 + *params.kappa_ex;
  }
  return 2.0 * kappa_0;
}

void validate(const SystemParams& p) {
  require_positive("omega_m", p.omega_m);
  require_positive("gamma_m", p.gamma_m);
  require_non_negative("temperature", p.temperature);
  require_positive("mass", p.mass);
  require_positive("wavelength", p.wavelength);
  require_positive("quality_c", p.quality_c);
  require_positive("radius", p.radius);
  if (p.kappa_ex) require_positive("kappa_ex", *p.kappa_ex);
  require_non_negative("coupling_J", p.coupling_J);
}

void validate(const DriveConfig& d) {
  require_non_negative("power_cw", d.power_cw);
  require_non_negative("power_ccw", d.power_ccw);
  require_finite("phase_cw", d.phase_cw);
  require_finite("phase_ccw", d.phase_ccw);
  require_finite("detuning", d.detuning);
}

DerivedParams derive_constants(const SystemParams& params, const DriveConfig& drive) {
  validate(params);
  validate(drive);

  DerivedParams out;
  out.omega_c = cavity_frequency(params.wavelength);
  out.omega_l = out.omega_c - drive.detuning;
  if (!(out.omega_l > 0.0)) {
    throw ValidationError("detuning", "laser frequency omega_c - Delta_c must be positive");
  }
  out.kappa_0 = out.omega_c / params.quality_c;
  out.kappa_ex = params.kappa_ex.value_or(out.kappa_0);
  out.Gamma = out.kappa_0 + out.kappa_ex;
  out.G0 = (out.omega_c / params.radius) *
           std::sqrt(constants::hbar / (params.mass * params.omega_m));

  const double photon_energy = constants::hbar * out.omega_l;
  out.eps_cw = std::sqrt(2.0 * out.kappa_ex * drive.power_cw / photon_energy);
  out.eps_ccw = std::sqrt(2.0 * out.kappa_ex * drive.power_ccw / photon_energy);
  out.n_m = thermal_occupation(params.omega_m, params.temperature);

  if (params.quality_m() < 100.0) {
    std::ostringstream os;
    os << "mechanical Q = " << params.quality_m()
       << " < 100; the delta-correlated Brownian noise limit is questionable";
    out.warnings.push_back(os.str());
  }
  return out;
}

}  // namespace wgm
