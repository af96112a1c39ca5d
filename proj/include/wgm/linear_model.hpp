#pragma once

#include <complex>

#include <Eigen/Core>

#include "wgm/params.hpp"
#include "wgm/steady_state.hpp"

namespace wgm {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

// Quadrature ordering used everywhere: (X_cw, Y_cw, X_ccw, Y_ccw, q, p).
namespace quadrature {
inline constexpr int X_cw = 0;
inline constexpr int Y_cw = 1;
inline constexpr int X_ccw = 2;
inline constexpr int Y_ccw = 3;
inline constexpr int q = 4;
inline constexpr int p = 5;
}  // namespace quadrature

// Scalars that fully determine the drift and diffusion matrices.
struct DriftParameters {
  double Gamma = 0.0;
  double delta_eff = 0.0;
  double J = 0.0;
  double omega_m = 0.0;
  double gamma_m = 0.0;
  double n_m = 0.0;
  std::complex<double> G_cw;   // sqrt(2) G0 alpha_cw
  std::complex<double> G_ccw;  // sqrt(2) G0 alpha_ccw
};

struct LinearModel {
  Matrix6 drift;
  Matrix6 diffusion;  // diagonal
  std::complex<double> G_cw;
  std::complex<double> G_ccw;
  double delta_eff = 0.0;
  double Gamma = 0.0;
  double J = 0.0;
  double omega_m = 0.0;
  double gamma_m = 0.0;
  double n_m = 0.0;
};

LinearModel assemble_linear_model(const DriftParameters& p);

LinearModel build_linear_model(const SteadyState& state, const DerivedParams& derived,
                               const SystemParams& params);

}  // namespace wgm
