#include "wgm/linear_model.hpp"

#include <cmath>

namespace wgm {

LinearModel assemble_linear_model(const DriftParameters& p) {
  namespace qd = quadrature;
  LinearModel m;
  m.G_cw = p.G_cw;
  m.G_ccw = p.G_ccw;
  m.delta_eff = p.delta_eff;
  m.Gamma = p.Gamma;
  m.J = p.J;
  m.omega_m = p.omega_m;
  m.gamma_m = p.gamma_m;
  m.n_m = p.n_m;

  const double gx_cw = p.G_cw.real(), gy_cw = p.G_cw.imag();
  const double gx_ccw = p.G_ccw.real(), gy_ccw = p.G_ccw.imag();
  const double G = p.Gamma, D = p.delta_eff, J = p.J;

  Matrix6& A = m.drift;
  // clang-format off
  A <<  -G,     D,      0.0,    J,     -gy_cw,    0.0,
        -D,    -G,     -J,      0.0,    gx_cw,    0.0,
         0.0,   J,     -G,      D,     -gy_ccw,   0.0,
        -J,     0.0,   -D,     -G,      gx_ccw,   0.0,
         0.0,   0.0,    0.0,    0.0,    0.0,      p.omega_m,
         gx_cw, gy_cw,  gx_ccw, gy_ccw, -p.omega_m, -p.gamma_m;
  // clang-format on

  m.diffusion.setZero();
  m.diffusion(qd::X_cw, qd::X_cw) = G;
  m.diffusion(qd::Y_cw, qd::Y_cw) = G;
  m.diffusion(qd::X_ccw, qd::X_ccw) = G;
  m.diffusion(qd::Y_ccw, qd::Y_ccw) = G;
  m.diffusion(qd::p, qd::p) = p.gamma_m * (2.0 * p.n_m + 1.0);
  return m;
}

LinearModel build_linear_model(const SteadyState& state, const DerivedParams& derived,
                               const SystemParams& params) {
  const double scale = std::sqrt(2.0) * derived.G0;
  DriftParameters p;
  p.Gamma = derived.Gamma;
  p.delta_eff = state.delta_eff;
  p.J = params.coupling_J;
  p.omega_m = params.omega_m;
  p.gamma_m = params.gamma_m;
  p.n_m = derived.n_m;
  p.G_cw = scale * state.alpha_cw;
  p.G_ccw = scale * state.alpha_ccw;
  return assemble_linear_model(p);
}

}  // namespace wgm
