#include "wgm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "wgm/errors.hpp"

namespace wgm {

CharCoefficients characteristic_coefficients(const LinearModel& m) {
  const double G = m.Gamma, D = m.delta_eff, J = m.J;
  const double w = m.omega_m, g = m.gamma_m;
  const double xc = m.G_cw.real(), yc = m.G_cw.imag();
  const double xa = m.G_ccw.real(), ya = m.G_ccw.imag();

  const double G2 = G * G, G3 = G2 * G, G4 = G2 * G2;
  const double D2 = D * D, D3 = D2 * D, D4 = D2 * D2;
  const double J2 = J * J, J3 = J2 * J, J4 = J2 * J2;
  const double w2 = w * w;
  const double xc2 = xc * xc, yc2 = yc * yc, xa2 = xa * xa, ya2 = ya * ya;

  CharCoefficients a{};
  a[0] = 1.0;
  a[1] = 4 * G + g;
  a[2] = 2 * J2 + 2 * D2 + 4 * g * G + 6 * G2 + w2;
  a[3] = 2 * J2 * g + 2 * g * D2 + 4 * J2 * G + 4 * D2 * G + 6 * g * G2 + 4 * G3 + 4 * G * w2;
  a[4] = J4 - 2 * J2 * D2 + D4 + 4 * J2 * g * G + 4 * g * D2 * G + 2 * J2 * G2 + 2 * D2 * G2 +
         4 * g * G3 - 2 * xc * xa * J * w - 2 * yc * ya * J * w
         - xa2 * D * w - xc2 * D * w - ya2 * D * w - yc2 * D * w + G4 + 6 * G2 * w2 +
         2 * D2 * w2 + 2 * J2 * w2;
  a[5] = J4 * g - 2 * J2 * g * D2 + g * D4 + 2 * J2 * g * G2 - 4 * yc * ya * J * G * w +
         2 * g * D2 * G2 + g * G4 - 4 * xc * xa * J * G * w + 4 * J2 * G * w2
         - 2 * xa2 * D * G * w - 2 * xc2 * D * G * w + 4 * D2 * G * w2 - 2 * ya2 * D * G * w -
         2 * yc2 * D * G * w + 4 * G3 * w2;
  a[6] = -2 * yc * ya * J * G2 * w - xa2 * G2 * D * w - 2 * J2 * D2 * w2 - yc2 * D3 * w -
         2 * xc * xa * J * G2 * w + D4 * w2 + 2 * J2 * w2 * G2
         + 2 * xc * xa * J * D2 * w + 2 * yc * ya * J * D2 * w - ya2 * D3 * w -
         2 * xc * xa * J3 * w - 2 * yc * ya * J3 * w + yc2 * J2 * D * w
         + xa2 * J2 * D * w + xc2 * J2 * D * w + ya2 * J2 * D * w + 2 * D2 * G2 * w2 -
         xa2 * D3 * w - xc2 * D3 * w + w2 * G4
         + J4 * w2 - xc2 * G2 * D * w - ya2 * G2 * D * w - yc2 * G2 * D * w;
  return a;
}

Eigen::MatrixXd hurwitz_matrix(const CharCoefficients& coeffs, int n) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const int k = 2 * i - j;
      if (k >= 0 && k <= degree) H(i - 1, j - 1) = coeffs[static_cast<std::size_t>(k)];
    }
  }
  return H;
}

RouthHurwitzResult routh_hurwitz(const CharCoefficients& coeffs) {
  if (coeffs[0] != 1.0) throw ValidationError("a0", "characteristic polynomial must be monic");
  RouthHurwitzResult out;
  out.stable = true;
  for (int n = 1; n <= 6; ++n) {
    const double det = hurwitz_matrix(coeffs, n).partialPivLu().determinant();
    out.lambdas[static_cast<std::size_t>(n - 1)] = det;
    if (!(det > 0.0)) out.stable = false;
  }
  return out;
}

StabilityReport eigen_stability(const LinearModel& model, double margin_factor) {
  StabilityReport r;
  Eigen::EigenSolver<Matrix6> solver(model.drift, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigen_stability: eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  r.max_real_part = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 6; ++i) {
    r.eigenvalues[static_cast<std::size_t>(i)] = ev(i);
    r.max_real_part = std::max(r.max_real_part, ev(i).real());
  }
  r.margin = margin_factor * model.omega_m;
  r.stable_by_eigen = r.max_real_part < -r.margin;

  r.char_coeffs = characteristic_coefficients(model);
  const RouthHurwitzResult rh = routh_hurwitz(r.char_coeffs);
  r.hurwitz = rh.lambdas;
  r.stable_by_rh = rh.stable;
  return r;
}

}  // namespace wgm
