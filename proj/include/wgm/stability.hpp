#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "wgm/linear_model.hpp"

namespace wgm {

// a_0 ... a_6 of the monic characteristic polynomial det(eta I - A).
using CharCoefficients = std::array<double, 7>;
// Lambda_1 ... Lambda_6.
using HurwitzDeterminants = std::array<double, 6>;

struct RouthHurwitzResult {
  HurwitzDeterminants lambdas{};
  bool stable = false;  // every Lambda_n > 0
};

struct StabilityReport {
  std::array<std::complex<double>, 6> eigenvalues{};
  double max_real_part = 0.0;
  double margin = 0.0;  // neutral-stability band used for stable_by_eigen
  CharCoefficients char_coeffs{};
  HurwitzDeterminants hurwitz{};
  bool stable_by_eigen = false;
  bool stable_by_rh = false;
};

// Default neutral-stability band, relative to omega_m.
inline constexpr double kStabilityMarginFactor = 1e-6;

// Closed-form coefficients of det(eta I - A), expanded term by term.
CharCoefficients characteristic_coefficients(const LinearModel& model);

// n x n Hurwitz matrix with entries a_{2i-j} (1-based), a_k = 0 outside 0..6.
Eigen::MatrixXd hurwitz_matrix(const CharCoefficients& coeffs, int n);

RouthHurwitzResult routh_hurwitz(const CharCoefficients& coeffs);

StabilityReport eigen_stability(const LinearModel& model,
                                double margin_factor = kStabilityMarginFactor);

}  // namespace wgm
