#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wgm/linear_model.hpp"
#include "wgm/simd/kernels.hpp"
#include "wgm/stability.hpp"

namespace wgm {

// Steady-state covariance matrix over (X_cw, Y_cw, X_ccw, Y_ccw, q, p) in the
// vacuum-variance-1/2 convention. Immutable once constructed.
class CovarianceMatrix {
public:
  // Throws ValidationError if `v` is not symmetric to 1e-12.
  explicit CovarianceMatrix(const Matrix6& v);

  const Matrix6& matrix() const noexcept { return v_; }
  double operator()(int i, int j) const { return v_(i, j); }

private:
  Matrix6 v_;
};

// Solves A V + V A^T = -D as a 36 x 36 dense system (LU with partial pivoting
// on the given kernels), then symmetrizes. Requires a stable model.
CovarianceMatrix solve_lyapunov(const LinearModel& model, const StabilityReport& stability,
                                const simd::KernelTable& kernels = simd::active());
CovarianceMatrix solve_lyapunov(const LinearModel& model);

// || A V + V A^T + D ||_F
double lyapunov_residual(const LinearModel& model, const Matrix6& v);

// Smallest eigenvalue of V + (i/2) Omega, with Omega the symplectic form of
// the modes making up V (V must be 2n x 2n).
double min_uncertainty_eigenvalue(const Eigen::MatrixXd& v);
bool is_physical(const Eigen::MatrixXd& v, double tolerance = 1e-8);

enum class Bipartition { cw_mech, ccw_mech };
std::string_view to_string(Bipartition b) noexcept;

// 4 x 4 principal submatrix, ordered (X_j, Y_j, q, p).
struct ReducedCM {
  Eigen::Matrix4d matrix;
  Bipartition bipartition = Bipartition::cw_mech;

  Eigen::Matrix2d block_a() const { return matrix.topLeftCorner<2, 2>(); }      // optical
  Eigen::Matrix2d block_b() const { return matrix.bottomRightCorner<2, 2>(); }  // mechanical
  Eigen::Matrix2d block_c() const { return matrix.topRightCorner<2, 2>(); }     // correlations
};

// Indices into the 6 x 6 matrix selected by a bipartition.
std::array<int, 4> bipartition_indices(Bipartition b) noexcept;

ReducedCM reduce_cm(const CovarianceMatrix& v, Bipartition b);

struct EntanglementResult {
  double E_N = 0.0;       // logarithmic negativity
  double nu_minus = 0.0;  // smallest partially transposed symplectic eigenvalue
  double sigma = 0.0;     // det A + det B - 2 det C
};

EntanglementResult log_negativity(const ReducedCM& vp);
EntanglementResult log_negativity(const Eigen::Matrix4d& vp);

// Quadrature pairs within a reduced CM, named relative to its optical mode.
enum class QuadraturePair { q_X, q_Y, q_p, X_Y };
std::string_view to_string(QuadraturePair pair) noexcept;

struct SqueezingEllipse {
  Eigen::Matrix2d sub_cm;
  double major = 0.0;  // semi-axes of the 1/e contour, sqrt(2 lambda)
  double minor = 0.0;
  double angle = 0.0;  // orientation of the major axis, (-pi/2, pi/2]
  bool squeezed = false;
};

// Squeezing threshold below the vacuum variance.
inline constexpr double kSqueezingTolerance = 1e-8;

SqueezingEllipse ellipse_from_covariance(const Eigen::Matrix2d& sub_cm);
SqueezingEllipse wigner_ellipse(const ReducedCM& vp, QuadraturePair pair);

// Sub-covariance of a pair, ordered as the pair name reads.
Eigen::Matrix2d pair_covariance(const ReducedCM& vp, QuadraturePair pair);

// Normalized two-dimensional marginal of the Gaussian Wigner function.
double wigner_marginal(const Eigen::Matrix2d& sub_cm, double x, double y);

struct WignerSample {
  double x;
  double y;
  double w;
};

// Samples the marginal on an n x n grid spanning [-extent, extent]^2.
std::vector<WignerSample> wigner_grid(const Eigen::Matrix2d& sub_cm, int n, double extent);

}  // namespace wgm
