#include "wgm/gaussian_state.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "wgm/constants.hpp"
#include "wgm/dense_lu.hpp"
#include "wgm/errors.hpp"

namespace wgm {

namespace {

constexpr int kDim = 6;
constexpr int kVec = kDim * kDim;

// Column-major vec(V) index.
constexpr int vec_index(int i, int j) { return i + kDim * j; }

// K = I (x) A + A (x) I acting on vec(V), stored column-major.
std::vector<double> lyapunov_operator(const Matrix6& a) {
  std::vector<double> k(static_cast<std::size_t>(kVec * kVec), 0.0);
  auto at = [&](int row, int col) -> double& {
    return k[static_cast<std::size_t>(col * kVec + row)];
  };
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      const int row = vec_index(i, j);
      for (int m = 0; m < kDim; ++m) {
        at(row, vec_index(m, j)) += a(i, m);  // (A V)_{ij}
        at(row, vec_index(i, m)) += a(j, m);  // (V A^T)_{ij}
      }
    }
  }
  return k;
}

// r = b - K x, column oriented.
std::vector<double> residual_vector(const std::vector<double>& k, const std::vector<double>& b,
                                    const std::vector<double>& x, const simd::KernelTable& ker) {
  std::vector<double> r = b;
  for (int c = 0; c < kVec; ++c) {
    const double xc = x[static_cast<std::size_t>(c)];
    if (xc != 0.0) ker.axpy(-xc, k.data() + static_cast<std::size_t>(c) * kVec, r.data(), kVec);
  }
  return r;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(const Matrix6& v) : v_(v) {
  const double asym = (v - v.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12)) {
    std::ostringstream os;
    os << "covariance matrix is not symmetric (max |V - V^T| = " << asym << ")";
    throw ValidationError("V", os.str());
  }
}

double lyapunov_residual(const LinearModel& model, const Matrix6& v) {
  return (model.drift * v + v * model.drift.transpose() + model.diffusion).norm();
}

CovarianceMatrix solve_lyapunov(const LinearModel& model, const StabilityReport& stability,
                                const simd::KernelTable& kernels) {
  if (!stability.stable_by_eigen) {
    std::ostringstream os;
    os << "solve_lyapunov: drift matrix is not stable (max Re eta = " << stability.max_real_part
       << "); no steady-state covariance exists";
    throw StabilityError(os.str());
  }

  std::vector<double> k = lyapunov_operator(model.drift);
  std::vector<double> rhs(kVec);
  for (int j = 0; j < kDim; ++j) {
    for (int i = 0; i < kDim; ++i) rhs[static_cast<std::size_t>(vec_index(i, j))] = -model.diffusion(i, j);
  }

  const DenseLu lu(kVec, k, kernels);
  std::vector<double> x = rhs;
  lu.solve(x);

  // One step of iterative refinement.
  std::vector<double> r = residual_vector(k, rhs, x, kernels);
  lu.solve(r);
  for (int i = 0; i < kVec; ++i) x[static_cast<std::size_t>(i)] += r[static_cast<std::size_t>(i)];

  Matrix6 v;
  for (int j = 0; j < kDim; ++j) {
    for (int i = 0; i < kDim; ++i) v(i, j) = x[static_cast<std::size_t>(vec_index(i, j))];
  }
  const Matrix6 sym = 0.5 * (v + v.transpose());

  const double scale = model.diffusion.norm();
  const double res = lyapunov_residual(model, sym);
  if (!(res <= 1e-10 * scale)) {
    std::ostringstream os;
    os << "solve_lyapunov: residual " << res << " exceeds 1e-10 * ||D||_F = " << 1e-10 * scale;
    throw NumericalError(os.str());
  }
  if (!is_physical(sym)) {
    std::ostringstream os;
    os << "solve_lyapunov: covariance violates the uncertainty relation (min eigenvalue "
       << min_uncertainty_eigenvalue(sym) << ")";
    throw PhysicalityError(os.str());
  }
  return CovarianceMatrix(sym);
}

CovarianceMatrix solve_lyapunov(const LinearModel& model) {
  return solve_lyapunov(model, eigen_stability(model));
}

double min_uncertainty_eigenvalue(const Eigen::MatrixXd& v) {
  const Eigen::Index n = v.rows();
  if (n != v.cols() || n % 2 != 0) {
    throw ValidationError("V", "uncertainty check needs a square matrix of even size");
  }
  Eigen::MatrixXcd h = v.cast<std::complex<double>>();
  for (Eigen::Index m = 0; m < n; m += 2) {
    h(m, m + 1) += std::complex<double>(0.0, 0.5);
    h(m + 1, m) -= std::complex<double>(0.0, 0.5);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("uncertainty check: eigen solver failed");
  return es.eigenvalues().minCoeff();
}

bool is_physical(const Eigen::MatrixXd& v, double tolerance) {
  return min_uncertainty_eigenvalue(v) >= -tolerance;
}

std::string_view to_string(Bipartition b) noexcept {
  return b == Bipartition::cw_mech ? "cw" : "ccw";
}

std::array<int, 4> bipartition_indices(Bipartition b) noexcept {
  namespace qd = quadrature;
  if (b == Bipartition::cw_mech) return {qd::X_cw, qd::Y_cw, qd::q, qd::p};
  return {qd::X_ccw, qd::Y_ccw, qd::q, qd::p};
}

ReducedCM reduce_cm(const CovarianceMatrix& v, Bipartition b) {
  const auto idx = bipartition_indices(b);
  ReducedCM out;
  out.bipartition = b;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out.matrix(i, j) = v(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return out;
}

EntanglementResult log_negativity(const Eigen::Matrix4d& vp) {
  const Eigen::Matrix2d a = vp.topLeftCorner<2, 2>();
  const Eigen::Matrix2d b = vp.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d c = vp.topRightCorner<2, 2>();
  const double det_a = a.determinant();
  const double det_b = b.determinant();

  EntanglementResult r;
  if (c.isZero(0.0)) {
    // Product state: the partial transpose leaves both local spectra alone.
    r.sigma = det_a + det_b;
    r.nu_minus = std::sqrt(std::min(det_a, det_b));
    if (!(std::min(det_a, det_b) > 0.0)) {
      throw PhysicalityError("log_negativity: local block is not positive definite");
    }
    r.E_N = 0.0;
    return r;
  }

  // Schur complement keeps det V' accurate when the blocks are large and
  // nearly cancel (strong squeezing); a plain 4x4 determinant loses ~c^4 eps.
  const double det_v = det_a > 0.0 ? det_a * (b - c.transpose() * a.inverse() * c).determinant()
                                   : vp.determinant();
  r.sigma = det_a + det_b - 2.0 * c.determinant();
  double disc = r.sigma * r.sigma - 4.0 * det_v;
  if (disc < 0.0) {
    if (disc < -1e-10 * r.sigma * r.sigma) {
      std::ostringstream os;
      os << "log_negativity: negative discriminant " << disc << " (unphysical reduced CM)";
      throw PhysicalityError(os.str());
    }
    disc = 0.0;
  }
  // nu^2 = (Sigma - sqrt(disc)) / 2, written without the cancellation.
  const double denom = r.sigma + std::sqrt(disc);
  if (!(denom > 0.0) || !(det_v > 0.0)) {
    throw PhysicalityError("log_negativity: reduced CM is not positive definite");
  }
  r.nu_minus = std::sqrt(2.0 * det_v / denom);
  r.E_N = std::max(0.0, -std::log(2.0 * r.nu_minus));
  return r;
}

EntanglementResult log_negativity(const ReducedCM& vp) { return log_negativity(vp.matrix); }

std::string_view to_string(QuadraturePair pair) noexcept {
  switch (pair) {
    case QuadraturePair::q_X: return "q_X";
    case QuadraturePair::q_Y: return "q_Y";
    case QuadraturePair::q_p: return "q_p";
    case QuadraturePair::X_Y: return "X_Y";
  }
  return "?";
}

Eigen::Matrix2d pair_covariance(const ReducedCM& vp, QuadraturePair pair) {
  // positions within the reduced CM: X=0, Y=1, q=2, p=3
  int i = 0, j = 0;
  switch (pair) {
    case QuadraturePair::q_X: i = 2; j = 0; break;
    case QuadraturePair::q_Y: i = 2; j = 1; break;
    case QuadraturePair::q_p: i = 2; j = 3; break;
    case QuadraturePair::X_Y: i = 0; j = 1; break;
  }
  Eigen::Matrix2d s;
  s << vp.matrix(i, i), vp.matrix(i, j), vp.matrix(j, i), vp.matrix(j, j);
  return s;
}

SqueezingEllipse ellipse_from_covariance(const Eigen::Matrix2d& s) {
  const double a = s(0, 0), c = s(1, 1), b = 0.5 * (s(0, 1) + s(1, 0));
  const double mean = 0.5 * (a + c);
  const double half_gap = std::hypot(0.5 * (a - c), b);
  const double lo = mean - half_gap;
  const double hi = mean + half_gap;
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "wigner_ellipse: sub-covariance is not positive definite (eigenvalue " << lo << ")";
    throw PhysicalityError(os.str());
  }
  SqueezingEllipse e;
  e.sub_cm = s;
  e.major = std::sqrt(2.0 * hi);
  e.minor = std::sqrt(2.0 * lo);
  e.angle = 0.5 * std::atan2(2.0 * b, a - c);
  e.squeezed = lo < 0.5 - kSqueezingTolerance;
  return e;
}

SqueezingEllipse wigner_ellipse(const ReducedCM& vp, QuadraturePair pair) {
  return ellipse_from_covariance(pair_covariance(vp, pair));
}

double wigner_marginal(const Eigen::Matrix2d& s, double x, double y) {
  const double det = s.determinant();
  if (!(det > 0.0)) throw PhysicalityError("wigner_marginal: sub-covariance is singular");
  const Eigen::Vector2d u(x, y);
  const double quad = u.dot(s.inverse() * u);
  return std::exp(-0.5 * quad) / (constants::two_pi * std::sqrt(det));
}

std::vector<WignerSample> wigner_grid(const Eigen::Matrix2d& s, int n, double extent) {
  if (n < 2) throw ValidationError("grid", "need at least 2 points per side");
  if (!(extent > 0.0)) throw ValidationError("extent", "must be > 0");
  std::vector<WignerSample> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = -extent + 2.0 * extent * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double y = -extent + 2.0 * extent * j / (n - 1);
      out.push_back({x, y, wigner_marginal(s, x, y)});
    }
  }
  return out;
}

}  // namespace wgm
