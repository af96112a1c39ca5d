#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "support/fixtures.hpp"
#include "wgm/constants.hpp"
#include "wgm/errors.hpp"
#include "wgm/gaussian_state.hpp"
#include "wgm/pipeline.hpp"

using namespace wgm;
using test::kPi;
using test::reference_drive;
using test::reference_system;
namespace qd = quadrature;

namespace {

Eigen::Matrix4d tmsv(double r) {
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  const double c = std::cosh(2.0 * r) / 2.0, s = std::sinh(2.0 * r) / 2.0;
  v.diagonal().setConstant(c);
  v(0, 2) = v(2, 0) = s;
  v(1, 3) = v(3, 1) = -s;
  return v;
}

LinearModel decoupled_model(double n_m) {
  DriftParameters p;
  p.Gamma = 3.8e7;
  p.delta_eff = 1.5e7;
  p.omega_m = 6.3e7;
  p.gamma_m = 500.0;
  p.n_m = n_m;
  return assemble_linear_model(p);
}

PointResult reference_point(double theta, double ratio = 0.4) {
  const SystemParams sys = reference_system(1.0);
  return evaluate_point(sys, reference_drive(sys, theta, ratio));
}

Eigen::Vector4d sorted_eigenvalues(const Eigen::Matrix4d& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("decoupled optics relax to vacuum and the oscillator to its thermal state") {
  for (double n_m : {0.0, 3.0, 269.65338937077367}) {
    const LinearModel m = decoupled_model(n_m);
    const CovarianceMatrix v = solve_lyapunov(m);
    const Matrix6& V = v.matrix();
    CHECK((V.topLeftCorner<4, 4>() - 0.5 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(V.topRightCorner<4, 2>().cwiseAbs().maxCoeff() <= 1e-12);
    const double thermal = n_m + 0.5;
    const double tol = m.gamma_m / m.omega_m;
    CHECK(std::abs(V(qd::q, qd::q) / thermal - 1.0) <= tol);
    CHECK(std::abs(V(qd::p, qd::p) / thermal - 1.0) <= tol);
    CHECK(std::abs(V(qd::q, qd::p)) <= tol * thermal);
  }
}

TEST_CASE("Lyapunov solutions are accurate, symmetric and physical on random stable points") {
  std::mt19937_64 rng(8);
  int solved = 0;
  for (int i = 0; i < 300 && solved < 100; ++i) {
    const auto d = test::draw_point(rng);
    const PointResult r = evaluate_point(d.system, d.drive);
    if (!r.ok()) continue;
    ++solved;
    const Matrix6& V = r.cm->matrix();
    CHECK(lyapunov_residual(*r.model, V) <= 1e-10 * r.model->diffusion.norm());
    CHECK(V == V.transpose());
    CHECK(is_physical(V));
    CHECK(min_uncertainty_eigenvalue(V) >= -1e-8);
  }
  CHECK(solved == 100);
}

TEST_CASE("Lyapunov solve is identical on every kernel variant up to rounding") {
  const PointResult r = reference_point(kPi / 5.0);
  const Matrix6 ref = solve_lyapunov(*r.model, *r.stability, simd::table(simd::Isa::scalar)).matrix();
  for (auto isa : simd::available()) {
    const Matrix6 v = solve_lyapunov(*r.model, *r.stability, simd::table(isa)).matrix();
    CHECK((v - ref).norm() <= 1e-12 * ref.norm());
  }
}

TEST_CASE("no covariance exists for an unstable drift matrix") {
  const SystemParams sys = reference_system(1.0);
  const auto pt = test::solve_point(sys, reference_drive(sys, kPi, 0.2));
  REQUIRE_FALSE(pt.stability.stable_by_eigen);
  CHECK_THROWS_AS(solve_lyapunov(pt.model, pt.stability), StabilityError);
  CHECK_THROWS_AS(solve_lyapunov(pt.model), StabilityError);
}

TEST_CASE("covariance matrices must be symmetric") {
  Matrix6 v = 0.5 * Matrix6::Identity();
  CHECK_NOTHROW(CovarianceMatrix{v});
  v(0, 3) = 1e-9;
  CHECK_THROWS_AS(CovarianceMatrix{v}, ValidationError);
}

TEST_CASE("physicality is the uncertainty relation, not a diagonal bound") {
  CHECK(is_physical(0.5 * Matrix6::Identity()));
  CHECK_FALSE(is_physical(0.25 * Matrix6::Identity()));
  Eigen::MatrixXd squeezed = 0.5 * Eigen::MatrixXd::Identity(6, 6);
  squeezed(0, 0) = 0.05;
  squeezed(1, 1) = 5.0;
  CHECK(is_physical(squeezed));
}

TEST_CASE("reduction selects optical pair plus oscillator") {
  Matrix6 v;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) v(i, j) = 10.0 * std::min(i, j) + std::max(i, j);
  }
  const CovarianceMatrix cm(v);
  for (Bipartition b : {Bipartition::cw_mech, Bipartition::ccw_mech}) {
    const ReducedCM r = reduce_cm(cm, b);
    const auto idx = bipartition_indices(b);
    CHECK(r.bipartition == b);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) CHECK(r.matrix(i, j) == v(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]));
    }
    CHECK(r.block_a() == r.matrix.topLeftCorner<2, 2>());
    CHECK(r.block_b() == r.matrix.bottomRightCorner<2, 2>());
    CHECK(r.block_c() == r.matrix.topRightCorner<2, 2>());
  }
  CHECK(bipartition_indices(Bipartition::cw_mech) == std::array<int, 4>{0, 1, 4, 5});
  CHECK(bipartition_indices(Bipartition::ccw_mech) == std::array<int, 4>{2, 3, 4, 5});
  const ReducedCM id = reduce_cm(CovarianceMatrix(Matrix6::Identity()), Bipartition::ccw_mech);
  CHECK(id.matrix == Eigen::Matrix4d::Identity());
}

TEST_CASE("two-mode vacuum is separable at the threshold") {
  const EntanglementResult e = log_negativity(Eigen::Matrix4d(0.5 * Eigen::Matrix4d::Identity()));
  CHECK(e.nu_minus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.E_N == 0.0);
}

TEST_CASE("two-mode squeezed vacuum has E_N = 2r") {
  for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const EntanglementResult e = log_negativity(tmsv(r));
    CHECK(std::abs(e.E_N - 2.0 * r) <= 1e-10);
    CHECK(e.nu_minus == doctest::Approx(std::exp(-2.0 * r) / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("uncorrelated bipartitions have exactly zero negativity") {
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  v.topLeftCorner<2, 2>() << 0.3, 0.1, 0.1, 1.2;
  v.bottomRightCorner<2, 2>() << 40.0, -2.0, -2.0, 41.0;
  const EntanglementResult e = log_negativity(v);
  CHECK(e.E_N == 0.0);
}

TEST_CASE("an unphysical reduced matrix is rejected") {
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  v.topLeftCorner<2, 2>() = 0.5 * Eigen::Matrix2d::Identity();
  v.bottomRightCorner<2, 2>() = Eigen::Matrix2d::Identity();
  v.topRightCorner<2, 2>() << 0.0, 1.0, -1.0, 0.0;
  v.bottomLeftCorner<2, 2>() = v.topRightCorner<2, 2>().transpose();
  CHECK_THROWS_AS(log_negativity(v), PhysicalityError);
}

TEST_CASE("negativity and the PPT threshold agree on sampled points") {
  std::mt19937_64 rng(91);
  int entangled = 0, separable = 0;
  for (int i = 0; i < 300; ++i) {
    const auto d = test::draw_point(rng);
    const PointResult r = evaluate_point(d.system, d.drive);
    if (!r.ok()) continue;
    for (const auto& e : {r.cw, r.ccw}) {
      CHECK(e.E_N >= 0.0);
      CHECK((e.E_N > 0.0) == (e.nu_minus < 0.5));
      CHECK(e.E_N == doctest::Approx(std::max(0.0, -std::log(2.0 * e.nu_minus))));
      (e.E_N > 0.0 ? entangled : separable) += 1;
    }
  }
  CHECK(entangled > 10);
  CHECK(separable > 10);
}

TEST_CASE("reference point negativities") {
  const PointResult r = reference_point(kPi / 5.0);
  REQUIRE(r.ok());
  CHECK(r.cw.E_N == doctest::Approx(0.246281405136).epsilon(1e-9));
  CHECK(r.ccw.E_N == 0.0);
  CHECK(r.ccw.nu_minus > 0.5);
}

TEST_CASE("squeezing ellipses of analytic sub-covariances") {
  const SqueezingEllipse vac = ellipse_from_covariance(0.5 * Eigen::Matrix2d::Identity());
  CHECK(vac.major == doctest::Approx(1.0));
  CHECK(vac.minor == doctest::Approx(1.0));
  CHECK_FALSE(vac.squeezed);
  for (double r : {0.05, 0.4, 1.3}) {
    Eigen::Matrix2d s;
    s << std::exp(-2.0 * r) / 2.0, 0.0, 0.0, std::exp(2.0 * r) / 2.0;
    const SqueezingEllipse e = ellipse_from_covariance(s);
    CHECK(e.minor == doctest::Approx(std::exp(-r)).epsilon(1e-14));
    CHECK(e.major == doctest::Approx(std::exp(r)).epsilon(1e-14));
    CHECK(std::abs(std::abs(e.angle) - kPi / 2.0) <= 1e-12);  // major axis along y
    CHECK(e.squeezed);
  }
  // rotated by 30 degrees
  const double a = kPi / 6.0;
  Eigen::Matrix2d rot;
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const Eigen::Matrix2d s = rot * Eigen::Vector2d(2.0, 0.1).asDiagonal() * rot.transpose();
  const SqueezingEllipse e = ellipse_from_covariance(s);
  CHECK(e.angle == doctest::Approx(a).epsilon(1e-12));
  CHECK(e.major == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.minor == doctest::Approx(std::sqrt(0.2)).epsilon(1e-12));

  Eigen::Matrix2d bad;
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(ellipse_from_covariance(bad), PhysicalityError);
}

TEST_CASE("Wigner marginal peak, normalization and 1/e contour") {
  Eigen::Matrix2d s;
  s << 0.9, 0.3, 0.3, 0.4;
  const double peak = wigner_marginal(s, 0.0, 0.0);
  CHECK(peak == doctest::Approx(1.0 / (constants::two_pi * std::sqrt(s.determinant()))));
  const SqueezingEllipse e = ellipse_from_covariance(s);
  const double c = std::cos(e.angle), sn = std::sin(e.angle);
  CHECK(wigner_marginal(s, e.major * c, e.major * sn) / peak == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(wigner_marginal(s, -e.minor * sn, e.minor * c) / peak == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const int n = 201;
  const double ext = 6.0;
  const auto grid = wigner_grid(s, n, ext);
  REQUIRE(grid.size() == static_cast<std::size_t>(n * n));
  const double h = 2.0 * ext / (n - 1);
  double total = 0.0;
  for (const auto& g : grid) total += g.w * h * h;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(wigner_grid(s, 1, ext), ValidationError);
}

TEST_CASE("cross-quadrature squeezing switches between the optical modes") {
  for (double theta : {kPi / 5.0, 9.0 * kPi / 5.0}) {
    const PointResult r = reference_point(theta);
    REQUIRE(r.ok());
    const bool cw = wigner_ellipse(reduce_cm(*r.cm, Bipartition::cw_mech), QuadraturePair::q_X).squeezed;
    const bool ccw = wigner_ellipse(reduce_cm(*r.cm, Bipartition::ccw_mech), QuadraturePair::q_X).squeezed;
    CAPTURE(theta);
    CHECK(cw == (theta < kPi));
    CHECK(ccw == (theta > kPi));
  }
}

TEST_CASE("mirror symmetry of the negativities") {
  for (int i = 0; i < 16; ++i) {
    const double theta = constants::two_pi * (i + 0.5) / 16.0;
    const PointResult a = reference_point(theta);
    const PointResult b = reference_point(constants::two_pi - theta);
    REQUIRE(a.status == b.status);
    if (!a.ok()) continue;
    CHECK(std::abs(a.cw.E_N - b.ccw.E_N) <= 1e-8);
    CHECK(std::abs(a.ccw.E_N - b.cw.E_N) <= 1e-8);
  }
}

TEST_CASE("global drive phase: invariant and covariant quantities") {
  const SystemParams sys = reference_system(1.0);
  const DriveConfig base = reference_drive(sys, kPi / 5.0, 0.4);
  const PointResult r0 = evaluate_point(sys, base);
  REQUIRE(r0.ok());
  std::mt19937_64 rng(5150);
  double cross_change = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double phi = test::uniform(rng, 0.3, constants::two_pi - 0.3);
    DriveConfig d = base;
    d.phase_cw = reduce_phase(d.phase_cw + phi);
    d.phase_ccw = reduce_phase(d.phase_ccw + phi);
    const PointResult r = evaluate_point(sys, d);
    REQUIRE(r.ok());
    CHECK(std::abs(r.cw.E_N - r0.cw.E_N) <= 1e-9);
    CHECK(std::abs(r.ccw.E_N - r0.ccw.E_N) <= 1e-9);
    for (Bipartition b : {Bipartition::cw_mech, Bipartition::ccw_mech}) {
      const ReducedCM v = reduce_cm(*r.cm, b), v0 = reduce_cm(*r0.cm, b);
      // the state is rotated by a local phase: 4D ellipsoid axes are unchanged
      CHECK((sorted_eigenvalues(v.matrix) - sorted_eigenvalues(v0.matrix)).cwiseAbs().maxCoeff() <=
            1e-9 * v0.matrix.norm());
      for (QuadraturePair p : {QuadraturePair::q_p, QuadraturePair::X_Y}) {
        const SqueezingEllipse e = wigner_ellipse(v, p), e0 = wigner_ellipse(v0, p);
        CHECK(std::abs(e.major - e0.major) <= 1e-9 * e0.major);
        CHECK(std::abs(e.minor - e0.minor) <= 1e-9 * e0.major);
      }
      const SqueezingEllipse x = wigner_ellipse(v, QuadraturePair::q_X), x0 = wigner_ellipse(v0, QuadraturePair::q_X);
      cross_change = std::max(cross_change, std::abs(x.minor - x0.minor));
    }
  }
  // (q, X_j) projections are tied to the optical phase reference and do move
  CHECK(cross_change > 1e-3);
}
