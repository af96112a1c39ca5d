#include "wgm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "wgm/errors.hpp"

namespace wgm::oracle {

using Eigen::MatrixXd;

namespace {

// Higham (2005) Pade coefficients and 1-norm thresholds.
constexpr double kB3[] = {120.0, 60.0, 12.0, 1.0};
constexpr double kB5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr double kB7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr double kB9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                          2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr double kB13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                           1187353796428800.0,  129060195264000.0,   10559470521600.0,
                           670442572800.0,      33522128640.0,       1323241920.0,
                           40840800.0,          960960.0,            16380.0,
                           182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

MatrixXd pade_solve(const MatrixXd& u, const MatrixXd& v) {
  return (v - u).partialPivLu().solve(v + u);
}

template <std::size_t N>
MatrixXd pade_low(const MatrixXd& a, const double (&b)[N]) {
  const auto n = a.rows();
  const MatrixXd id = MatrixXd::Identity(n, n);
  const MatrixXd a2 = a * a;
  MatrixXd u_even = b[1] * id;
  MatrixXd v = b[0] * id;
  MatrixXd power = id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    u_even += b[k + 1] * power;
    v += b[k] * power;
  }
  return pade_solve(a * u_even, v);
}

MatrixXd pade13(const MatrixXd& a) {
  const auto n = a.rows();
  const MatrixXd id = MatrixXd::Identity(n, n);
  const MatrixXd a2 = a * a, a4 = a2 * a2, a6 = a4 * a2;
  const double* b = kB13;
  const MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return pade_solve(u, v);
}

double one_norm(const MatrixXd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

MatrixXd lyapunov_rhs(const MatrixXd& a, const MatrixXd& d, const MatrixXd& v) {
  return a * v + v * a.transpose() + d;
}

MatrixXd rk4_step(const MatrixXd& a, const MatrixXd& d, const MatrixXd& v, double h) {
  const MatrixXd k1 = lyapunov_rhs(a, d, v);
  const MatrixXd k2 = lyapunov_rhs(a, d, v + 0.5 * h * k1);
  const MatrixXd k3 = lyapunov_rhs(a, d, v + 0.5 * h * k2);
  const MatrixXd k4 = lyapunov_rhs(a, d, v + h * k3);
  return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double max_real_eigenvalue(const MatrixXd& a) {
  Eigen::EigenSolver<MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("oracle: eigenvalue iteration failed");
  return es.eigenvalues().real().maxCoeff();
}

void check_square(const MatrixXd& a, const MatrixXd& d) {
  if (a.rows() != a.cols() || d.rows() != a.rows() || d.cols() != a.cols()) {
    throw ValidationError("drift", "drift and diffusion must be square and of equal size");
  }
}

struct DivergenceGuard {
  double limit;
  void check(const MatrixXd& v, double t) const {
    const double norm = v.norm();
    if (!std::isfinite(norm) || (limit > 0.0 && norm > limit)) {
      std::ostringstream os;
      os << "integrate_moments: covariance diverged at t = " << t << " (||V||_F = " << norm << ")";
      throw DivergenceError(os.str());
    }
  }
};

}  // namespace

MatrixXd expm(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw ValidationError("A", "expm needs a square matrix");
  const double norm = one_norm(a);
  if (!std::isfinite(norm)) throw NumericalError("expm: non-finite input");
  if (norm <= kTheta3) return pade_low(a, kB3);
  if (norm <= kTheta5) return pade_low(a, kB5);
  if (norm <= kTheta7) return pade_low(a, kB7);
  if (norm <= kTheta9) return pade_low(a, kB9);
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  MatrixXd r = pade13(a / std::ldexp(1.0, s));
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

MomentTrajectory integrate_moments(const MatrixXd& a, const MatrixXd& d, const MatrixXd& v0,
                                   double t_final, double dt, const MomentOptions& options) {
  check_square(a, d);
  if (v0.rows() != a.rows() || v0.cols() != a.cols()) {
    throw ValidationError("V0", "initial covariance has the wrong shape");
  }
  if (!(dt > 0.0) || !(t_final > 0.0)) throw ValidationError("dt", "dt and t_final must be > 0");
  const double a_norm = a.norm();
  if (!(dt * a_norm < 0.1)) {
    std::ostringstream os;
    os << "dt = " << dt << " violates dt < 0.1 / ||A||_F = " << 0.1 / a_norm;
    throw ValidationError("dt", os.str());
  }
  const double max_re = max_real_eigenvalue(a);
  if (max_re < 0.0 && t_final < 20.0 / -max_re) {
    std::ostringstream os;
    os << "t_final = " << t_final << " is shorter than 20 / |max Re eta| = " << 20.0 / -max_re;
    throw ValidationError("t_final", os.str());
  }

  const double reference = std::max(v0.norm(), a_norm > 0.0 ? d.norm() / a_norm : 0.0);
  const DivergenceGuard guard{1e6 * reference};

  MomentTrajectory traj;
  traj.times.push_back(0.0);
  traj.cms.push_back(v0);

  if (options.stepping == Stepping::direct) {
    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt));
    const std::size_t every = std::max<std::size_t>(1, options.record_every);
    MatrixXd v = v0;
    for (std::size_t k = 1; k <= steps; ++k) {
      v = rk4_step(a, d, v, dt);
      if (k % every == 0 || k == steps) {
        const double t = static_cast<double>(k) * dt;
        guard.check(v, t);
        traj.times.push_back(t);
        traj.cms.push_back(v);
      }
    }
    return traj;
  }

  // The RK4 step is affine in V: step(V) = R vec(V) + c. Squaring (R, c)
  // yields the exact 2^k-step map.
  const Eigen::Index n = a.rows();
  const Eigen::Index nn = n * n;
  const MatrixXd zero = MatrixXd::Zero(n, n);
  MatrixXd r(nn, nn);
  for (Eigen::Index k = 0; k < nn; ++k) {
    MatrixXd e = MatrixXd::Zero(n, n);
    e(k % n, k / n) = 1.0;
    const MatrixXd s = rk4_step(a, zero, e, dt);
    r.col(k) = Eigen::Map<const Eigen::VectorXd>(s.data(), nn);
  }
  const MatrixXd c0 = rk4_step(a, d, zero, dt);
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(c0.data(), nn);
  const Eigen::Map<const Eigen::VectorXd> x0(v0.data(), nn);

  double t = dt;
  for (;;) {
    const Eigen::VectorXd x = r * x0 + c;
    MatrixXd v = Eigen::Map<const MatrixXd>(x.data(), n, n);
    guard.check(v, t);
    traj.times.push_back(t);
    traj.cms.push_back(std::move(v));
    if (t >= t_final) break;
    c = r * c + c;
    r = r * r;
    t *= 2.0;
  }
  return traj;
}

MomentTrajectory integrate_moments(const LinearModel& model, const MatrixXd& v0, double t_final,
                                   double dt, const MomentOptions& options) {
  return integrate_moments(model.drift, model.diffusion, v0, t_final, dt, options);
}

MatrixXd integral_form_cm(const MatrixXd& a, const MatrixXd& d, double t_max,
                          std::size_t n_steps) {
  check_square(a, d);
  if (n_steps < 2 || n_steps % 2 != 0) throw ValidationError("n_steps", "must be even and >= 2");
  if (!(t_max > 0.0)) throw ValidationError("t_max", "must be > 0");
  if (!(max_real_eigenvalue(a) < 0.0)) {
    throw StabilityError("integral_form_cm: drift matrix is not stable");
  }
  const double h = t_max / static_cast<double>(n_steps);
  const MatrixXd m_h = expm(a * h);
  auto sandwich = [&](const MatrixXd& m) -> MatrixXd { return m * d * m.transpose(); };

  if ((n_steps & (n_steps - 1)) == 0) {
    MatrixXd m = m_h * m_h;
    MatrixXd s = (h / 3.0) * (d + 4.0 * sandwich(m_h) + sandwich(m));
    for (std::size_t panels = 2; panels < n_steps; panels *= 2) {
      s += m * s * m.transpose();
      m = m * m;
    }
    return s;
  }

  MatrixXd m = MatrixXd::Identity(a.rows(), a.cols());
  MatrixXd sum = d;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    m = m * m_h;
    const double w = (k == n_steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * sandwich(m);
  }
  return (h / 3.0) * sum;
}

MatrixXd integral_form_cm(const LinearModel& model, double t_max, std::size_t n_steps) {
  return integral_form_cm(model.drift, model.diffusion, t_max, n_steps);
}

OracleGrid default_grid(const LinearModel& model, const StabilityReport& stability) {
  if (!(stability.max_real_part < 0.0)) {
    throw StabilityError("oracle: drift matrix is not stable");
  }
  const double decay = -stability.max_real_part;
  const double h = 0.02 / model.drift.norm();
  OracleGrid g;
  g.moment_dt = h;
  g.moment_t_final = 20.0 / decay;
  g.integral_t_max = 30.0 / decay;
  std::size_t n = 2;
  while (g.integral_t_max / static_cast<double>(n) > h) n *= 2;
  g.integral_steps = n;
  return g;
}

ThreeWayReport verify(const LinearModel& model) {
  const StabilityReport st = eigen_stability(model);
  ThreeWayReport rep;
  rep.grid = default_grid(model, st);
  rep.lyapunov = solve_lyapunov(model, st).matrix();
  rep.moments = integrate_moments(model, Matrix6::Zero(), rep.grid.moment_t_final,
                                  rep.grid.moment_dt)
                    .final_cm();
  rep.integral = integral_form_cm(model, rep.grid.integral_t_max, rep.grid.integral_steps);
  const double scale = rep.lyapunov.norm();
  rep.moment_vs_lyapunov = (rep.moments - rep.lyapunov).norm() / scale;
  rep.integral_vs_lyapunov = (rep.integral - rep.lyapunov).norm() / scale;
  rep.moment_vs_integral = (rep.moments - rep.integral).norm() / scale;
  return rep;
}

}  // namespace wgm::oracle
