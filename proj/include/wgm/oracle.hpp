#pragma once

// Brute-force verification paths for the covariance pipeline. Nothing in
// here touches the Lyapunov solver or the SIMD kernels; matrix algebra goes
// through Eigen and a local Pade exponential.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "wgm/gaussian_state.hpp"
#include "wgm/linear_model.hpp"
#include "wgm/stability.hpp"

namespace wgm::oracle {

// Scaling-and-squaring Pade approximant (orders 3..13).
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

enum class Stepping {
  direct,    // literal loop over fixed RK4 steps
  doubling,  // same RK4 step map, composed by repeated squaring (2^k steps)
};

struct MomentOptions {
  Stepping stepping = Stepping::doubling;
  std::size_t record_every = 1;  // direct stepping only
};

struct MomentTrajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> cms;

  const Eigen::MatrixXd& final_cm() const { return cms.back(); }
  double final_time() const { return times.back(); }
};

// Classical RK4 for dV/dt = A V + V A^T + D starting from v0.
// Requires dt < 0.1 / ||A||_F and, for stable A, t_final >= 20 / |max Re eta|.
MomentTrajectory integrate_moments(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion,
                                   const Eigen::MatrixXd& v0, double t_final, double dt,
                                   const MomentOptions& options = {});
MomentTrajectory integrate_moments(const LinearModel& model, const Eigen::MatrixXd& v0,
                                   double t_final, double dt, const MomentOptions& options = {});

// Composite Simpson rule for V = int_0^t_max exp(A t) D exp(A t)^T dt with
// n_steps (even) panels. Power-of-two n_steps are evaluated by interval
// doubling, others by a direct sweep over the nodes.
Eigen::MatrixXd integral_form_cm(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion,
                                 double t_max, std::size_t n_steps);
Eigen::MatrixXd integral_form_cm(const LinearModel& model, double t_max, std::size_t n_steps);

struct OracleGrid {
  double moment_t_final = 0.0;
  double moment_dt = 0.0;
  double integral_t_max = 0.0;
  std::size_t integral_steps = 0;
};

// Step sizes 0.02 / ||A||_F, horizons 20 and 30 / |max Re eta|.
OracleGrid default_grid(const LinearModel& model, const StabilityReport& stability);

struct ThreeWayReport {
  Matrix6 lyapunov;
  Matrix6 moments;
  Matrix6 integral;
  double moment_vs_lyapunov = 0.0;   // relative Frobenius distances
  double integral_vs_lyapunov = 0.0;
  double moment_vs_integral = 0.0;
  OracleGrid grid;
};

ThreeWayReport verify(const LinearModel& model);

}  // namespace wgm::oracle
