#include "wgm/pipeline.hpp"

#include <limits>

#include "wgm/errors.hpp"

namespace wgm {

namespace {

EntanglementResult not_available() {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan, nan};
}

}  // namespace

std::string_view to_string(PointStatus s) noexcept {
  switch (s) {
    case PointStatus::ok: return "ok";
    case PointStatus::unstable: return "unstable";
    case PointStatus::no_converge: return "no_converge";
  }
  return "?";
}

PointResult evaluate_point(const SystemParams& params, const DriveConfig& drive,
                           const SteadyStateOptions& options, const simd::KernelTable& kernels) {
  PointResult r;
  r.cw = not_available();
  r.ccw = not_available();
  r.derived = derive_constants(params, drive);

  try {
    r.steady = solve_steady_state(r.derived, params, drive, options);
    r.model = build_linear_model(*r.steady, r.derived, params);
    r.stability = eigen_stability(*r.model);
    if (!r.stability->stable_by_eigen) {
      r.status = PointStatus::unstable;
      r.message = "drift matrix has an eigenvalue with non-negative real part";
      return r;
    }
    r.cm = solve_lyapunov(*r.model, *r.stability, kernels);
    r.cw = log_negativity(reduce_cm(*r.cm, Bipartition::cw_mech));
    r.ccw = log_negativity(reduce_cm(*r.cm, Bipartition::ccw_mech));
    r.status = PointStatus::ok;
  } catch (const ValidationError&) {
    throw;
  } catch (const StabilityError& e) {
    r.status = PointStatus::unstable;
    r.message = e.what();
  } catch (const NumericalError& e) {
    r.status = PointStatus::no_converge;
    r.message = e.what();
    r.cm.reset();
    r.cw = not_available();
    r.ccw = not_available();
  }
  return r;
}

}  // namespace wgm
