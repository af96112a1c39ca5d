#pragma once

// One parameter point through the full chain:
// derive -> steady state -> linearize -> stability -> covariance -> measures.

#include <optional>
#include <string>
#include <string_view>

#include "wgm/gaussian_state.hpp"
#include "wgm/linear_model.hpp"
#include "wgm/params.hpp"
#include "wgm/simd/kernels.hpp"
#include "wgm/stability.hpp"
#include "wgm/steady_state.hpp"

namespace wgm {

enum class PointStatus { ok, unstable, no_converge };
std::string_view to_string(PointStatus s) noexcept;

struct PointResult {
  PointStatus status = PointStatus::no_converge;
  std::string message;  // why the point is not ok
  DerivedParams derived;
  std::optional<SteadyState> steady;
  std::optional<LinearModel> model;
  std::optional<StabilityReport> stability;
  std::optional<CovarianceMatrix> cm;
  // NaN unless status == ok.
  EntanglementResult cw;
  EntanglementResult ccw;

  bool ok() const noexcept { return status == PointStatus::ok; }
  const EntanglementResult& entanglement(Bipartition b) const noexcept {
    return b == Bipartition::cw_mech ? cw : ccw;
  }
};

// Validation failures propagate as ValidationError. Numerical trouble past
// that point is folded into the status: StabilityError -> unstable, anything
// else -> no_converge.
PointResult evaluate_point(const SystemParams& params, const DriveConfig& drive,
                           const SteadyStateOptions& options = {},
                           const simd::KernelTable& kernels = simd::active());

}  // namespace wgm
