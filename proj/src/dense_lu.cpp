#include "wgm/dense_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "wgm/errors.hpp"

namespace wgm {

DenseLu::DenseLu(std::size_t n, std::vector<double> columns, const simd::KernelTable& kernels)
    : n_(n), lu_(std::move(columns)), perm_(n), k_(&kernels) {
  if (lu_.size() != n * n) throw ValidationError("", "DenseLu: storage does not match n * n");
  for (double v : lu_) {
    if (!std::isfinite(v)) throw NumericalError("DenseLu: matrix has non-finite entries");
  }
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  double pmin = std::numeric_limits<double>::infinity();
  double pmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double* col_k = lu_.data() + k * n;
    const std::size_t p = k + k_->iamax(col_k + k, n - k);
    const double pivot = col_k[p];
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) {
      throw NumericalError("DenseLu: matrix is singular to working precision");
    }
    pmin = std::min(pmin, std::abs(pivot));
    pmax = std::max(pmax, std::abs(pivot));
    if (p != k) {
      std::swap(perm_[k], perm_[p]);
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_[j * n + k], lu_[j * n + p]);
    }
    const std::size_t tail = n - k - 1;
    if (tail == 0) continue;
    k_->scal(1.0 / pivot, col_k + k + 1, tail);
    for (std::size_t j = k + 1; j < n; ++j) {
      double* col_j = lu_.data() + j * n;
      const double u = col_j[k];
      if (u != 0.0) k_->axpy(-u, col_k + k + 1, col_j + k + 1, tail);
    }
  }
  pivot_ratio_ = pmax > 0.0 ? pmin / pmax : 0.0;
}

void DenseLu::solve(std::span<double> b) const {
  if (b.size() != n_) throw ValidationError("", "DenseLu::solve: right-hand side has wrong size");
  const std::size_t n = n_;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  // L y = P b, unit lower triangular, column oriented
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (x[k] != 0.0) k_->axpy(-x[k], lu_.data() + k * n + k + 1, x.data() + k + 1, n - k - 1);
  }
  // U x = y
  for (std::size_t k = n; k-- > 0;) {
    x[k] /= lu_[k * n + k];
    if (k > 0 && x[k] != 0.0) k_->axpy(-x[k], lu_.data() + k * n, x.data(), k);
  }
  std::copy(x.begin(), x.end(), b.begin());
}

}  // namespace wgm
