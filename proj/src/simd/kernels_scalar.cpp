#include <cmath>

#include "wgm/simd/kernels.hpp"

namespace wgm::simd::scalar {

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal(double alpha, double* x, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

std::size_t iamax(const double* x, std::size_t n) noexcept {
  std::size_t best = 0;
  double best_abs = n > 0 ? std::abs(x[0]) : 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

}  // namespace wgm::simd::scalar
