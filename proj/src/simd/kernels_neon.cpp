#include "wgm/simd/kernels.hpp"

#if defined(WGM_SIMD_HAVE_NEON)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace wgm::simd::neon {

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void scal(double alpha, double* x, std::size_t n) noexcept {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(a, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
  float64x2_t s = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) s = vfmaq_f64(s, vld1q_f64(x + i), vld1q_f64(y + i));
  double r = vaddvq_f64(s);
  for (; i < n; ++i) r = std::fma(x[i], y[i], r);
  return r;
}

std::size_t iamax(const double* x, std::size_t n) noexcept {
  if (n == 0) return 0;
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double best = vmaxvq_f64(m);
  for (; i < n; ++i) best = std::max(best, std::abs(x[i]));
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(x[j]) == best) return j;
  }
  return 0;
}

}  // namespace wgm::simd::neon

#endif
