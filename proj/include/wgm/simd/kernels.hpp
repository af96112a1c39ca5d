#pragma once

// Contiguous double-precision vector kernels used by the dense solvers.
//
// Every kernel has a portable scalar reference implementation plus optional
// AVX2/FMA (x86-64) and NEON (AArch64) variants. The variant is chosen once at
// runtime from CPU support; WGMENT_SIMD=scalar|avx2|neon forces a choice.
// Variants agree with the scalar reference up to reassociation and FMA
// rounding; iamax returns the identical index on every variant.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wgm::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa = Isa::scalar;
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) = nullptr;
  // x[i] *= alpha
  void (*scal)(double alpha, double* x, std::size_t n) = nullptr;
  // sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n) = nullptr;
  // first index of the largest |x[i]|; 0 when n == 0
  std::size_t (*iamax)(const double* x, std::size_t n) = nullptr;
};

bool supported(Isa isa) noexcept;

// Table for a specific ISA. Throws std::invalid_argument if the ISA is not
// compiled in or not supported by this CPU.
const KernelTable& table(Isa isa);

// Table selected for this process.
const KernelTable& active();

// All ISAs usable on this machine, scalar first.
std::vector<Isa> available();

namespace scalar {
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void scal(double alpha, double* x, std::size_t n) noexcept;
double dot(const double* x, const double* y, std::size_t n) noexcept;
std::size_t iamax(const double* x, std::size_t n) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define WGM_SIMD_HAVE_AVX2 1
namespace avx2 {
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void scal(double alpha, double* x, std::size_t n) noexcept;
double dot(const double* x, const double* y, std::size_t n) noexcept;
std::size_t iamax(const double* x, std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define WGM_SIMD_HAVE_NEON 1
namespace neon {
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void scal(double alpha, double* x, std::size_t n) noexcept;
double dot(const double* x, const double* y, std::size_t n) noexcept;
std::size_t iamax(const double* x, std::size_t n) noexcept;
}  // namespace neon
#endif

// Span conveniences over the active table.
inline void axpy(double alpha, std::span<const double> x, std::span<double> y,
                 const KernelTable& k = active()) {
  k.axpy(alpha, x.data(), y.data(), x.size());
}

inline double dot(std::span<const double> x, std::span<const double> y,
                  const KernelTable& k = active()) {
  return k.dot(x.data(), y.data(), x.size());
}

}  // namespace wgm::simd
