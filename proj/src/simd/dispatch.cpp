#include <cstdlib>
#include <stdexcept>
#include <string>

#include "wgm/simd/kernels.hpp"

namespace wgm::simd {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::axpy, &scalar::scal, &scalar::dot,
                              &scalar::iamax};
#if defined(WGM_SIMD_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::axpy, &avx2::scal, &avx2::dot, &avx2::iamax};
#endif
#if defined(WGM_SIMD_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::axpy, &neon::scal, &neon::dot, &neon::iamax};
#endif

const KernelTable& select() {
  if (const char* env = std::getenv("WGMENT_SIMD"); env != nullptr && *env != '\0') {
    const std::string want(env);
    if (want == "scalar") return kScalar;
    if (want == "avx2" && supported(Isa::avx2)) return table(Isa::avx2);
    if (want == "neon" && supported(Isa::neon)) return table(Isa::neon);
    // unknown or unsupported request falls through to auto-detection
  }
  if (supported(Isa::avx2)) return table(Isa::avx2);
  if (supported(Isa::neon)) return table(Isa::neon);
  return kScalar;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(WGM_SIMD_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(WGM_SIMD_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("SIMD variant not available: " + std::string(to_string(isa)));
  }
  switch (isa) {
#if defined(WGM_SIMD_HAVE_AVX2)
    case Isa::avx2: return kAvx2;
#endif
#if defined(WGM_SIMD_HAVE_NEON)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::scalar};
  if (supported(Isa::avx2)) out.push_back(Isa::avx2);
  if (supported(Isa::neon)) out.push_back(Isa::neon);
  return out;
}

}  // namespace wgm::simd
