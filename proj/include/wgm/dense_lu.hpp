#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wgm/simd/kernels.hpp"

namespace wgm {

// Column-major LU factorization with partial pivoting. Every inner loop is a
// contiguous column operation routed through the SIMD kernel table.
class DenseLu {
public:
  // `columns` holds an n x n matrix in column-major order and is consumed.
  DenseLu(std::size_t n, std::vector<double> columns,
          const simd::KernelTable& kernels = simd::active());

  std::size_t size() const noexcept { return n_; }

  // Smallest |pivot| / largest |pivot|; a cheap conditioning indicator.
  double pivot_ratio() const noexcept { return pivot_ratio_; }

  // Solves A x = b in place.
  void solve(std::span<double> b) const;

private:
  std::size_t n_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
  const simd::KernelTable* k_;
  double pivot_ratio_ = 0.0;
};

}  // namespace wgm
