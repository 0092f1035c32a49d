#pragma once

// Scalar helpers shared by every kernel variant so tails and lane combines
// round the same way everywhere.

#include <cmath>
#include <cstddef>

namespace svlab::kernels::detail {

inline double max0(double a) noexcept { return a > 0.0 ? a : 0.0; }
inline double min0(double a) noexcept { return a < 0.0 ? a : 0.0; }
inline double abs_of(double a) noexcept { return std::fabs(a); }

inline double ipow(double x, int p) noexcept {
  double result = 1.0;
  double base = x;
  while (p > 0) {
    if (p & 1) result *= base;
    p >>= 1;
    if (p > 0) base *= base;
  }
  return result;
}

inline double burgers_part(double v) noexcept { return 0.5 * (v * v); }
inline double quartic_part(double v) noexcept {
  const double sq = v * v;
  return 0.25 * (sq * sq);
}

inline double combine_lanes(const double lanes[4]) noexcept { return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]); }

}  // namespace svlab::kernels::detail
