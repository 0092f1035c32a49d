// AArch64 only. Two float64x2 accumulators emulate the four reduction lanes.
#include <arm_neon.h>

#include "lane_math.hpp"
#include "svlab/kernels.hpp"

namespace svlab::kernels {

namespace {

using namespace detail;

inline float64x2_t vipow(float64x2_t x, int p) {
  float64x2_t result = vdupq_n_f64(1.0);
  float64x2_t base = x;
  while (p > 0) {
    if (p & 1) result = vmulq_f64(result, base);
    p >>= 1;
    if (p > 0) base = vmulq_f64(base, base);
  }
  return result;
}

inline float64x2_t vmax0(float64x2_t a) {
  const float64x2_t z = vdupq_n_f64(0.0);
  return vbslq_f64(vcgtq_f64(a, z), a, z);
}
inline float64x2_t vmin0(float64x2_t a) {
  const float64x2_t z = vdupq_n_f64(0.0);
  return vbslq_f64(vcltq_f64(a, z), a, z);
}

void eo_faces_neon(FluxKind kind, const double* left, const double* right, double* out, std::size_t n) {
  std::size_t i = 0;
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t quarter = vdupq_n_f64(0.25);
  switch (kind) {
    case FluxKind::zero:
      for (; i < n; ++i) out[i] = 0.0;
      return;
    case FluxKind::burgers:
      for (; i + 2 <= n; i += 2) {
        const float64x2_t a = vmax0(vld1q_f64(left + i));
        const float64x2_t b = vmin0(vld1q_f64(right + i));
        vst1q_f64(out + i, vaddq_f64(vmulq_f64(half, vmulq_f64(a, a)), vmulq_f64(half, vmulq_f64(b, b))));
      }
      for (; i < n; ++i) out[i] = burgers_part(max0(left[i])) + burgers_part(min0(right[i]));
      return;
    case FluxKind::quartic:
      for (; i + 2 <= n; i += 2) {
        const float64x2_t a = vmax0(vld1q_f64(left + i));
        const float64x2_t b = vmin0(vld1q_f64(right + i));
        const float64x2_t a2 = vmulq_f64(a, a);
        const float64x2_t b2 = vmulq_f64(b, b);
        vst1q_f64(out + i, vaddq_f64(vmulq_f64(quarter, vmulq_f64(a2, a2)), vmulq_f64(quarter, vmulq_f64(b2, b2))));
      }
      for (; i < n; ++i) out[i] = quartic_part(max0(left[i])) + quartic_part(min0(right[i]));
      return;
  }
}

void explicit_update_neon(const double* u, const double* face, const double* amp, double lambda, double nu,
                          double dw, double* out, std::size_t n) {
  const float64x2_t vl = vdupq_n_f64(lambda);
  const float64x2_t vn = vdupq_n_f64(nu);
  const float64x2_t vdw = vdupq_n_f64(dw);
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t uc = vld1q_f64(u + i);
    const float64x2_t transport = vsubq_f64(uc, vmulq_f64(vl, vsubq_f64(vld1q_f64(face + i + 1), vld1q_f64(face + i))));
    const float64x2_t lap = vaddq_f64(vsubq_f64(vld1q_f64(u + i + 1), vmulq_f64(two, uc)), vld1q_f64(u + i - 1));
    const float64x2_t noise = vmulq_f64(vld1q_f64(amp + i), vdw);
    vst1q_f64(out + i, vaddq_f64(vaddq_f64(transport, vmulq_f64(vn, lap)), noise));
  }
  for (; i < n; ++i) {
    const double transport = u[i] - lambda * (face[i + 1] - face[i]);
    const double diffusion = nu * ((u[i + 1] - 2.0 * u[i]) + u[i - 1]);
    out[i] = (transport + diffusion) + amp[i] * dw;
  }
}

template <bool Diff>
double reduce_neon(const double* a, const double* b, const double* w, std::size_t n, int power) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t d01 = vld1q_f64(a + i);
    float64x2_t d23 = vld1q_f64(a + i + 2);
    if constexpr (Diff) {
      d01 = vsubq_f64(d01, vld1q_f64(b + i));
      d23 = vsubq_f64(d23, vld1q_f64(b + i + 2));
    }
    acc01 = vaddq_f64(acc01, vmulq_f64(vipow(vabsq_f64(d01), power), vld1q_f64(w + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vipow(vabsq_f64(d23), power), vld1q_f64(w + i + 2)));
  }
  double lanes[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1), vgetq_lane_f64(acc23, 0),
                     vgetq_lane_f64(acc23, 1)};
  for (; i < n; ++i) {
    const double v = Diff ? abs_of(a[i] - b[i]) : abs_of(a[i]);
    lanes[i & 3] += ipow(v, power) * w[i];
  }
  return combine_lanes(lanes);
}

double pow_diff_sum_neon(const double* a, const double* b, const double* w, std::size_t n, int power) {
  return reduce_neon<true>(a, b, w, n, power);
}

double pow_sum_neon(const double* a, const double* w, std::size_t n, int power) {
  return reduce_neon<false>(a, nullptr, w, n, power);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double lanes[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1), vgetq_lane_f64(acc23, 0),
                     vgetq_lane_f64(acc23, 1)};
  for (; i < n; ++i) lanes[i & 3] += a[i] * b[i];
  return combine_lanes(lanes);
}

constexpr KernelTable kNeon{"neon", eo_faces_neon, explicit_update_neon, pow_diff_sum_neon, pow_sum_neon, dot_neon};

}  // namespace

const KernelTable* neon_table_unchecked() noexcept { return &kNeon; }

}  // namespace svlab::kernels
