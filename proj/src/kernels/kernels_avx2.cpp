// Compiled with -mavx2 only when the target is x86-64; selected at runtime.
#include <immintrin.h>

#include "lane_math.hpp"
#include "svlab/kernels.hpp"

namespace svlab::kernels {

namespace {

using namespace detail;

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// Same multiplication sequence as detail::ipow.
inline __m256d vipow(__m256d x, int p) {
  __m256d result = _mm256_set1_pd(1.0);
  __m256d base = x;
  while (p > 0) {
    if (p & 1) result = _mm256_mul_pd(result, base);
    p >>= 1;
    if (p > 0) base = _mm256_mul_pd(base, base);
  }
  return result;
}

// maxpd/minpd return the second operand on ties, matching (a > 0 ? a : 0).
inline __m256d vmax0(__m256d a) { return _mm256_max_pd(a, _mm256_setzero_pd()); }
inline __m256d vmin0(__m256d a) { return _mm256_min_pd(a, _mm256_setzero_pd()); }

inline double finish(__m256d acc, const double* a, const double* b, const double* w, std::size_t i, std::size_t n,
                     int power, bool diff) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (; i < n; ++i) {
    const double v = diff ? abs_of(a[i] - b[i]) : abs_of(a[i]);
    lanes[i & 3] += ipow(v, power) * w[i];
  }
  return combine_lanes(lanes);
}

void eo_faces_avx2(FluxKind kind, const double* left, const double* right, double* out, std::size_t n) {
  std::size_t i = 0;
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d quarter = _mm256_set1_pd(0.25);
  switch (kind) {
    case FluxKind::zero:
      for (; i < n; ++i) out[i] = 0.0;
      return;
    case FluxKind::burgers:
      for (; i + 4 <= n; i += 4) {
        const __m256d a = vmax0(_mm256_loadu_pd(left + i));
        const __m256d b = vmin0(_mm256_loadu_pd(right + i));
        const __m256d fa = _mm256_mul_pd(half, _mm256_mul_pd(a, a));
        const __m256d fb = _mm256_mul_pd(half, _mm256_mul_pd(b, b));
        _mm256_storeu_pd(out + i, _mm256_add_pd(fa, fb));
      }
      for (; i < n; ++i) out[i] = burgers_part(max0(left[i])) + burgers_part(min0(right[i]));
      return;
    case FluxKind::quartic:
      for (; i + 4 <= n; i += 4) {
        const __m256d a = vmax0(_mm256_loadu_pd(left + i));
        const __m256d b = vmin0(_mm256_loadu_pd(right + i));
        const __m256d a2 = _mm256_mul_pd(a, a);
        const __m256d b2 = _mm256_mul_pd(b, b);
        const __m256d fa = _mm256_mul_pd(quarter, _mm256_mul_pd(a2, a2));
        const __m256d fb = _mm256_mul_pd(quarter, _mm256_mul_pd(b2, b2));
        _mm256_storeu_pd(out + i, _mm256_add_pd(fa, fb));
      }
      for (; i < n; ++i) out[i] = quartic_part(max0(left[i])) + quartic_part(min0(right[i]));
      return;
  }
}

void explicit_update_avx2(const double* u, const double* face, const double* amp, double lambda, double nu,
                          double dw, double* out, std::size_t n) {
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d vn = _mm256_set1_pd(nu);
  const __m256d vdw = _mm256_set1_pd(dw);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d uc = _mm256_loadu_pd(u + i);
    const __m256d ur = _mm256_loadu_pd(u + i + 1);
    const __m256d ul = _mm256_loadu_pd(u + i - 1);
    const __m256d fr = _mm256_loadu_pd(face + i + 1);
    const __m256d fl = _mm256_loadu_pd(face + i);
    const __m256d transport = _mm256_sub_pd(uc, _mm256_mul_pd(vl, _mm256_sub_pd(fr, fl)));
    const __m256d lap = _mm256_add_pd(_mm256_sub_pd(ur, _mm256_mul_pd(two, uc)), ul);
    const __m256d diffusion = _mm256_mul_pd(vn, lap);
    const __m256d noise = _mm256_mul_pd(_mm256_loadu_pd(amp + i), vdw);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(transport, diffusion), noise));
  }
  for (; i < n; ++i) {
    const double transport = u[i] - lambda * (face[i + 1] - face[i]);
    const double diffusion = nu * ((u[i + 1] - 2.0 * u[i]) + u[i - 1]);
    out[i] = (transport + diffusion) + amp[i] * dw;
  }
}

double pow_diff_sum_avx2(const double* a, const double* b, const double* w, std::size_t n, int power) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vipow(d, power), _mm256_loadu_pd(w + i)));
  }
  return finish(acc, a, b, w, i, n, power, true);
}

double pow_sum_avx2(const double* a, const double* w, std::size_t n, int power) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = vabs(_mm256_loadu_pd(a + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vipow(d, power), _mm256_loadu_pd(w + i)));
  }
  return finish(acc, a, nullptr, w, i, n, power, false);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (; i < n; ++i) lanes[i & 3] += a[i] * b[i];
  return combine_lanes(lanes);
}

constexpr KernelTable kAvx2{"avx2", eo_faces_avx2, explicit_update_avx2, pow_diff_sum_avx2, pow_sum_avx2, dot_avx2};

}  // namespace

const KernelTable* avx2_table_unchecked() noexcept { return &kAvx2; }

}  // namespace svlab::kernels
