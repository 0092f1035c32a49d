#include "lane_math.hpp"
#include "svlab/kernels.hpp"

namespace svlab::kernels {

namespace {

using namespace detail;

void eo_faces_scalar(FluxKind kind, const double* left, const double* right, double* out, std::size_t n) {
  switch (kind) {
    case FluxKind::zero:
      for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
      return;
    case FluxKind::burgers:
      for (std::size_t i = 0; i < n; ++i) out[i] = burgers_part(max0(left[i])) + burgers_part(min0(right[i]));
      return;
    case FluxKind::quartic:
      for (std::size_t i = 0; i < n; ++i) out[i] = quartic_part(max0(left[i])) + quartic_part(min0(right[i]));
      return;
  }
}

void explicit_update_scalar(const double* u, const double* face, const double* amp, double lambda, double nu,
                            double dw, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double transport = u[i] - lambda * (face[i + 1] - face[i]);
    const double diffusion = nu * ((u[i + 1] - 2.0 * u[i]) + u[i - 1]);
    out[i] = (transport + diffusion) + amp[i] * dw;
  }
}

double pow_diff_sum_scalar(const double* a, const double* b, const double* w, std::size_t n, int power) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lanes[i & 3] += ipow(abs_of(a[i] - b[i]), power) * w[i];
  return combine_lanes(lanes);
}

double pow_sum_scalar(const double* a, const double* w, std::size_t n, int power) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lanes[i & 3] += ipow(abs_of(a[i]), power) * w[i];
  return combine_lanes(lanes);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lanes[i & 3] += a[i] * b[i];
  return combine_lanes(lanes);
}

constexpr KernelTable kScalar{"scalar", eo_faces_scalar, explicit_update_scalar, pow_diff_sum_scalar,
                              pow_sum_scalar, dot_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace svlab::kernels
