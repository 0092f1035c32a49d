#pragma once

#include <cstddef>
#include <string_view>

namespace svlab::kernels {

// Flux families with vectorised Engquist-Osher face fluxes (sonic point at 0).
enum class FluxKind { zero, burgers, quartic };

// Inner loops shared by the solver and the estimators.
//
// Every table produces bit-identical results: reductions accumulate in four
// interleaved lanes (element i goes to lane i mod 4) that are combined as
// (l0 + l1) + (l2 + l3), and elementwise expressions use one fixed operation
// order. The build disables FMA contraction so the scalar table can serve as
// the reference for the SIMD ones.
struct KernelTable {
  std::string_view name;

  // out[i] = EO flux between left[i] and right[i].
  void (*eo_faces)(FluxKind kind, const double* left, const double* right, double* out, std::size_t n);

  // Explicit Euler-Maruyama update of n cells:
  //   out[i] = (u[i] - lambda (face[i+1] - face[i])) + nu ((u[i+1] - 2 u[i]) + u[i-1]) + amp[i] dw
  // where u points at the first interior cell of an array padded with one ghost on each side
  // and face has n + 1 entries.
  void (*explicit_update)(const double* u, const double* face, const double* amp, double lambda, double nu,
                          double dw, double* out, std::size_t n);

  // sum_i |a[i] - b[i]|^power * w[i] for an integer power >= 1.
  double (*pow_diff_sum)(const double* a, const double* b, const double* w, std::size_t n, int power);

  // sum_i |a[i]|^power * w[i] for an integer power >= 1.
  double (*pow_sum)(const double* a, const double* w, std::size_t n, int power);

  // sum_i a[i] * b[i].
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks the instructions.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

// The table used by the library. Chosen once from the CPU features; the
// environment variable SVLAB_SIMD=scalar|avx2|neon overrides the choice.
const KernelTable& active() noexcept;

}  // namespace svlab::kernels
