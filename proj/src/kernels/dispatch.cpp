#include <cstdlib>
#include <string_view>

#include "svlab/kernels.hpp"

namespace svlab::kernels {

#if defined(SVLAB_HAVE_AVX2)
const KernelTable* avx2_table_unchecked() noexcept;
#endif
#if defined(SVLAB_HAVE_NEON)
const KernelTable* neon_table_unchecked() noexcept;
#endif

const KernelTable* avx2_table() noexcept {
#if defined(SVLAB_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return avx2_table_unchecked();
#endif
  return nullptr;
}

const KernelTable* neon_table() noexcept {
#if defined(SVLAB_HAVE_NEON)
  return neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  const char* env = std::getenv("SVLAB_SIMD");
  const std::string_view want = env ? env : "";
  if (want == "scalar") return scalar_table();
  if (want.empty() || want == "avx2") {
    if (const auto* t = avx2_table()) return *t;
  }
  if (want.empty() || want == "neon") {
    if (const auto* t = neon_table()) return *t;
  }
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace svlab::kernels
