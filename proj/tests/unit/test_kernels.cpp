#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "generators.hpp"
#include "svlab/kernels.hpp"

using namespace svlab;
using namespace svlab::kernels;

namespace {

double flux_of(FluxKind kind, double u) {
  switch (kind) {
    case FluxKind::zero:
      return 0.0;
    case FluxKind::burgers:
      return 0.5 * u * u;
    case FluxKind::quartic:
      return 0.25 * u * u * u * u;
  }
  return 0.0;
}

double eo_oracle(FluxKind kind, double a, double b) {
  return flux_of(kind, std::max(a, 0.0)) + flux_of(kind, std::min(b, 0.0)) - flux_of(kind, 0.0);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const auto* t = avx2_table()) out.push_back(t);
  if (const auto* t = neon_table()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("scalar eo faces match the closed-form Engquist-Osher flux") {
  testing::Gen gen(11);
  for (FluxKind kind : {FluxKind::zero, FluxKind::burgers, FluxKind::quartic}) {
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 129u}) {
      const auto l = gen.vec(n, -3.0, 3.0);
      const auto r = gen.vec(n, -3.0, 3.0);
      std::vector<double> out(n);
      scalar_table().eo_faces(kind, l.data(), r.data(), out.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(eo_oracle(kind, l[i], r[i])).epsilon(1e-15));
    }
  }
}

TEST_CASE("scalar explicit update matches the written-out stencil") {
  testing::Gen gen(12);
  const std::size_t n = 37;
  const auto u = gen.vec(n + 2, -1.0, 1.0);
  const auto face = gen.vec(n + 1, -1.0, 1.0);
  const auto amp = gen.vec(n, -0.5, 0.5);
  std::vector<double> out(n);
  scalar_table().explicit_update(u.data() + 1, face.data(), amp.data(), 0.3, 0.2, 0.01, out.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = u[i + 1];
    const double expect = c - 0.3 * (face[i + 1] - face[i]) + 0.2 * (u[i + 2] - 2.0 * c + u[i]) + amp[i] * 0.01;
    CHECK(out[i] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("scalar reductions match naive sums") {
  testing::Gen gen(13);
  for (std::size_t n : {0u, 1u, 5u, 8u, 1001u}) {
    const auto a = gen.vec(n, -2.0, 2.0);
    const auto b = gen.vec(n, -2.0, 2.0);
    const auto w = gen.vec(n, 0.0, 1.0);
    for (int p = 1; p <= 6; ++p) {
      long double pd = 0.0L, ps = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        pd += std::pow(std::abs(static_cast<long double>(a[i]) - b[i]), p) * w[i];
        ps += std::pow(std::abs(static_cast<long double>(a[i])), p) * w[i];
      }
      CHECK(scalar_table().pow_diff_sum(a.data(), b.data(), w.data(), n, p) ==
            doctest::Approx(static_cast<double>(pd)).epsilon(1e-12));
      CHECK(scalar_table().pow_sum(a.data(), w.data(), n, p) == doctest::Approx(static_cast<double>(ps)).epsilon(1e-12));
    }
    long double d = 0.0L;
    for (std::size_t i = 0; i < n; ++i) d += static_cast<long double>(a[i]) * b[i];
    CHECK(scalar_table().dot(a.data(), b.data(), n) == doctest::Approx(static_cast<double>(d)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("every compiled variant is bit-identical to the scalar table") {
  const auto tables = variants();
  MESSAGE("variants: " << tables.size() << ", active: " << active().name);
  testing::Gen gen(14);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen.index(0, 300);
    const auto a = gen.vec(n + 2, -4.0, 4.0);
    const auto b = gen.vec(n + 2, -4.0, 4.0);
    const auto w = gen.vec(n + 2, 0.0, 1.0);
    const int p = static_cast<int>(gen.index(1, 7));
    const double lambda = gen.uniform(0.0, 0.5), nu = gen.uniform(0.0, 0.5), dw = gen.normal() * 0.05;
    for (const KernelTable* t : tables) {
      for (FluxKind kind : {FluxKind::zero, FluxKind::burgers, FluxKind::quartic}) {
        std::vector<double> ref(n + 1), got(n + 1);
        scalar_table().eo_faces(kind, a.data(), b.data(), ref.data(), n + 1);
        t->eo_faces(kind, a.data(), b.data(), got.data(), n + 1);
        for (std::size_t i = 0; i <= n; ++i) REQUIRE(same_bits(ref[i], got[i]));
      }
      std::vector<double> ref(n), got(n);
      scalar_table().explicit_update(a.data() + 1, b.data(), w.data(), lambda, nu, dw, ref.data(), n);
      t->explicit_update(a.data() + 1, b.data(), w.data(), lambda, nu, dw, got.data(), n);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(ref[i], got[i]));
      REQUIRE(same_bits(scalar_table().pow_diff_sum(a.data(), b.data(), w.data(), n, p),
                        t->pow_diff_sum(a.data(), b.data(), w.data(), n, p)));
      REQUIRE(same_bits(scalar_table().pow_sum(a.data(), w.data(), n, p), t->pow_sum(a.data(), w.data(), n, p)));
      REQUIRE(same_bits(scalar_table().dot(a.data(), b.data(), n), t->dot(a.data(), b.data(), n)));
    }
  }
}

TEST_CASE("active table is one of the compiled variants") {
  const auto tables = variants();
  const bool found = std::any_of(tables.begin(), tables.end(), [](const KernelTable* t) { return t == &active(); });
  CHECK(found);
}
