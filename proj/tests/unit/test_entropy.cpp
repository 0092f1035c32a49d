#include <doctest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "svlab/entropy.hpp"
#include "svlab/error.hpp"

using namespace svlab;

namespace {

EntropyPair burgers_pair() {
  const auto f = make_burgers();
  return make_entropy_pair(f, entropy_same_as_flux(f));
}

}  // namespace

TEST_CASE("Burgers flux") {
  const auto f = make_burgers();
  CHECK(f.f(2.0) == 2.0);
  CHECK(f.f_prime(-3.0) == -3.0);
  CHECK(f.c_f == 1.0);
  CHECK(f.p_f == 1.0);
  CHECK(measure_nonlinearity(f.f_prime, 1.0, Lattice{}.points()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Engquist-Osher flux is consistent and monotone") {
  const auto f = make_burgers();
  CHECK(f.engquist_osher(1.0, 2.0) == 0.5);
  CHECK(f.engquist_osher(-1.0, -2.0) == 2.0);
  testing::Gen gen(41);
  for (const auto& flux : {make_burgers(), make_quartic()}) {
    for (int trial = 0; trial < 500; ++trial) {
      const double a = gen.uniform(-3, 3), b = gen.uniform(-3, 3), d = gen.uniform(0, 0.5);
      CHECK(flux.engquist_osher(a, a) == doctest::Approx(flux.f(a)).epsilon(1e-14));
      CHECK(flux.engquist_osher(a + d, b) >= flux.engquist_osher(a, b));
      CHECK(flux.engquist_osher(a, b + d) <= flux.engquist_osher(a, b));
    }
  }
}

TEST_CASE("entropy flux against closed-form antiderivatives") {
  const auto pair = burgers_pair();
  CHECK(pair.q(0.0) == 0.0);
  CHECK(pair.q(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  testing::Gen gen(42);
  for (int trial = 0; trial < 200; ++trial) {
    const double u = gen.uniform(-8.0, 8.0);
    CHECK(std::abs(pair.q(u) - u * u * u / 3.0) <= 1e-9 * std::max(1.0, std::abs(u * u * u)));
  }
  // outside the tabulated lattice q is integrated directly
  CHECK(pair.q(10.0) == doctest::Approx(1000.0 / 3.0).epsilon(1e-10));

  const auto f = make_burgers();
  const auto lin = make_entropy_pair(f, linear_entropy());
  for (double u : {-2.5, -1.0, 0.0, 0.3, 4.0}) CHECK(std::abs(lin.q(u) - 0.5 * u * u) <= 1e-9);
}

TEST_CASE("entropy flux derivative matches eta' f'") {
  for (const auto& flux : {make_burgers(), make_quartic()}) {
    const auto pair = make_entropy_pair(flux, entropy_same_as_flux(flux));
    const double h = 1e-5;
    for (double u : Lattice{4.0, 0.25}.points()) {
      const double fd = (pair.q(u + h) - pair.q(u - h)) / (2 * h);
      const double exact = pair.eta_prime(u) * flux.f_prime(u);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("Burgers defect is (w - v)^4 / 12 on the lattice") {
  const auto f = make_burgers();
  const auto pair = burgers_pair();
  CHECK(interaction_defect(f, pair, 0.0, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(interaction_defect(f, pair, -3.0, 2.0) == doctest::Approx(625.0 / 12.0).epsilon(1e-12));
  CHECK(interaction_defect(f, pair, 1.7, 1.7) == 0.0);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int k = 0; k <= 100; ++k) {
      const double v = -5.0 + 0.1 * i, w = -5.0 + 0.1 * k;
      worst = std::max(worst, std::abs(interaction_defect(f, pair, v, w) - std::pow(w - v, 4) / 12.0));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("defect is symmetric and anchor invariant") {
  testing::Gen gen(43);
  for (const auto& flux : {make_burgers(), make_quartic()}) {
    const auto pair = make_entropy_pair(flux, entropy_same_as_flux(flux));
    const auto shifted = make_entropy_pair(flux, entropy_same_as_flux(flux), Lattice{}, 5.0);
    CHECK(shifted.q(0.0) == 5.0);
    for (int trial = 0; trial < 300; ++trial) {
      const double v = gen.uniform(-4, 4), w = gen.uniform(-4, 4);
      const double d = interaction_defect(flux, pair, v, w);
      CHECK(d == interaction_defect(flux, pair, w, v));
      // the anchor cancels in q(w) - q(v); only rounding of the larger q values remains
      const double scale = std::abs(w - v) * (std::abs(pair.q(w)) + std::abs(pair.q(v)) + 10.0);
      CHECK(std::abs(interaction_defect(flux, shifted, v, w) - d) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("lemma constant and lattice verification") {
  const auto f = make_burgers();
  const auto pair = burgers_pair();
  CHECK(lemma_constant(f, pair.functions) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  const auto report = verify_lemma_bound(f, pair, Lattice{5.0, 0.1}.points());
  CHECK(std::abs(report.min_ratio - 1.0 / 12.0) <= 1e-9);
  CHECK(report.exponent == 4.0);

  // the quartic flux has inf (v^3 - w^3) / (v - w)^3 = 1/4, attained at v = -w
  const auto quartic = make_quartic();
  CHECK(quartic.c_f == doctest::Approx(0.25).epsilon(1e-9));
  const auto qpair = make_entropy_pair(quartic, entropy_same_as_flux(quartic));
  const auto qreport = verify_lemma_bound(quartic, qpair, Lattice{2.0, 0.1}.points());
  CHECK(qreport.lemma_constant == doctest::Approx(quartic.c_f * qpair.functions.c_eta / 56.0));
  CHECK(qreport.min_ratio >= qreport.lemma_constant - 1e-9);
}

TEST_CASE("degenerate and inconsistent declarations are rejected") {
  const auto f = make_burgers();
  const auto lin = make_entropy_pair(f, linear_entropy());
  CHECK_THROWS_AS(verify_lemma_bound(f, lin, Lattice{5.0, 0.1}.points()), PropertyViolation);

  auto overclaimed = make_burgers();
  overclaimed.c_f = 2.0;
  CHECK_THROWS_AS(verify_lemma_bound(overclaimed, burgers_pair(), Lattice{5.0, 0.1}.points()), PropertyViolation);
  CHECK_THROWS_AS(entropy_same_as_flux(make_zero_flux()), InvalidInput);
  CHECK_THROWS_AS(power_entropy(1.5), InvalidInput);
}

TEST_CASE("power entropy constants") {
  // eta = |u|^4: (eta'(v) - eta'(w)) / (v - w)^3 = 4 (v^3 - w^3) / (v - w)^3 >= 1
  const auto e = power_entropy(4.0);
  CHECK(e.p_eta == 3.0);
  CHECK(e.c_eta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e.eta(-2.0) == 16.0);
  const auto pair = make_entropy_pair(make_burgers(), e);
  CHECK(std::isfinite(pair.growth_constant));
  CHECK(pair.growth_constant > 0.0);
}
