#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "generators.hpp"
#include "svlab/error.hpp"
#include "svlab/weights.hpp"

using namespace svlab;

TEST_CASE("power weight closed forms") {
  const auto chi = make_power_weight(1.0);
  CHECK(chi.eval(0.0) == 1.0);
  CHECK(chi.eval(1.0) == 0.5);
  CHECK(chi.grad(1.0) == doctest::Approx(-0.5));
  // chi_1'' = (6x^2 - 2) / (1 + x^2)^3
  CHECK(chi.second(2.0) == doctest::Approx(22.0 / 125.0));
  CHECK_THROWS_AS(make_power_weight(0.5), InvalidInput);
  CHECK_THROWS_AS(make_power_weight(-1.0), InvalidInput);
}

TEST_CASE("measured c_chi equals N") {
  // max_x 2N|x| / (1 + x^2) = N, attained at |x| = 1
  for (double n : {1.0, 2.0, 4.0}) {
    const auto chi = make_power_weight(n);
    CHECK(std::abs(chi.c_chi() - n) <= 1e-6);
    CHECK(std::abs(chi.squared().c_chi() - 2.0 * n) <= 2e-6);
  }
}

TEST_CASE("l1 mass matches the Beta-function integral") {
  // int (1 + x^2)^{-N} dx = sqrt(pi) Gamma(N - 1/2) / Gamma(N)
  for (double n : {0.75, 1.0, 1.5, 2.0, 4.0}) {
    const double exact = std::sqrt(std::numbers::pi) * std::tgamma(n - 0.5) / std::tgamma(n);
    CHECK(make_power_weight(n).l1_mass() == doctest::Approx(exact).epsilon(1e-6));
  }
  CHECK(make_truncated_constant_weight(0.75).l1_mass() == doctest::Approx(1.5));
}

TEST_CASE("gradient bound holds at every grid point") {
  testing::Gen gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto chi = make_power_weight(gen.uniform(0.6, 5.0));
    const GridSpec g(gen.uniform(0.5, 50.0), 1024);
    for (std::size_t j = 0; j < g.n_cells(); ++j) {
      const double x = g.x(j);
      REQUIRE(chi.eval(x) > 0.0);
      REQUIRE(std::abs(chi.grad(x)) <= chi.c_chi() * chi.eval(x) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("weight property constants") {
  const GridSpec g(1.0, 256);
  const auto r1 = verify_weight_properties(make_power_weight(1.0), g, 1.0, 1.0);
  CHECK(std::isfinite(r1.shift_constant));
  CHECK(r1.shift_constant <= std::exp(1.0));
  CHECK(r1.ratio_constant <= 4.0);

  // grid-pair oracle for chi_2 from the closed form ((1 + y^2) / (1 + x^2))^2
  const auto r2 = verify_weight_properties(make_power_weight(2.0), g, 1.0, 1.0);
  double k2 = 0.0;
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    for (std::size_t j = 0; j < g.n_cells(); ++j) {
      if (std::abs(static_cast<double>(i) - static_cast<double>(j)) * g.dx() > 1.0 + 1e-12) continue;
      const double x = g.x(i), y = g.x(j);
      k2 = std::max(k2, std::pow((1.0 + y * y) / (1.0 + x * x), 2.0));
    }
  }
  CHECK(r2.ratio_constant == doctest::Approx(k2).epsilon(1e-12));

  const auto flat = verify_weight_properties(make_truncated_constant_weight(10.0), g, 0.5, 1.0);
  CHECK(flat.shift_constant == 0.0);
  CHECK(flat.ratio_constant == 1.0);
  CHECK_THROWS_AS(verify_weight_properties(make_power_weight(1.0), g, 2.0, 2.0), InvalidInput);
}

TEST_CASE("weighted Lp norm examples") {
  const auto chi = make_power_weight(1.0);
  const GridSpec g(1.0, 4096);
  CHECK(weighted_lp_norm(std::vector<double>(4096, 0.0), chi, 2.0, g) == 0.0);

  const GridSpec wide(200.0, 1 << 16);
  CHECK(weighted_lp_norm(std::vector<double>(wide.n_cells(), 1.0), chi, 1.0, wide) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-2));

  // int_{-L}^{L} x^2 / (1 + x^2) dx = 2L - 2 atan L
  std::vector<double> u(g.n_cells());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = g.x(j);
  const double exact = std::sqrt(2.0 - 2.0 * std::atan(1.0));
  CHECK(weighted_lp_norm(u, chi, 2.0, g) == doctest::Approx(exact).epsilon(1e-6));

  u[7] = std::nan("");
  CHECK_THROWS_AS(weighted_lp_norm(u, chi, 2.0, g), InvalidInput);
}

TEST_CASE("embedding inequality on random grid functions") {
  testing::Gen gen(22);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto chi = make_power_weight(gen.uniform(0.6, 4.0));
    const GridSpec g = gen.grid(Boundary::periodic);
    const auto u = gen.field(g, gen.uniform(0.1, 10.0));
    const double p = gen.uniform(1.0, 4.0);
    const double q = p + gen.uniform(0.1, 4.0);
    const double lhs = weighted_lp_norm(u, chi, p, g);
    const double rhs = weighted_lp_norm(u, chi, q, g) * std::pow(chi.l1_mass(), 1.0 / p - 1.0 / q);
    if (lhs > rhs * (1.0 + 1e-12)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("norm is monotone in the weight") {
  testing::Gen gen(23);
  for (int trial = 0; trial < 50; ++trial) {
    const GridSpec g = gen.grid(Boundary::periodic);
    const auto u = gen.field(g, 1.0);
    const double n = gen.uniform(0.6, 3.0);
    // chi_n >= chi_{n+1} pointwise
    CHECK(weighted_lp_norm(u, make_power_weight(n), 2.0, g) >= weighted_lp_norm(u, make_power_weight(n + 1), 2.0, g));
  }
}
