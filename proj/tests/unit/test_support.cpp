#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "generators.hpp"
#include "svlab/brownian.hpp"
#include "svlab/error.hpp"
#include "svlab/grid.hpp"
#include "svlab/numerics.hpp"

using namespace svlab;

TEST_CASE("grid geometry") {
  const GridSpec g(1.0, 64);
  CHECK(g.dx() * 64 == 2.0);
  CHECK(g.x(0) == doctest::Approx(-1.0 + g.dx() / 2));
  CHECK(g.face(63) == doctest::Approx(1.0));
  CHECK(g.wrap(-1) == 63);
  CHECK(g.wrap(64) == 0);
  const GridSpec d(1.0, 64, Boundary::dirichlet_zero);
  CHECK(d.wrap(-1) == -1);
  CHECK(d.wrap(64) == -1);
  const std::vector<double> u(64, 2.0);
  CHECK(d.shifted(u, 0, -1) == 0.0);
  CHECK(g.shifted(u, 0, -1) == 2.0);
  CHECK(g.cells_for(4 * g.dx(), "z") == 4);
  CHECK(g.cells_for(-3 * g.dx(), "z") == -3);
  CHECK_THROWS_AS(g.cells_for(0.3 * g.dx(), "z"), InvalidInput);
  CHECK_THROWS_AS(GridSpec(1.0, 8), InvalidInput);
  const auto w = g.interior(0.125);
  CHECK(g.x(w.begin) >= -0.875);
  CHECK(g.x(w.begin - 1) < -0.875);
  CHECK(g.x(w.end - 1) <= 0.875);
}

TEST_CASE("compensated sum recovers what naive summation loses") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  const std::vector<double> v{1e100, 1.0, -1e100, 1e-3};
  CHECK(compensated_total(v) == doctest::Approx(1.001).epsilon(1e-15));
}

TEST_CASE("mean and standard error") {
  const std::vector<double> one{3.0};
  CHECK(mean_and_error(one).mean == 3.0);
  CHECK(mean_and_error(one).std_err == 0.0);
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto m = mean_and_error(v);
  CHECK(m.mean == 2.5);
  CHECK(m.std_err == doctest::Approx(std::sqrt((2.25 + 0.25 + 0.25 + 2.25) / 3.0 / 4.0)));
}

TEST_CASE("adaptive quadrature against closed forms") {
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, -1.0, 1.0) ==
        doctest::Approx(std::atan(1.0) * 2).epsilon(1e-13));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("brownian increments are reproducible and have variance dt") {
  const auto a = brownian_increments(42, 20000, 0.01);
  const auto b = brownian_increments(42, 20000, 0.01);
  CHECK(a == b);
  CHECK(brownian_increments(43, 5, 0.01) != brownian_increments(42, 5, 0.01));
  double s = 0.0, s2 = 0.0;
  for (double x : a) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(a.size());
  CHECK(std::abs(s / n) < 4.0 * std::sqrt(0.01 / n));
  // var of the sample second moment is 2 dt^2 / n
  CHECK(std::abs(s2 / n - 0.01) < 5.0 * std::sqrt(2.0 / n) * 0.01);
}

TEST_CASE("bridge refinement passes through the coarse path") {
  testing::Gen gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen.index(1, 200);
    const double dt = gen.uniform(1e-4, 1e-1);
    const auto coarse = brownian_increments(gen.index(0, 1u << 30), n, dt);
    const auto fine = refine_increments(coarse, dt, static_cast<std::uint64_t>(trial));
    REQUIRE(fine.size() == 2 * n);
    const auto back = coarsen_increments(fine);
    for (std::size_t i = 0; i < n; ++i) {
      const double scale = std::abs(fine[2 * i]) + std::abs(fine[2 * i + 1]) + std::abs(coarse[i]);
      CHECK(std::abs(back[i] - coarse[i]) <= 4e-16 * scale);
    }
  }
}

TEST_CASE("bridge halves have variance dt/2 and the right correlation") {
  const double dt = 0.02;
  const std::size_t n = 40000;
  const auto coarse = brownian_increments(7, n, dt);
  const auto fine = refine_increments(coarse, dt, 8);
  double s_aa = 0.0, s_ab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s_aa += fine[2 * i] * fine[2 * i];
    s_ab += fine[2 * i] * fine[2 * i + 1];
  }
  // unconditionally the halves are independent N(0, dt/2)
  CHECK(std::abs(s_aa / n - dt / 2) < 5.0 * std::sqrt(2.0 / n) * dt / 2);
  CHECK(std::abs(s_ab / n) < 5.0 * dt / 2 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("seed mixing separates nearby seeds") {
  CHECK(mix_seed(0) != mix_seed(1));
  CHECK(path_seed(100, 3) == (100u ^ 3u));
  // xor with small member indices permutes a block of seeds: bases 0 and 1 share the set {0..7}
  std::vector<std::uint64_t> s0, s1;
  for (std::uint64_t m = 0; m < 8; ++m) {
    s0.push_back(path_seed(0, m));
    s1.push_back(path_seed(1, m));
  }
  std::sort(s0.begin(), s0.end());
  std::sort(s1.begin(), s1.end());
  CHECK(s0 == s1);
}
