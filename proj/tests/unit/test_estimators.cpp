#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "generators.hpp"
#include "svlab/error.hpp"
#include "svlab/estimators.hpp"
#include "svlab/mollifiers.hpp"

using namespace svlab;

namespace {

std::vector<double> profile(const GridSpec& g, double (*f)(double)) {
  std::vector<double> u(g.n_cells());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = f(g.x(j));
  return u;
}

double interior_mass(const WeightFunction& chi, const GridSpec& g, GridSpec::Window w) {
  double s = 0.0;
  for (std::size_t j = w.begin; j < w.end; ++j) s += chi.eval(g.x(j)) * g.dx();
  return s;
}

std::vector<double> aligned(const GridSpec& g, std::initializer_list<int> cells) {
  std::vector<double> out;
  for (int c : cells) out.push_back(c * g.dx());
  return out;
}

std::vector<PathResult> random_ensemble(testing::Gen& gen, const GridSpec& g, std::size_t paths, std::size_t rows) {
  std::vector<PathResult> out;
  for (std::size_t m = 0; m < paths; ++m) {
    PathResult p = frozen_path(g, gen.field(g, 1.0), 1.0, rows - 1);
    for (std::size_t k = 1; k < rows; ++k) {
      const auto f = gen.field(g, 1.0);
      std::copy(f.begin(), f.end(), p.u.begin() + static_cast<std::ptrdiff_t>(k * g.n_cells()));
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

TEST_CASE("constant fields have vanishing moduli") {
  const GridSpec g(1.0, 128);
  const std::vector<PathResult> e{frozen_path(g, std::vector<double>(128, 0.7), 1.0, 10)};
  const auto chi = make_power_weight(1.0);
  const auto ds = aligned(g, {2, 4, 8});
  for (double v : spatial_sup_modulus(e, chi, ds).values) CHECK(v == 0.0);
  for (double v : mollified_modulus(e, chi, friedrichs_kernel(), ds).values) CHECK(v == 0.0);
  for (double v : power_modulus(e, chi, 4.0, ds).values) CHECK(v == 0.0);
  for (double v : temporal_sup_modulus(e, chi, std::vector<double>{0.1, 0.2}).values) CHECK(v == 0.0);
  for (const auto& r : sup_vs_mollified_consistency(e, chi, friedrichs_kernel(), ds)) CHECK(!r.has_value());
}

TEST_CASE("sup modulus of a Lipschitz profile") {
  const GridSpec g(1.0, 512);
  const std::vector<PathResult> e{frozen_path(g, profile(g, [](double x) { return x; }), 0.5, 10)};
  const auto chi = make_power_weight(1.0);
  const double mass = interior_mass(chi, g, g.interior(0.125));
  const auto ds = aligned(g, {1, 4, 8, 16, 32});  // up to L/16
  const auto c = spatial_sup_modulus(e, chi, ds);
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(c.values[i] == doctest::Approx(ds[i] * 0.5 * mass).epsilon(0.05));
  // below one cell there is no admissible shift
  const auto sk = spatial_sup_modulus(e, chi, std::vector<double>{0.5 * g.dx(), g.dx()});
  CHECK(sk.skipped.size() == 1);
  CHECK(sk.deltas.size() == 1);
}

TEST_CASE("sup modulus of a step profile") {
  const GridSpec g(1.0, 1024);
  const std::vector<PathResult> e{frozen_path(g, profile(g, [](double x) { return x > 0.0 ? 1.0 : 0.0; }), 1.0, 4)};
  const auto chi = make_power_weight(1.0);
  const auto ds = aligned(g, {2, 4, 8});
  const auto c = spatial_sup_modulus(e, chi, ds);
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(c.values[i] == doctest::Approx(ds[i] * chi.eval(0.0)).epsilon(0.05));
}

TEST_CASE("mollified modulus of a smooth profile against quadrature") {
  const GridSpec g(1.0, 1024);
  const double a = std::numbers::pi;
  const std::vector<PathResult> e{frozen_path(g, profile(g, [](double x) { return std::sin(std::numbers::pi * x); }), 1.0, 4)};
  const auto chi = make_power_weight(1.0);
  const auto w = g.interior(0.125);
  // |sin a(x+z) - sin a(x-z)| = 2 |cos ax| |sin az|; both factors by Gauss-Kronrod
  using boost::math::quadrature::gauss_kronrod;
  const double xs = gauss_kronrod<double, 61>::integrate(
      [&](double x) { return std::abs(std::cos(a * x)) * chi.eval(x); }, g.x(w.begin) - g.dx() / 2,
      g.x(w.end - 1) + g.dx() / 2, 15, 1e-12);
  std::vector<double> values;
  const auto ds = aligned(g, {16, 32});
  const auto c = mollified_modulus(e, chi, friedrichs_kernel(), ds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ApproximateIdentity j(friedrichs_kernel(), ds[i]);
    const double zs = gauss_kronrod<double, 61>::integrate(
        [&](double z) { return j(z) * 2.0 * std::abs(std::sin(a * z)); }, -ds[i], ds[i], 15, 1e-12);
    CHECK(c.values[i] == doctest::Approx(xs * zs).epsilon(0.02));
  }
  CHECK(c.values[1] / c.values[0] == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("power modulus slopes for smooth and step profiles") {
  const GridSpec g(1.0, 1024);
  const auto chi = make_power_weight(1.0);
  const auto zs = aligned(g, {1, 2, 4, 8, 16});
  const std::vector<PathResult> smooth{
      frozen_path(g, profile(g, [](double x) { return std::sin(std::numbers::pi * x); }), 1.0, 4)};
  const auto cs = power_modulus(smooth, chi, 4.0, zs);
  CHECK(fit_rate(cs, 0, cs.deltas.size()).slope == doctest::Approx(4.0).epsilon(0.1 / 4.0));
  const std::vector<PathResult> step{frozen_path(g, profile(g, [](double x) { return x > 0.0 ? 1.0 : 0.0; }), 1.0, 4)};
  const auto ct = power_modulus(step, chi, 4.0, zs);
  CHECK(std::abs(fit_rate(ct, 0, ct.deltas.size()).slope - 1.0) <= 0.1);
}

TEST_CASE("power modulus is symmetric in the shift on periodic grids") {
  testing::Gen gen(61);
  const auto flat = make_truncated_constant_weight(100.0);
  ModulusOptions full;
  full.margin = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const GridSpec g = gen.grid(Boundary::periodic);
    const auto e = random_ensemble(gen, g, 2, 3);
    const double z = static_cast<double>(gen.index(1, 8)) * g.dx();
    const double p = static_cast<double>(gen.index(1, 5));
    const double plus = power_modulus(e, flat, p, std::vector<double>{z}, full).values[0];
    const double minus = power_modulus(e, flat, p, std::vector<double>{-z}, full).values[0];
    CHECK(plus == doctest::Approx(minus).epsilon(1e-12));
  }
}

TEST_CASE("sup moduli are nondecreasing on random ensembles") {
  testing::Gen gen(62);
  const auto chi = make_power_weight(1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const GridSpec g(1.0, 64);
    const auto e = random_ensemble(gen, g, 3, 11);
    const auto s = spatial_sup_modulus(e, chi, aligned(g, {1, 2, 3, 5, 8}));
    const auto t = temporal_sup_modulus(e, chi, std::vector<double>{0.1, 0.2, 0.3, 0.5});
    for (std::size_t i = 1; i < s.values.size(); ++i) CHECK(s.values[i] >= s.values[i - 1]);
    for (std::size_t i = 1; i < t.values.size(); ++i) CHECK(t.values[i] >= t.values[i - 1]);
    s.validate();
    t.validate();
  }
}

TEST_CASE("temporal modulus of a heat path is first order") {
  auto f = make_zero_flux();
  const auto pair = make_entropy_pair(f, power_entropy(2.0));
  SolveConfig c;
  c.epsilon = 0.01;
  c.t_final = 1.0;
  c.n_steps = 1000;
  c.grid = GridSpec(1.0, 64);
  c.initial_condition = "sin2";
  const std::vector<PathResult> e{solve_path(f, make_zero_noise(), pair, c)};
  std::vector<double> ds;
  for (int i = 1; i <= 10; ++i) ds.push_back(0.01 * i);
  const auto t = temporal_sup_modulus(e, make_power_weight(1.0), ds);
  const auto fit = fit_rate(t, 0, t.deltas.size());
  CHECK(fit.slope >= 0.9);
  CHECK_THROWS_AS(temporal_sup_modulus(e, make_power_weight(1.0), std::vector<double>{0.5, 1.0}), InvalidInput);
  CHECK_THROWS_AS(temporal_sup_modulus(e, make_power_weight(1.0), std::vector<double>{0.0105}), InvalidInput);
}

TEST_CASE("log-log fits") {
  std::vector<double> x, y, y2, y3;
  testing::Gen gen(63);
  for (int i = 0; i < 20; ++i) {
    const double d = std::pow(10.0, -2.0 + 0.1 * i);
    x.push_back(d);
    y.push_back(3.0 * std::pow(d, 0.25));
    y2.push_back(d);
    y3.push_back(std::pow(d, 0.25) * (1.0 + 0.01 * gen.normal()));
  }
  const auto f = fit_loglog(x, y);
  CHECK(std::abs(f.slope - 0.25) <= 1e-10);
  CHECK(std::abs(f.intercept - std::log(3.0)) <= 1e-10);
  CHECK(std::abs(f.r_squared - 1.0) <= 1e-10);
  CHECK(std::abs(fit_loglog(x, y2).slope - 1.0) <= 1e-10);
  CHECK(std::abs(fit_loglog(x, y3).slope - 0.25) <= 0.02);
  y[3] = 0.0;
  CHECK_THROWS_AS(fit_loglog(x, y), InvalidInput);
  const auto [lo, hi] = fit_window(x, 0.0025, 0.4);
  CHECK(x[lo] >= 0.01);
  CHECK(x[hi - 1] <= 0.1);
}

TEST_CASE("Kruzkov interpolation") {
  const auto linear = [](double nu) { return nu; };
  CHECK(std::abs(kruzkov_rho_t(linear, 1, 1, 0, 2, 0, 1.0) - 3.0 * std::pow(2.0, -2.0 / 3.0)) <= 1e-6);
  for (double a : {1.0, 0.5, 0.25}) {
    std::vector<double> ds, rs;
    for (int i = 0; i <= 8; ++i) {
      ds.push_back(std::pow(10.0, -6.0 + 0.5 * i));
      rs.push_back(kruzkov_rho_t([a](double nu) { return std::pow(nu, a); }, 1, 1, 0, 2, 0, ds.back()));
    }
    CHECK(std::abs(fit_loglog(ds, rs).slope - a / (a + 2.0)) <= 0.005);
  }
  // with rho_x = 0 the infimum sits at the top of the search range, nu = 1e2
  CHECK(kruzkov_rho_t([](double) { return 0.0; }, 1, 1, 0, 2, 0, 0.1) == doctest::Approx(0.1 / 1e4).epsilon(1e-8));
  CHECK_THROWS_AS(kruzkov_rho_t([](double nu) { return std::sin(50.0 * nu); }, 1, 1, 1, 2, 0, 0.1), InvalidInput);
}

TEST_CASE("Hoelder consistency on random ensembles") {
  testing::Gen gen(64);
  const auto chi = make_power_weight(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const GridSpec g = gen.grid(Boundary::periodic);
    const auto e = random_ensemble(gen, g, 2, 5);
    const auto h = holder_consistency(e, chi, static_cast<double>(gen.index(1, 6)) * g.dx());
    CHECK(h.first_power <= h.bound + 1e-9);
  }
}

TEST_CASE("sup and mollified moduli stay comparable on a linear profile") {
  const GridSpec g(1.0, 512);
  const std::vector<PathResult> e{frozen_path(g, profile(g, [](double x) { return x; }), 1.0, 4)};
  const auto r = sup_vs_mollified_consistency(e, make_power_weight(1.0), friedrichs_kernel(), aligned(g, {2, 4, 8, 16, 32}));
  double lo = INFINITY, hi = 0.0;
  for (const auto& v : r) {
    REQUIRE(v.has_value());
    lo = std::min(lo, *v);
    hi = std::max(hi, *v);
  }
  CHECK(hi / lo <= 3.0);
}

TEST_CASE("exponent bookkeeping") {
  CHECK(mu_exponent(8.0) == 0.875);
  CHECK(mu_x_exponent(8.0, 1.0, 1.0) == 0.875 / 4.0);
  CHECK(mu_x_exponent(1e15, 1.0, 1.0) == doctest::Approx(0.25));
}
