#include "svlab/weights.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <sstream>

#include "svlab/error.hpp"
#include "svlab/numerics.hpp"

namespace svlab {

namespace {

// max |chi'| / chi over the reference grid, then refined around the best node.
double measure_gradient_constant(const WeightFunction& chi) {
  const double a = -kWeightReferenceHalfWidth;
  const double h = 2.0 * kWeightReferenceHalfWidth / static_cast<double>(kWeightReferencePoints);
  auto ratio = [&](double x) { return std::abs(chi.grad(x)) / chi.eval(x); };
  double best = 0.0;
  double best_x = 0.0;
  for (std::size_t i = 0; i <= kWeightReferencePoints; ++i) {
    const double x = a + static_cast<double>(i) * h;
    const double r = ratio(x);
    if (r > best) {
      best = r;
      best_x = x;
    }
  }
  if (best == 0.0) return 0.0;
  const double lo = std::max(a, best_x - h);
  const double hi = std::min(-a, best_x + h);
  const auto [x_star, neg] = boost::math::tools::brent_find_minima([&](double x) { return -ratio(x); }, lo, hi, 52);
  (void)x_star;
  return std::max(best, -neg);
}

}  // namespace

double WeightFunction::eval(double x) const noexcept {
  if (family_ == Family::truncated_constant) return 1.0;
  return std::pow(1.0 + x * x, -parameter_);
}

double WeightFunction::grad(double x) const noexcept {
  if (family_ == Family::truncated_constant) return 0.0;
  const double n = parameter_;
  return -2.0 * n * x * std::pow(1.0 + x * x, -n - 1.0);
}

double WeightFunction::second(double x) const noexcept {
  if (family_ == Family::truncated_constant) return 0.0;
  const double n = parameter_;
  const double s = 1.0 + x * x;
  // d/dx [-2N x s^{-N-1}] = -2N s^{-N-1} + 4N(N+1) x^2 s^{-N-2}
  return -2.0 * n * std::pow(s, -n - 1.0) + 4.0 * n * (n + 1.0) * x * x * std::pow(s, -n - 2.0);
}

std::string WeightFunction::name() const {
  std::ostringstream os;
  if (family_ == Family::power) {
    os << "power(N=" << parameter_ << ")";
  } else {
    os << "constant(L=" << parameter_ << ")";
  }
  return os.str();
}

WeightFunction WeightFunction::squared() const {
  if (family_ == Family::power) return make_power_weight(2.0 * parameter_);
  return *this;
}

std::vector<double> WeightFunction::sample(const GridSpec& grid) const {
  std::vector<double> w(grid.n_cells());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = eval(grid.x(j));
  return w;
}

WeightFunction make_power_weight(double n) {
  if (!(n > 0.5) || !std::isfinite(n)) {
    std::ostringstream os;
    os << "power weight exponent N = " << n << " is not integrable on the line (need N > 1/2)";
    throw InvalidInput(os.str());
  }
  WeightFunction chi(WeightFunction::Family::power, n);
  chi.c_chi_ = measure_gradient_constant(chi);

  const double x_max = kWeightReferenceHalfWidth;
  double core = 0.0;
  for (double lo = -x_max; lo < x_max; lo += 10.0) {
    core += integrate([&](double x) { return chi.eval(x); }, lo, lo + 10.0);
  }
  // (1 + x^2)^{-N} = x^{-2N} (1 - N x^{-2} + ...) beyond x_max
  const double tail = std::pow(x_max, 1.0 - 2.0 * n) / (2.0 * n - 1.0) -
                      n * std::pow(x_max, -1.0 - 2.0 * n) / (2.0 * n + 1.0);
  chi.l1_mass_ = core + 2.0 * tail;
  return chi;
}

WeightFunction make_truncated_constant_weight(double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidInput("truncated constant weight needs a positive finite half width");
  }
  WeightFunction chi(WeightFunction::Family::truncated_constant, half_width);
  chi.c_chi_ = 0.0;
  chi.l1_mass_ = 2.0 * half_width;
  return chi;
}

WeightPropertyReport verify_weight_properties(const WeightFunction& chi, const GridSpec& grid, double z_max,
                                              double radius) {
  if (!(z_max > 0.0) || z_max > 1.0) throw InvalidInput("z_max must lie in (0, 1]");
  if (radius < z_max) throw InvalidInput("radius R must be at least z_max");

  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  const auto xs = grid.centres();
  const auto values = chi.sample(grid);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(values[j] > 0.0) || !std::isfinite(values[j])) {
      throw PropertyViolation("weight is not positive at x = " + std::to_string(xs[j]));
    }
  }

  const auto max_shift = static_cast<std::ptrdiff_t>(std::floor(z_max / dx * (1.0 + 1e-12)));
  double k1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::ptrdiff_t s = -max_shift; s <= max_shift; ++s) {
      if (s == 0) continue;
      const double z = static_cast<double>(s) * dx;
      const double r = std::abs(chi.eval(xs[j] + z) - values[j]) / (values[j] * std::abs(z));
      k1 = std::max(k1, r);
    }
  }

  const auto reach = static_cast<std::ptrdiff_t>(std::floor(radius / dx * (1.0 + 1e-12)));
  double k2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - reach);
    const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1, static_cast<std::ptrdiff_t>(i) + reach);
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      k2 = std::max(k2, values[i] / values[static_cast<std::size_t>(j)]);
    }
  }

  if (!std::isfinite(k1) || !std::isfinite(k2)) {
    throw PropertyViolation("weight " + chi.name() + " is not in the weight class: non-finite ratio constants");
  }
  return {k1, k2};
}

double weighted_lp_norm(std::span<const double> u, const WeightFunction& chi, double p, const GridSpec& grid) {
  return weighted_lp_norm(u, chi, p, grid, grid.full());
}

double weighted_lp_norm(std::span<const double> u, const WeightFunction& chi, double p, const GridSpec& grid,
                        GridSpec::Window window) {
  if (u.size() != grid.n_cells()) throw InvalidInput("grid function size does not match the grid");
  if (!(p >= 1.0)) throw InvalidInput("weighted L^p norm needs p >= 1");
  CompensatedSum acc;
  for (std::size_t j = window.begin; j < window.end; ++j) {
    if (!std::isfinite(u[j])) throw InvalidInput("grid function has a non-finite entry at cell " + std::to_string(j));
    acc.add(std::pow(std::abs(u[j]), p) * chi.eval(grid.x(j)));
  }
  return std::pow(acc.value() * grid.dx(), 1.0 / p);
}

}  // namespace svlab
