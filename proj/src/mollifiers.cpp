#include "svlab/mollifiers.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "svlab/error.hpp"
#include "svlab/numerics.hpp"

namespace svlab {

namespace {

double raw_bump(double x) noexcept {
  const double s = 1.0 - x * x;
  return s <= 0.0 ? 0.0 : std::exp(-1.0 / s);
}

}  // namespace

FriedrichsKernel::FriedrichsKernel() : c_(1.0 / integrate(raw_bump, -1.0, 1.0, 1e-14)) {}

double FriedrichsKernel::operator()(double x) const noexcept { return c_ * raw_bump(x); }

double FriedrichsKernel::derivative(double x) const noexcept {
  const double s = 1.0 - x * x;
  if (s <= 0.0) return 0.0;
  return c_ * std::exp(-1.0 / s) * (-2.0 * x / (s * s));
}

FriedrichsKernel friedrichs_kernel() { return FriedrichsKernel{}; }

double DiscreteStencil::sum() const { return compensated_total(weights); }

ApproximateIdentity::ApproximateIdentity(FriedrichsKernel base, double delta) : base_(base), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("kernel scale delta must be positive");
}

double ApproximateIdentity::max_abs_derivative() const {
  // |J'| is even with a single interior maximum on (0, 1).
  double best_y = 0.0;
  double best = 0.0;
  constexpr int kScan = 4096;
  for (int i = 1; i < kScan; ++i) {
    const double y = static_cast<double>(i) / kScan;
    const double v = std::abs(base_.derivative(y));
    if (v > best) {
      best = v;
      best_y = y;
    }
  }
  const double lo = std::max(1e-12, best_y - 1.0 / kScan);
  const double hi = std::min(1.0 - 1e-12, best_y + 1.0 / kScan);
  const auto r = boost::math::tools::brent_find_minima([&](double y) { return -std::abs(base_.derivative(y)); },
                                                       lo, hi, 52);
  return std::max(best, -r.second) / (delta_ * delta_);
}

double ApproximateIdentity::tail_mass(double h) const {
  const double a = h / delta_;
  if (a >= 1.0) return 0.0;
  if (a <= -1.0) return 1.0;
  return 2.0 * integrate([&](double y) { return base_(y); }, std::max(a, 0.0), 1.0, 1e-13);
}

DiscreteStencil ApproximateIdentity::stencil(double dx) const {
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(support_radius() / dx));
  DiscreteStencil st;
  st.first = -reach;
  st.weights.resize(static_cast<std::size_t>(2 * reach + 1));
  for (std::ptrdiff_t s = -reach; s <= reach; ++s) {
    st.weights[static_cast<std::size_t>(s + reach)] = (*this)(static_cast<double>(s) * dx) * dx;
  }
  const double mass = st.sum();
  for (double& w : st.weights) w /= mass;
  return st;
}

std::vector<double> convolve(const ApproximateIdentity& kernel, std::span<const double> u, const GridSpec& grid) {
  if (u.size() != grid.n_cells()) throw InvalidInput("grid function size does not match the grid");
  if (kernel.delta() < grid.dx() * (1.0 - 1e-12)) {
    throw InvalidInput("kernel scale delta is below dx; the kernel is not resolved by the grid");
  }
  const DiscreteStencil st = kernel.stencil(grid.dx());
  std::vector<double> out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    double acc = 0.0;
    for (std::ptrdiff_t s = st.first; s <= st.last(); ++s) acc += st.at(s) * grid.shifted(u, j, -s);
    out[j] = acc;
  }
  return out;
}

DiscreteStencil kappa_kernel(const ApproximateIdentity& kernel, double z, const GridSpec& grid) {
  if (!(std::abs(z) < 1.0)) throw InvalidInput("kappa kernel needs |z| < 1");
  const std::ptrdiff_t shift = grid.cells_for(z, "shift z");
  const DiscreteStencil base = kernel.stencil(grid.dx());
  DiscreteStencil out;
  out.first = std::min(base.first, base.first - shift);
  const std::ptrdiff_t last = std::max(base.last(), base.last() - shift);
  out.weights.resize(static_cast<std::size_t>(last - out.first + 1));
  for (std::ptrdiff_t s = out.first; s <= last; ++s) {
    out.weights[static_cast<std::size_t>(s - out.first)] = base.at(s + shift) - base.at(s);
  }
  return out;
}

std::vector<double> shift_cells(std::span<const double> u, std::ptrdiff_t s, const GridSpec& grid) {
  std::vector<double> out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = grid.shifted(u, j, s);
  return out;
}

}  // namespace svlab
