#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svlab/grid.hpp"

namespace svlab {

// Standard Friedrichs bump c * exp(-1 / (1 - x^2)) on (-1, 1), normalised to unit mass.
class FriedrichsKernel {
 public:
  FriedrichsKernel();

  double operator()(double x) const noexcept;
  double derivative(double x) const noexcept;
  double normalization() const noexcept { return c_; }
  static constexpr double support_radius() noexcept { return 1.0; }

 private:
  double c_;
};

FriedrichsKernel friedrichs_kernel();

// Kernel weights w_s for integer offsets s in [first, first + weights.size()).
struct DiscreteStencil {
  std::ptrdiff_t first = 0;
  std::vector<double> weights;

  std::ptrdiff_t last() const noexcept { return first + static_cast<std::ptrdiff_t>(weights.size()) - 1; }
  double at(std::ptrdiff_t s) const noexcept {
    const std::ptrdiff_t i = s - first;
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(weights.size())) ? 0.0 : weights[static_cast<std::size_t>(i)];
  }
  double sum() const;
};

// The rescaled family J_delta(x) = J(x / delta) / delta.
class ApproximateIdentity {
 public:
  ApproximateIdentity(FriedrichsKernel base, double delta);

  double delta() const noexcept { return delta_; }
  double operator()(double x) const noexcept { return base_(x / delta_) / delta_; }
  double derivative(double x) const noexcept { return base_.derivative(x / delta_) / (delta_ * delta_); }
  double support_radius() const noexcept { return FriedrichsKernel::support_radius() * delta_; }
  const FriedrichsKernel& base() const noexcept { return base_; }

  // max |J_delta'|, located on a fine grid and refined.
  double max_abs_derivative() const;

  // Mass of J_delta outside [-h, h], by quadrature.
  double tail_mass(double h) const;

  // Cell weights J_delta(s dx) dx for |s dx| < r_J delta, renormalised to unit sum.
  DiscreteStencil stencil(double dx) const;

 private:
  FriedrichsKernel base_;
  double delta_;
};

// (J_delta * u)_j = sum_s w_s u_{j-s}. Requires delta >= dx.
std::vector<double> convolve(const ApproximateIdentity& kernel, std::span<const double> u, const GridSpec& grid);

// kappa_{z,delta}(y) = J_delta(y + z) - J_delta(y) on grid offsets; z must be grid-aligned with |z| < 1.
// Built from the normalised stencil so its discrete mass vanishes exactly.
DiscreteStencil kappa_kernel(const ApproximateIdentity& kernel, double z, const GridSpec& grid);

// Circular shift on periodic grids, zero-filled shift on Dirichlet grids: out_j = u_{j+s}.
std::vector<double> shift_cells(std::span<const double> u, std::ptrdiff_t s, const GridSpec& grid);

}  // namespace svlab
