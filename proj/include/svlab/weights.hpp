#pragma once

#include <span>
#include <string>
#include <vector>

#include "svlab/grid.hpp"

namespace svlab {

// A positive integrable weight chi with |chi'| <= c_chi * chi.
//
// Two families are provided: the algebraic weights (1 + x^2)^{-N} and a
// constant weight truncated to a finite interval (useful as a degenerate
// reference). Both carry closed-form first and second derivatives.
class WeightFunction {
 public:
  enum class Family { power, truncated_constant };

  double eval(double x) const noexcept;
  double grad(double x) const noexcept;
  double second(double x) const noexcept;

  double c_chi() const noexcept { return c_chi_; }
  double l1_mass() const noexcept { return l1_mass_; }
  Family family() const noexcept { return family_; }
  double parameter() const noexcept { return parameter_; }
  std::string name() const;

  // chi^2, which stays in the weight class with constant 2 c_chi.
  WeightFunction squared() const;

  // Values at every cell centre of the grid.
  std::vector<double> sample(const GridSpec& grid) const;

 private:
  friend WeightFunction make_power_weight(double n);
  friend WeightFunction make_truncated_constant_weight(double half_width);

  WeightFunction(Family family, double parameter) : family_(family), parameter_(parameter) {}

  Family family_;
  double parameter_;
  double c_chi_ = 0.0;
  double l1_mass_ = 0.0;
};

// chi_N(x) = (1 + x^2)^{-N}. Requires N > 1/2 for integrability on the line.
WeightFunction make_power_weight(double n);

// chi = 1 on [-half_width, half_width]; l1_mass = 2 * half_width.
WeightFunction make_truncated_constant_weight(double half_width);

// Half-width and resolution of the reference grid used to measure weight constants.
inline constexpr double kWeightReferenceHalfWidth = 100.0;
inline constexpr std::size_t kWeightReferencePoints = std::size_t{1} << 14;

struct WeightPropertyReport {
  double shift_constant;  // K1: max |chi(x+z) - chi(x)| / (chi(x) |z|)
  double ratio_constant;  // K2: max chi(x) / chi(y) over |x - y| <= R
};

// Measures both constants over grid centres and grid-aligned shifts |z| <= z_max.
// Throws PropertyViolation when either ratio is not finite.
WeightPropertyReport verify_weight_properties(const WeightFunction& chi, const GridSpec& grid, double z_max,
                                              double radius);

// (sum_j |u_j|^p chi(x_j) dx)^{1/p} over the window (midpoint rule).
double weighted_lp_norm(std::span<const double> u, const WeightFunction& chi, double p, const GridSpec& grid);
double weighted_lp_norm(std::span<const double> u, const WeightFunction& chi, double p, const GridSpec& grid,
                        GridSpec::Window window);

}  // namespace svlab
