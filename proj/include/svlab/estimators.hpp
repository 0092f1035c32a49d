#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svlab/grid.hpp"
#include "svlab/mollifiers.hpp"
#include "svlab/spde_solver.hpp"
#include "svlab/weights.hpp"

namespace svlab {

enum class ModulusKind { spatial_sup, spatial_mollified, temporal_sup, power };

std::string to_string(ModulusKind kind);

// Monte Carlo modulus of continuity sampled at increasing scales.
struct ModulusCurve {
  ModulusKind kind = ModulusKind::spatial_sup;
  double power = 1.0;
  std::string label;
  std::vector<double> deltas;
  std::vector<double> values;
  std::vector<double> std_errs;
  std::vector<double> skipped;  // requested scales with no admissible shift
  std::size_t n_paths = 0;

  // Deltas strictly increasing; sup kinds nondecreasing. Throws PropertyViolation otherwise.
  void validate() const;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  std::size_t window_lo = 0;  // first index used
  std::size_t window_hi = 0;  // one past the last index used
};

struct ModulusOptions {
  // Weighted integrals run over cells with centres in [-L + margin, L - margin];
  // a negative value selects L / 8.
  double margin = -1.0;
  std::size_t threads = 0;
};

// E sup_{0 < |z| <= delta} int_0^T int |u(t, x + z) - u(t, x)| chi dx dt over all grid-aligned z.
// Scales below dx are skipped. z_per_delta is the minimum number of shifts per side.
ModulusCurve spatial_sup_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi,
                                 std::span<const double> deltas, std::size_t z_per_delta = 1,
                                 const ModulusOptions& opts = {});

// E int_0^T int int J_delta(z) |u(t, x + z) - u(t, x - z)| chi(x) dz dx dt with the discrete kernel.
ModulusCurve mollified_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi,
                               const FriedrichsKernel& kernel, std::span<const double> deltas,
                               const ModulusOptions& opts = {});

// E sup_{0 < tau <= delta} int_0^{T - delta_max} int |u(t + tau) - u(t)| chi dx dt over stored lags.
// The time range is common to the whole list so the sup sets are nested.
ModulusCurve temporal_sup_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi,
                                  std::span<const double> deltas, const ModulusOptions& opts = {});

// E int_0^T int |u(t, x + z) - u(t, x)|^power chi dx dt for each z (grid-aligned, sign kept).
ModulusCurve power_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi, double power,
                           std::span<const double> z_list, const ModulusOptions& opts = {});

// Least squares on (log delta, log value) over indices [lo, hi). Needs >= 3 positive points.
RateFit fit_rate(const ModulusCurve& curve, std::size_t lo, std::size_t hi);
RateFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Indices [lo, hi) of scales with delta >= 4 floor and delta <= ceiling / 4.
std::pair<std::size_t, std::size_t> fit_window(std::span<const double> deltas, double floor, double ceiling);

// inf over nu in [1e-8, 1e2] of C1 rho_x(nu) + C2 delta / nu^{m_F} + C3 delta^{1/2} / nu^{m_G}.
// Throws InvalidInput when rho_x decreases on the search grid.
double kruzkov_rho_t(const std::function<double(double)>& rho_x, double c1, double c2, double c3, int m_f, int m_g,
                     double delta);

inline constexpr int kFluxDerivativeOrder = 2;
inline constexpr int kNoiseDerivativeOrder = 0;

// sup modulus / mollified modulus per delta; empty where the mollified value vanishes.
std::vector<std::optional<double>> sup_vs_mollified_consistency(std::span<const PathResult> ensemble,
                                                                const WeightFunction& chi,
                                                                const FriedrichsKernel& kernel,
                                                                std::span<const double> deltas,
                                                                const ModulusOptions& opts = {});

struct HolderCheck {
  double first_power;  // power-1 modulus at z
  double bound;        // (power-4 modulus)^{1/4} (weighted mass * T)^{3/4}
};

HolderCheck holder_consistency(std::span<const PathResult> ensemble, const WeightFunction& chi, double z,
                               const ModulusOptions& opts = {});

// mu = 1 - 1/p and mu_x = mu / (p_f + p_eta + 2).
double mu_exponent(double p);
double mu_x_exponent(double p, double p_f, double p_eta);

// A deterministic path whose every stored row equals u.
PathResult frozen_path(const GridSpec& grid, std::span<const double> u, double t_final, std::size_t n_steps);

}  // namespace svlab
