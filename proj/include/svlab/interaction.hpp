#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "svlab/entropy.hpp"
#include "svlab/grid.hpp"
#include "svlab/numerics.hpp"
#include "svlab/spde_solver.hpp"
#include "svlab/weights.hpp"

namespace svlab {

// Row-major (time step, cell) array.
struct Field {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Field() = default;
  Field(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t k) { return std::span<double>(data).subspan(k * cols, cols); }
  std::span<const double> row(std::size_t k) const { return std::span<const double>(data).subspan(k * cols, cols); }
  double& at(std::size_t k, std::size_t j) { return data[k * cols + j]; }
  double at(std::size_t k, std::size_t j) const { return data[k * cols + j]; }
};

// Two coupled discrete systems on one grid, for k < n_steps:
//   A^{k+1}_j - A^k_j + (B^k_j - B^k_{j-1}) dt / dx = C_A^k_j dt + sigma_A^k_j dW_k
// and likewise for D with E, C_D, sigma_D. B_j and E_j sit on the face between
// cells j and j+1; the face left of cell 0 carries no flux.
struct InteractionData {
  GridSpec grid{1.0, 64};
  double dt = 0.0;
  Field a, d, b, e, c_a, c_d, sigma_a, sigma_d;  // n_steps + 1 rows each
  std::vector<double> dw;                         // n_steps increments

  std::size_t n_steps() const noexcept { return dw.size(); }
  // Throws InvalidInput when the arrays disagree in shape.
  void validate() const;
};

InteractionData make_interaction_data(const GridSpec& grid, double dt, std::size_t n_steps);

// Prefix sums cal_A(y_j) = sum_{i <= j} A_i dx, Sigma_A likewise, and suffix sums
// cal_D(x_j) = sum_{i >= j} D_i dx, Sigma_D likewise.
struct Antiderivatives {
  std::vector<double> a;
  std::vector<double> d;
  std::vector<double> sigma_a;
  std::vector<double> sigma_d;
};

Antiderivatives antiderivatives(const InteractionData& data, std::size_t k);

std::vector<double> prefix_integral(std::span<const double> f, double dx);
std::vector<double> suffix_integral(std::span<const double> f, double dx);

// sum_{i < j} a_i d_j dx^2, evaluated as sum_i a_i cal_D_{i+1} dx.
double pair_integral(std::span<const double> a, std::span<const double> d, double dx);

// I(t_k).
double interaction_functional(const InteractionData& data, std::size_t k);

struct NoiseInteraction {
  double via_sigma_a;  // int sigma_A Sigma_D (strictly to the right)
  double via_sigma_d;  // int Sigma_A (strictly to the left) sigma_D
};

// Both forms of I_sigma(t_k). Throws PropertyViolation if they differ beyond 1e-10 of their scale.
NoiseInteraction noise_interaction(const InteractionData& data, std::size_t k);

struct DecayReport {
  double a_edge;
  double a_max;
  double d_edge;
  double d_max;
  bool ok;  // edges <= 1e-8 of the maxima
};

DecayReport check_decay(const InteractionData& data);

// |LHS - RHS| of the interaction identity over the whole time interval with
// left-point (Ito) sums. The discrete product rule leaves the covariation term
// sum_{i<j} dA_i dD_j dx^2 per step; its part beyond I_sigma dW^2 is moved to the
// right-hand side, so the residual is exactly the quadratic-variation error
// sum_k I_sigma^k (dW_k^2 - dt) plus boundary flux leakage.
double identity_residual(const InteractionData& data);

// The same residual evaluated separately on n_windows equal sub-intervals of steps.
std::vector<double> identity_residual_windows(const InteractionData& data, std::size_t n_windows);

// A = chi Delta_h u, B = chi Delta_h f(u), sigma_A = chi Delta_h sigma(x, u),
// D = chi Delta_h eta(u), E = chi Delta_h q(u), sigma_D = chi Delta_h (eta'(u) sigma(x, u)).
// C_A and C_D are the remainders that close both discrete systems on the solver's grid.
// Needs every step stored and h grid-aligned with |h| < 1.
InteractionData build_from_solution(const PathResult& path, const WeightFunction& chi, double h, const FluxSpec& flux,
                                    const NoiseSpec& noise, const EntropyPair& pair);

struct InteractionStudyConfig {
  double half_width = 2.0;
  std::size_t n_cells = 256;
  double epsilon = 0.02;
  double t_final = 0.5;
  std::size_t base_steps = 256;
  std::size_t levels = 3;
  std::size_t n_paths = 8;
  std::size_t shift_cells = 4;
  std::size_t n_windows = 256;
  double weight_n = 1.0;
  FluxSpec flux = make_burgers();
  EntropyFunctions entropy = entropy_same_as_flux(make_burgers());
  NoiseSpec noise = make_multiplicative_noise(0.5);
  std::string initial_condition = "neg-sin-compact";
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

struct InteractionLevel {
  std::size_t level;
  double dt;
  std::size_t n_steps;
  MeanAndError residual;       // per path sqrt of the summed squared window residuals
  MeanAndError full_residual;  // whole-interval residual
};

// Runs on a Dirichlet grid (the decay hypothesis); each level halves dt and splits
// the previous level's increments by Brownian bridging.
std::vector<InteractionLevel> interaction_refinement_study(const InteractionStudyConfig& cfg);

}  // namespace svlab
