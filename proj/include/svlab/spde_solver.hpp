#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "svlab/entropy.hpp"
#include "svlab/grid.hpp"
#include "svlab/numerics.hpp"
#include "svlab/weights.hpp"

namespace svlab {

// Noise amplitude sigma(x, u) with linear growth |sigma| <= K (1 + |u|).
struct NoiseSpec {
  enum class Kind { zero, additive, multiplicative, custom };

  std::string name;
  Kind kind = Kind::zero;
  double growth_const = 0.0;
  std::function<double(double x, double u)> sigma;

  double operator()(double x, double u) const { return sigma(x, u); }
};

NoiseSpec make_zero_noise();
// sigma = K.
NoiseSpec make_additive_noise(double k);
// sigma = K u.
NoiseSpec make_multiplicative_noise(double k);

// Checks the linear growth bound on a lattice of (x, u) pairs.
void verify_noise_growth(const NoiseSpec& noise, std::span<const double> xs, std::span<const double> us);

// Named initial profiles:
//   neg-sin          -sin(pi x / L)
//   sin2             sin(2 pi x / L)
//   neg-sin-compact  -sin(pi x) on |x| <= 1, zero elsewhere
//   smoothed-step    tanh(x / (4 dx))
//   random-trig      sum_{k<=4} (a_k cos + b_k sin)(k pi x / L) / k with seeded normal coefficients
//   zero
std::vector<double> make_initial_condition(const std::string& name, const GridSpec& grid, std::uint64_t seed = 0);
bool is_known_initial_condition(const std::string& name);

struct SolveConfig {
  double epsilon = 0.0;
  double t_final = 0.0;
  std::size_t n_steps = 0;
  GridSpec grid{1.0, 64};
  std::uint64_t seed = 0;
  std::string initial_condition = "neg-sin";
  // Only every store_stride-th step is kept; n_steps must be a multiple.
  std::size_t store_stride = 1;
  // Overrides the named profile when nonempty.
  std::vector<double> u0;
  // Overrides the seeded increments when nonempty (used for bridged refinement).
  std::vector<double> dw;

  double dt() const noexcept { return t_final / static_cast<double>(n_steps); }
};

inline constexpr double kCflSafety = 0.4;

// Largest |f'| the explicit scheme tolerates at this step size.
double certified_speed(const SolveConfig& cfg);

// Validates the viscous restriction and the hyperbolic restriction for the given state range.
// Throws NumericalAbort with the offending numbers.
void check_cfl(const FluxSpec& flux, const SolveConfig& cfg, double max_abs_u);

// max |f'| over [-m, m], sampled at the endpoints and the sonic point for convex f.
double max_wave_speed(const FluxSpec& flux, double m);

// One sample path. Rows are stored at steps 0, stride, 2 stride, ..., n_steps.
struct PathResult {
  GridSpec grid{1.0, 64};
  double epsilon = 0.0;
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::size_t stride = 1;
  std::uint64_t seed = 0;
  std::vector<double> u;
  std::vector<double> dw;
  std::vector<double> eps_grad_sq;  // eps |D+ u|^2
  std::vector<double> mu_eps;       // eta''(u) eps |D+ u|^2
  double max_abs_u = 0.0;

  std::size_t n_cells() const noexcept { return grid.n_cells(); }
  std::size_t n_saved() const noexcept { return n_steps / stride + 1; }
  double saved_dt() const noexcept { return dt * static_cast<double>(stride); }
  double time(std::size_t k) const noexcept { return saved_dt() * static_cast<double>(k); }
  std::span<const double> row(std::size_t k) const { return field_row(u, k); }
  std::span<const double> grad_row(std::size_t k) const { return field_row(eps_grad_sq, k); }
  std::span<const double> mu_row(std::size_t k) const { return field_row(mu_eps, k); }

 private:
  std::span<const double> field_row(const std::vector<double>& f, std::size_t k) const {
    return std::span<const double>(f).subspan(k * grid.n_cells(), grid.n_cells());
  }
};

// Explicit Euler-Maruyama with the Engquist-Osher flux and a central viscous term.
PathResult solve_path(const FluxSpec& flux, const NoiseSpec& noise, const EntropyPair& pair, const SolveConfig& cfg);

// Member m uses seed path_seed(seed_base, m). Work is spread over `threads` workers
// (0 = hardware concurrency). Errors are rethrown with the member index.
std::vector<PathResult> solve_ensemble(const FluxSpec& flux, const NoiseSpec& noise, const EntropyPair& pair,
                                       const SolveConfig& cfg, std::size_t n_paths, std::uint64_t seed_base,
                                       std::size_t threads = 0);

// Runs job(m) for m in [0, n) over a worker pool; rethrows the first failure tagged with its index.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job);

struct AprioriMoments {
  MeanAndError sup_lp;          // E sup_t ||u||^r_{L^p(chi)}
  MeanAndError dissipation;     // E (int int eps |u_x|^2 chi)^r
  MeanAndError entropy_measure; // E (int int chi |mu|)^r
};

AprioriMoments apriori_moments(std::span<const PathResult> ensemble, const WeightFunction& chi, double p, double r);

// Smooth compactly supported test function with two derivatives.
struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

// exp(-1 / (1 - r^2)) with r = (x - centre) / radius.
TestFunction bump_test_function(double centre, double radius);

// | int phi (eta(u_T) - eta(u_0)) - int int (q phi' + eps eta phi'' - phi mu + phi eta'' sigma^2 / 2)
//   - sum_k dW_k int phi eta' sigma |, all time sums at left endpoints. Needs stride 1.
double entropy_balance_residual(const PathResult& path, const FluxSpec& flux, const NoiseSpec& noise,
                                const EntropyPair& pair, const TestFunction& phi);

}  // namespace svlab
