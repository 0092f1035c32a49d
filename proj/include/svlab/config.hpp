#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "svlab/grid.hpp"

namespace svlab {

// Every knob of a batch run. Loaded from an INI-style file:
//
//   [run]          subcommand, seed, n_paths, output_dir, emit_plots
//   [solver]       epsilon, t_final, n_steps, n_cells, half_width, boundary, ic, u_bound, saved_rows
//   [model]        flux, entropy, weight, weight_N, noise, noise_K, kernel
//   [study]        epsilon_list, delta_list, z_list, time_delta_list, moment_p, moment_r, mu_p
//   [interaction]  levels, base_steps, shift_cells, windows
//   [lemma]        lattice_half_width, lattice_step
//   [weights]      z_max, radius
//
// Lists are comma separated; string values may be quoted.
struct ExperimentConfig {
  std::string subcommand;
  std::uint64_t seed = 20261016;
  std::size_t n_paths = 8;
  std::string output_dir = "out";
  bool emit_plots = false;

  double epsilon = 0.02;
  double t_final = 0.5;
  std::size_t n_steps = 0;  // 0 picks the smallest count satisfying the CFL bound for |u| <= u_bound
  std::size_t n_cells = 512;
  double half_width = 1.0;
  Boundary boundary = Boundary::periodic;
  std::string ic = "neg-sin";
  double u_bound = 4.0;
  std::size_t saved_rows = 100;  // 0 keeps every step

  std::string flux = "burgers";
  std::string entropy = "same-as-flux";
  std::string weight = "power";
  double weight_n = 1.0;
  std::string noise = "multiplicative";
  double noise_k = 0.5;
  std::string kernel = "friedrichs";

  std::vector<double> epsilon_list;
  std::vector<double> delta_list;
  std::vector<double> z_list;
  std::vector<double> time_delta_list;
  double moment_p = 2.0;
  double moment_r = 2.0;
  double mu_p = 8.0;

  std::size_t levels = 3;
  std::size_t base_steps = 256;
  std::size_t shift_cells = 4;
  std::size_t windows = 256;

  double lattice_half_width = 5.0;
  double lattice_step = 0.1;

  double z_max = 1.0;
  double radius = 1.0;

  // Not part of the manifest: it never changes the output.
  std::size_t threads = 0;

  GridSpec grid() const { return GridSpec(half_width, n_cells, boundary); }
};

inline constexpr const char* kSubcommands[] = {"solve",       "rates-space", "rates-time", "interaction-check",
                                               "lemma-check", "verify-weights"};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Throws ConfigError naming the first offending key.
void validate_config(const ExperimentConfig& cfg);

// INI text that parses back to an identical configuration.
std::string to_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& artifacts = {});

// Shortest decimal text that round-trips the value.
std::string format_double(double v);

}  // namespace svlab
