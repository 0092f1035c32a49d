#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "svlab/config.hpp"
#include "svlab/entropy.hpp"
#include "svlab/estimators.hpp"
#include "svlab/interaction.hpp"
#include "svlab/mollifiers.hpp"
#include "svlab/spde_solver.hpp"
#include "svlab/weights.hpp"

namespace svlab {

FluxSpec flux_by_name(const std::string& name);
EntropyFunctions entropy_by_name(const std::string& name, const FluxSpec& flux);
NoiseSpec noise_by_name(const std::string& name, double k);
WeightFunction weight_by_name(const std::string& name, double n, double half_width);

struct Model {
  FluxSpec flux;
  EntropyPair pair;
  NoiseSpec noise;
  WeightFunction chi;
  FriedrichsKernel kernel;
};

Model build_model(const ExperimentConfig& cfg);

struct StepPlan {
  std::size_t n_steps;
  std::size_t stride;
};

// Fewest steps meeting the CFL bound for |u| <= u_bound (unless fixed_steps > 0), with a
// storage stride that keeps about saved_rows rows (every step when saved_rows = 0).
StepPlan plan_steps(const FluxSpec& flux, double epsilon, const GridSpec& grid, double t_final, double u_bound,
                    std::size_t saved_rows, std::size_t fixed_steps);

SolveConfig solve_config_for(const ExperimentConfig& cfg, const FluxSpec& flux, double epsilon);

// Per-path scalar functionals reported by `solve`.
struct PathFunctionals {
  double max_abs_u;
  double final_mass;
  double sup_lp;
  double dissipation;
  double entropy_measure;
};

PathFunctionals path_functionals(const PathResult& path, const WeightFunction& chi, double p);

struct SolveRun {
  std::vector<PathResult> ensemble;
  AprioriMoments moments;
};

SolveRun run_solve(const ExperimentConfig& cfg, const Model& model);

struct SpaceRateEntry {
  double epsilon = 0.0;
  StepPlan plan{0, 1};
  ModulusCurve mollified;
  ModulusCurve sup;
  ModulusCurve power_chi;
  ModulusCurve power_chi2;
  std::optional<RateFit> fit_mollified;
  std::optional<RateFit> fit_sup;
  std::optional<RateFit> fit_power_chi;
  std::optional<RateFit> fit_power_chi2;
  std::vector<std::optional<double>> ratios;  // sup / mollified per delta
  AprioriMoments moments;
  double envelope_chi = 0.0;   // max_z value / z^mu
  double envelope_chi2 = 0.0;
  double max_abs_u = 0.0;
};

struct SpaceRateStudy {
  double power = 4.0;  // p_f + p_eta + 2
  double mu = 0.0;     // 1 - 1/mu_p
  double mu_x = 0.0;   // mu / power
  std::vector<SpaceRateEntry> entries;
};

SpaceRateStudy run_space_rates(const ExperimentConfig& cfg, const Model& model);

struct TimeRateStudy {
  StepPlan plan{0, 1};
  ModulusCurve temporal;
  std::optional<RateFit> fit_temporal;
  ModulusCurve spatial_sup;
  std::optional<RateFit> fit_spatial;
  // rho_t(delta) from rho_x(nu) = C nu^a fitted on the spatial sup curve, C1 = C2 = C3 = 1.
  std::vector<double> rho_deltas;
  std::vector<double> rho_values;
  std::optional<RateFit> fit_rho;
  double rho_exponent_predicted = 0.0;
};

TimeRateStudy run_time_rates(const ExperimentConfig& cfg, const Model& model);

struct InteractionStudy {
  std::vector<InteractionLevel> levels;
  std::optional<RateFit> fit;  // residual against dt
  bool monotone = false;
};

InteractionStudy run_interaction_check(const ExperimentConfig& cfg);

struct WeightStudy {
  double c_chi;
  double l1_mass;
  WeightPropertyReport report;
  double c_chi_squared;
  WeightPropertyReport report_squared;
};

WeightStudy run_verify_weights(const ExperimentConfig& cfg, const Model& model);

LemmaReport run_lemma_check(const ExperimentConfig& cfg);

}  // namespace svlab
