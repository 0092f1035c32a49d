#include "svlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "svlab/error.hpp"
#include "svlab/numerics.hpp"

namespace svlab {

FluxSpec flux_by_name(const std::string& name) {
  if (name == "burgers") return make_burgers();
  if (name == "quartic") return make_quartic();
  if (name == "zero") return make_zero_flux();
  throw ConfigError("flux", "unknown flux '" + name + "'");
}

EntropyFunctions entropy_by_name(const std::string& name, const FluxSpec& flux) {
  if (name == "same-as-flux") {
    try {
      return entropy_same_as_flux(flux);
    } catch (const InvalidInput& e) {
      throw ConfigError("entropy", e.what());
    }
  }
  if (name == "linear") return linear_entropy();
  if (name.rfind("power:", 0) == 0) {
    double p0 = 0.0;
    std::istringstream is(name.substr(6));
    if (!(is >> p0) || !(p0 >= 2.0)) throw ConfigError("entropy", "power entropy needs p0 >= 2");
    return power_entropy(p0);
  }
  throw ConfigError("entropy", "unknown entropy '" + name + "'");
}

NoiseSpec noise_by_name(const std::string& name, double k) {
  if (name == "zero") return make_zero_noise();
  if (name == "additive") return make_additive_noise(k);
  if (name == "multiplicative") return make_multiplicative_noise(k);
  throw ConfigError("noise", "unknown noise '" + name + "'");
}

WeightFunction weight_by_name(const std::string& name, double n, double half_width) {
  if (name == "power") return make_power_weight(n);
  if (name == "constant") return make_truncated_constant_weight(half_width);
  throw ConfigError("weight", "unknown weight '" + name + "'");
}

Model build_model(const ExperimentConfig& cfg) {
  FluxSpec flux = flux_by_name(cfg.flux);
  EntropyFunctions e = entropy_by_name(cfg.entropy, flux);
  EntropyPair pair = make_entropy_pair(flux, std::move(e));
  return Model{std::move(flux), std::move(pair), noise_by_name(cfg.noise, cfg.noise_k),
               weight_by_name(cfg.weight, cfg.weight_n, cfg.half_width), friedrichs_kernel()};
}

StepPlan plan_steps(const FluxSpec& flux, double epsilon, const GridSpec& grid, double t_final, double u_bound,
                    std::size_t saved_rows, std::size_t fixed_steps) {
  std::size_t n = fixed_steps;
  if (n == 0) {
    const double dx = grid.dx();
    const double viscous = dx * dx / (2.0 * epsilon);
    const double hyperbolic = dx / (max_wave_speed(flux, u_bound) + 1e-12);
    const double dt_max = kCflSafety * std::min(viscous, hyperbolic);
    n = static_cast<std::size_t>(std::ceil(t_final / dt_max));
  }
  std::size_t stride = 1;
  if (saved_rows > 0 && n > saved_rows) stride = (n + saved_rows - 1) / saved_rows;
  if (fixed_steps == 0) {
    n = (n + stride - 1) / stride * stride;
  } else if (n % stride != 0) {
    while (n % stride != 0) ++stride;
  }
  return {n, stride};
}

SolveConfig solve_config_for(const ExperimentConfig& cfg, const FluxSpec& flux, double epsilon) {
  const GridSpec grid = cfg.grid();
  const StepPlan plan = plan_steps(flux, epsilon, grid, cfg.t_final, cfg.u_bound, cfg.saved_rows, cfg.n_steps);
  SolveConfig sc;
  sc.epsilon = epsilon;
  sc.t_final = cfg.t_final;
  sc.n_steps = plan.n_steps;
  sc.grid = grid;
  sc.seed = cfg.seed;
  sc.initial_condition = cfg.ic;
  sc.store_stride = plan.stride;
  return sc;
}

PathFunctionals path_functionals(const PathResult& path, const WeightFunction& chi, double p) {
  const auto w = chi.sample(path.grid);
  const double dx = path.grid.dx();
  PathFunctionals f{path.max_abs_u, 0.0, 0.0, 0.0, 0.0};
  f.final_mass = compensated_total(path.row(path.n_saved() - 1)) * dx;
  for (std::size_t k = 0; k < path.n_saved(); ++k) f.sup_lp = std::max(f.sup_lp, weighted_lp_norm(path.row(k), chi, p, path.grid));
  CompensatedSum g;
  CompensatedSum mu;
  for (std::size_t k = 0; k + 1 < path.n_saved(); ++k) {
    const auto gr = path.grad_row(k);
    const auto mr = path.mu_row(k);
    for (std::size_t j = 0; j < w.size(); ++j) {
      g.add(gr[j] * w[j]);
      mu.add(std::abs(mr[j]) * w[j]);
    }
  }
  f.dissipation = g.value() * dx * path.saved_dt();
  f.entropy_measure = mu.value() * dx * path.saved_dt();
  return f;
}

SolveRun run_solve(const ExperimentConfig& cfg, const Model& model) {
  const SolveConfig sc = solve_config_for(cfg, model.flux, cfg.epsilon);
  SolveRun run;
  run.ensemble = solve_ensemble(model.flux, model.noise, model.pair, sc, cfg.n_paths, cfg.seed, cfg.threads);
  run.moments = apriori_moments(run.ensemble, model.chi, cfg.moment_p, cfg.moment_r);
  return run;
}

namespace {

std::optional<RateFit> try_fit(const ModulusCurve& c, std::size_t lo, std::size_t hi) {
  if (hi <= lo || hi - lo < 3) return std::nullopt;
  for (std::size_t i = lo; i < hi; ++i) {
    if (!(c.deltas[i] > 0.0) || !(c.values[i] > 0.0)) return std::nullopt;
  }
  return fit_rate(c, lo, hi);
}

std::optional<RateFit> try_fit_window(const ModulusCurve& c, const GridSpec& grid) {
  const auto [lo, hi] = fit_window(c.deltas, grid.dx(), 2.0 * grid.half_width());
  return try_fit(c, lo, hi);
}

double envelope(const ModulusCurve& c, double mu) {
  double best = 0.0;
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    if (c.deltas[i] > 0.0) best = std::max(best, c.values[i] / std::pow(c.deltas[i], mu));
  }
  return best;
}

}  // namespace

SpaceRateStudy run_space_rates(const ExperimentConfig& cfg, const Model& model) {
  SpaceRateStudy study;
  study.power = model.flux.p_f + model.pair.functions.p_eta + 2.0;
  study.mu = mu_exponent(cfg.mu_p);
  study.mu_x = mu_x_exponent(cfg.mu_p, model.flux.p_f, model.pair.functions.p_eta);
  const std::vector<double> eps_list = cfg.epsilon_list.empty() ? std::vector<double>{cfg.epsilon} : cfg.epsilon_list;
  const WeightFunction chi2 = model.chi.squared();
  const GridSpec grid = cfg.grid();
  ModulusOptions opts;
  opts.threads = cfg.threads;
  for (double eps : eps_list) {
    SpaceRateEntry e;
    e.epsilon = eps;
    const SolveConfig sc = solve_config_for(cfg, model.flux, eps);
    e.plan = {sc.n_steps, sc.store_stride};
    const auto ensemble = solve_ensemble(model.flux, model.noise, model.pair, sc, cfg.n_paths, cfg.seed, cfg.threads);
    for (const auto& p : ensemble) e.max_abs_u = std::max(e.max_abs_u, p.max_abs_u);
    if (!cfg.delta_list.empty()) {
      e.mollified = mollified_modulus(ensemble, model.chi, model.kernel, cfg.delta_list, opts);
      e.sup = spatial_sup_modulus(ensemble, model.chi, cfg.delta_list, 1, opts);
      e.fit_mollified = try_fit_window(e.mollified, grid);
      e.fit_sup = try_fit_window(e.sup, grid);
      e.ratios = sup_vs_mollified_consistency(ensemble, model.chi, model.kernel, cfg.delta_list, opts);
    }
    if (!cfg.z_list.empty()) {
      e.power_chi = power_modulus(ensemble, model.chi, study.power, cfg.z_list, opts);
      e.power_chi2 = power_modulus(ensemble, chi2, study.power, cfg.z_list, opts);
      e.power_chi2.label += "_chi2";
      e.fit_power_chi = try_fit(e.power_chi, 0, e.power_chi.deltas.size());
      e.fit_power_chi2 = try_fit(e.power_chi2, 0, e.power_chi2.deltas.size());
      e.envelope_chi = envelope(e.power_chi, study.mu);
      e.envelope_chi2 = envelope(e.power_chi2, study.mu);
    }
    e.moments = apriori_moments(ensemble, model.chi, cfg.moment_p, cfg.moment_r);
    study.entries.push_back(std::move(e));
  }
  return study;
}

TimeRateStudy run_time_rates(const ExperimentConfig& cfg, const Model& model) {
  if (cfg.time_delta_list.empty()) throw ConfigError("time_delta_list", "rates-time needs at least three lags");
  const SolveConfig sc = solve_config_for(cfg, model.flux, cfg.epsilon);
  TimeRateStudy study;
  study.plan = {sc.n_steps, sc.store_stride};
  const double dts = sc.dt() * static_cast<double>(sc.store_stride);
  for (double d : cfg.time_delta_list) {
    const double r = d / dts;
    if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r)) {
      std::ostringstream os;
      os << "lag " << d << " is not a multiple of the stored time step " << dts;
      throw ConfigError("time_delta_list", os.str());
    }
  }
  ModulusOptions opts;
  opts.threads = cfg.threads;
  const auto ensemble = solve_ensemble(model.flux, model.noise, model.pair, sc, cfg.n_paths, cfg.seed, cfg.threads);
  study.temporal = temporal_sup_modulus(ensemble, model.chi, cfg.time_delta_list, opts);
  study.fit_temporal = try_fit(study.temporal, 0, study.temporal.deltas.size());
  if (!cfg.delta_list.empty()) {
    study.spatial_sup = spatial_sup_modulus(ensemble, model.chi, cfg.delta_list, 1, opts);
    study.fit_spatial = try_fit_window(study.spatial_sup, cfg.grid());
  }
  if (study.fit_spatial && study.fit_spatial->slope > 0.0) {
    const double a = study.fit_spatial->slope;
    const double c = std::exp(study.fit_spatial->intercept);
    auto rho_x = [a, c](double nu) { return c * std::pow(nu, a); };
    for (double d : cfg.time_delta_list) {
      study.rho_deltas.push_back(d);
      study.rho_values.push_back(
          kruzkov_rho_t(rho_x, 1.0, 1.0, 1.0, kFluxDerivativeOrder, kNoiseDerivativeOrder, d));
    }
    study.rho_exponent_predicted = std::min(a / (a + kFluxDerivativeOrder), 0.5);
    if (study.rho_deltas.size() >= 3) study.fit_rho = fit_loglog(study.rho_deltas, study.rho_values);
  }
  return study;
}

InteractionStudy run_interaction_check(const ExperimentConfig& cfg) {
  if (cfg.boundary != Boundary::dirichlet_zero) {
    throw ConfigError("boundary", "interaction-check needs dirichlet_zero (decay at the domain edge)");
  }
  InteractionStudyConfig ic;
  ic.half_width = cfg.half_width;
  ic.n_cells = cfg.n_cells;
  ic.epsilon = cfg.epsilon;
  ic.t_final = cfg.t_final;
  ic.base_steps = cfg.base_steps;
  ic.levels = cfg.levels;
  ic.n_paths = cfg.n_paths;
  ic.shift_cells = cfg.shift_cells;
  ic.n_windows = cfg.windows;
  ic.weight_n = cfg.weight_n;
  ic.flux = flux_by_name(cfg.flux);
  ic.entropy = entropy_by_name(cfg.entropy, ic.flux);
  ic.noise = noise_by_name(cfg.noise, cfg.noise_k);
  ic.initial_condition = cfg.ic;
  ic.seed = cfg.seed;
  ic.threads = cfg.threads;
  if (cfg.weight != "power") throw ConfigError("weight", "interaction-check uses the power weight");

  InteractionStudy out;
  out.levels = interaction_refinement_study(ic);
  std::vector<double> dts;
  std::vector<double> res;
  bool positive = true;
  out.monotone = true;
  for (std::size_t i = 0; i < out.levels.size(); ++i) {
    dts.push_back(out.levels[i].dt);
    res.push_back(out.levels[i].residual.mean);
    positive = positive && out.levels[i].residual.mean > 0.0;
    if (i > 0 && !(out.levels[i].residual.mean < out.levels[i - 1].residual.mean)) out.monotone = false;
  }
  if (positive && dts.size() >= 3) out.fit = fit_loglog(dts, res);
  return out;
}

WeightStudy run_verify_weights(const ExperimentConfig& cfg, const Model& model) {
  const GridSpec grid = cfg.grid();
  const WeightFunction chi2 = model.chi.squared();
  return {model.chi.c_chi(), model.chi.l1_mass(), verify_weight_properties(model.chi, grid, cfg.z_max, cfg.radius),
          chi2.c_chi(), verify_weight_properties(chi2, grid, cfg.z_max, cfg.radius)};
}

LemmaReport run_lemma_check(const ExperimentConfig& cfg) {
  const FluxSpec flux = flux_by_name(cfg.flux);
  const EntropyPair pair = make_entropy_pair(flux, entropy_by_name(cfg.entropy, flux));
  const Lattice lattice{cfg.lattice_half_width, cfg.lattice_step};
  const auto pts = lattice.points();
  return verify_lemma_bound(flux, pair, pts);
}

}  // namespace svlab
