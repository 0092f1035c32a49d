#include "svlab/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "svlab/config.hpp"
#include "svlab/error.hpp"
#include "svlab/experiments.hpp"
#include "svlab/report.hpp"

namespace svlab {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out_dir;
  bool dump = false;
};

// Collects artifacts so the manifest lists exactly what was written.
class Output {
 public:
  Output(fs::path dir, bool plots) : dir_(std::move(dir)), plots_(plots) {}

  void csv(const std::string& name, const CsvTable& t) {
    t.write(dir_ / name);
    names_.push_back(name);
  }
  void svg(const std::string& name, const std::string& text) {
    if (!plots_) return;
    write_text(dir_ / name, text);
    names_.push_back(name);
  }
  const std::vector<std::string>& names() const { return names_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  bool plots_;
  std::vector<std::string> names_;
};

void write_moments(CsvTable& t, const std::string& prefix_eps, const AprioriMoments& m) {
  const std::pair<const char*, const MeanAndError*> rows[] = {
      {"sup_lp", &m.sup_lp}, {"dissipation", &m.dissipation}, {"entropy_measure", &m.entropy_measure}};
  for (const auto& [name, v] : rows) {
    t.cell(prefix_eps).cell(std::string(name)).cell(v->mean).cell(v->std_err);
    t.end_row();
  }
}

PlotSeries series_of(const ModulusCurve& c) {
  return {c.label.empty() ? to_string(c.kind) : c.label, c.deltas, c.values};
}

void run_solve_cmd(const ExperimentConfig& cfg, const Flags& flags, Output& out, std::ostream& log) {
  const Model model = build_model(cfg);
  const SolveRun run = run_solve(cfg, model);
  CsvTable summary({"path_id", "functional", "value"});
  for (std::size_t m = 0; m < run.ensemble.size(); ++m) {
    const PathFunctionals f = path_functionals(run.ensemble[m], model.chi, cfg.moment_p);
    const std::pair<const char*, double> rows[] = {{"max_abs_u", f.max_abs_u},
                                                   {"final_mass", f.final_mass},
                                                   {"sup_lp", f.sup_lp},
                                                   {"dissipation", f.dissipation},
                                                   {"entropy_measure", f.entropy_measure}};
    for (const auto& [name, v] : rows) {
      summary.cell(m).cell(std::string(name)).cell(v);
      summary.end_row();
    }
  }
  out.csv("summary.csv", summary);
  CsvTable moments({"epsilon", "functional", "mean", "std_err"});
  write_moments(moments, format_double(cfg.epsilon), run.moments);
  out.csv("moments.csv", moments);
  if (flags.dump) {
    for (std::size_t m = 0; m < run.ensemble.size(); ++m) {
      const PathResult& p = run.ensemble[m];
      CsvTable t({"k", "j", "u"});
      for (std::size_t k = 0; k < p.n_saved(); ++k) {
        const auto row = p.row(k);
        for (std::size_t j = 0; j < row.size(); ++j) {
          t.cell(k * p.stride).cell(j).cell(row[j]);
          t.end_row();
        }
      }
      out.csv("path_" + std::to_string(m) + ".csv", t);
    }
  }
  log << "solve: " << run.ensemble.size() << " paths, E sup ||u||^r = " << format_double(run.moments.sup_lp.mean)
      << '\n';
}

void run_space_cmd(const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  const Model model = build_model(cfg);
  const SpaceRateStudy study = run_space_rates(cfg, model);
  CsvTable exps({"epsilon", "kind", "slope", "slope_stderr", "predicted"});
  CsvTable moments({"epsilon", "functional", "mean", "std_err"});
  CsvTable env({"epsilon", "weight", "envelope", "max_abs_u"});
  for (std::size_t i = 0; i < study.entries.size(); ++i) {
    const SpaceRateEntry& e = study.entries[i];
    const std::string tag = "eps" + std::to_string(i);
    const std::string eps = format_double(e.epsilon);
    CsvTable curves = curve_table();
    CsvTable fits = fit_table();
    std::vector<PlotSeries> plot;
    const std::tuple<const ModulusCurve*, const std::optional<RateFit>*, double> items[] = {
        {&e.mollified, &e.fit_mollified, study.mu_x},
        {&e.sup, &e.fit_sup, study.mu_x},
        {&e.power_chi, &e.fit_power_chi, study.mu},
        {&e.power_chi2, &e.fit_power_chi2, study.mu}};
    for (const auto& [curve, fit, predicted] : items) {
      if (curve->deltas.empty()) continue;
      append_curve(curves, *curve);
      plot.push_back(series_of(*curve));
      const std::string kind = series_of(*curve).label;
      if (fit->has_value()) {
        append_fit(fits, kind, **fit, curve->deltas);
        exps.cell(eps).cell(kind).cell((*fit)->slope).cell((*fit)->slope_stderr).cell(predicted);
        exps.end_row();
      }
    }
    out.csv("curves_" + tag + ".csv", curves);
    out.csv("fits_" + tag + ".csv", fits);
    if (!e.ratios.empty()) {
      CsvTable ratios({"delta", "sup_over_mollified"});
      for (std::size_t k = 0; k < e.ratios.size(); ++k) {
        if (!e.ratios[k]) continue;
        ratios.cell(cfg.delta_list[k]).cell(*e.ratios[k]);
        ratios.end_row();
      }
      out.csv("ratios_" + tag + ".csv", ratios);
    }
    write_moments(moments, eps, e.moments);
    env.cell(eps).cell(std::string("chi")).cell(e.envelope_chi).cell(e.max_abs_u);
    env.end_row();
    env.cell(eps).cell(std::string("chi2")).cell(e.envelope_chi2).cell(e.max_abs_u);
    env.end_row();
    out.svg("moduli_" + tag + ".svg", loglog_svg("translation moduli, eps = " + eps, plot, study.mu));
    log << "rates-space: eps = " << eps;
    if (e.fit_power_chi) log << ", power slope " << format_double(e.fit_power_chi->slope);
    log << '\n';
  }
  out.csv("exponents.csv", exps);
  out.csv("moments.csv", moments);
  out.csv("envelope.csv", env);
}

void run_time_cmd(const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  const Model model = build_model(cfg);
  const TimeRateStudy study = run_time_rates(cfg, model);
  CsvTable curves = curve_table();
  CsvTable fits = fit_table();
  append_curve(curves, study.temporal);
  if (study.fit_temporal) append_fit(fits, to_string(study.temporal.kind), *study.fit_temporal, study.temporal.deltas);
  if (!study.spatial_sup.deltas.empty()) append_curve(curves, study.spatial_sup);
  if (study.fit_spatial) {
    append_fit(fits, to_string(study.spatial_sup.kind), *study.fit_spatial, study.spatial_sup.deltas);
  }
  if (study.fit_rho) append_fit(fits, "rho_t", *study.fit_rho, study.rho_deltas);
  out.csv("curves.csv", curves);
  out.csv("fits.csv", fits);
  CsvTable rho({"delta", "rho_t", "predicted_exponent"});
  for (std::size_t i = 0; i < study.rho_deltas.size(); ++i) {
    rho.cell(study.rho_deltas[i]).cell(study.rho_values[i]).cell(study.rho_exponent_predicted);
    rho.end_row();
  }
  out.csv("rho_t.csv", rho);
  std::vector<PlotSeries> plot{series_of(study.temporal)};
  if (!study.rho_deltas.empty()) plot.push_back({"rho_t", study.rho_deltas, study.rho_values});
  out.svg("temporal.svg", loglog_svg("temporal modulus", plot, 0.5));
  log << "rates-time: " << study.temporal.deltas.size() << " lags";
  if (study.fit_temporal) log << ", slope " << format_double(study.fit_temporal->slope);
  log << '\n';
}

void run_interaction_cmd(const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  const InteractionStudy study = run_interaction_check(cfg);
  CsvTable t({"level", "dt", "n_steps", "residual", "std_err", "full_residual", "full_std_err"});
  std::vector<double> dts;
  std::vector<double> res;
  for (const auto& l : study.levels) {
    t.cell(l.level).cell(l.dt).cell(l.n_steps).cell(l.residual.mean).cell(l.residual.std_err);
    t.cell(l.full_residual.mean).cell(l.full_residual.std_err);
    t.end_row();
    dts.push_back(l.dt);
    res.push_back(l.residual.mean);
  }
  out.csv("refinement.csv", t);
  CsvTable fits = fit_table();
  if (study.fit) append_fit(fits, "identity_residual", *study.fit, dts);
  out.csv("fits.csv", fits);
  out.svg("refinement.svg", loglog_svg("identity residual against dt", {{"residual", dts, res}}, 0.5));
  log << "interaction-check: " << study.levels.size() << " levels, monotone = " << (study.monotone ? "yes" : "no");
  if (study.fit) log << ", slope " << format_double(study.fit->slope);
  log << '\n';
}

void run_lemma_cmd(const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  const LemmaReport r = run_lemma_check(cfg);
  CsvTable t({"quantity", "value"});
  const std::pair<const char*, double> rows[] = {{"min_ratio", r.min_ratio},
                                                 {"lemma_constant", r.lemma_constant},
                                                 {"exponent", r.exponent},
                                                 {"measured_c_f", r.measured_c_f},
                                                 {"measured_c_eta", r.measured_c_eta}};
  for (const auto& [name, v] : rows) {
    t.cell(std::string(name)).cell(v);
    t.end_row();
  }
  out.csv("lemma.csv", t);
  log << "lemma-check: min ratio " << format_double(r.min_ratio) << ", constant " << format_double(r.lemma_constant)
      << '\n';
}

void run_weights_cmd(const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  const Model model = build_model(cfg);
  const WeightStudy w = run_verify_weights(cfg, model);
  CsvTable t({"weight", "quantity", "value"});
  const std::tuple<const char*, const char*, double> rows[] = {
      {"chi", "c_chi", w.c_chi},
      {"chi", "l1_mass", w.l1_mass},
      {"chi", "shift_constant", w.report.shift_constant},
      {"chi", "ratio_constant", w.report.ratio_constant},
      {"chi2", "c_chi", w.c_chi_squared},
      {"chi2", "shift_constant", w.report_squared.shift_constant},
      {"chi2", "ratio_constant", w.report_squared.ratio_constant}};
  for (const auto& [weight, name, v] : rows) {
    t.cell(std::string(weight)).cell(std::string(name)).cell(v);
    t.end_row();
  }
  out.csv("weights.csv", t);
  log << "verify-weights: C_chi = " << format_double(w.c_chi) << '\n';
}

int dispatch(ExperimentConfig cfg, const Flags& flags, std::ostream& log) {
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;
  if (flags.out_dir) cfg.output_dir = *flags.out_dir;
  validate_config(cfg);
  if (cfg.subcommand.empty()) throw ConfigError("subcommand", "no subcommand given on the command line or in the file");

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output_dir", "cannot create '" + dir.string() + "': " + ec.message());
  Output out(dir, cfg.emit_plots);
  fs::remove(dir / "errors.log", ec);
  try {
    if (cfg.subcommand == "solve") run_solve_cmd(cfg, flags, out, log);
    else if (cfg.subcommand == "rates-space") run_space_cmd(cfg, out, log);
    else if (cfg.subcommand == "rates-time") run_time_cmd(cfg, out, log);
    else if (cfg.subcommand == "interaction-check") run_interaction_cmd(cfg, out, log);
    else if (cfg.subcommand == "lemma-check") run_lemma_cmd(cfg, out, log);
    else run_weights_cmd(cfg, out, log);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    write_text(dir / "errors.log", std::string(e.what()) + '\n');
    throw;
  }
  write_text(dir / "manifest.ini", to_manifest(cfg, out.names()));
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic viscous conservation law experiments"};
  app.require_subcommand(1);
  Flags flags;

  std::vector<std::string> names(std::begin(kSubcommands), std::end(kSubcommands));
  names.emplace_back("replay");
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(
        name, name == "replay" ? "Re-run the subcommand recorded in a manifest" : "Run the " + name + " experiment");
    auto* config = sub->add_option("--config", flags.config_path, "INI configuration or manifest");
    if (name == "replay") config->required()->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { flags.seed = v; },
                                            "Seed base, overrides the file");
    sub->add_option_function<std::size_t>("--threads", [&](const std::size_t& v) { flags.threads = v; },
                                           "Worker threads (0 = available parallelism)");
    sub->add_flag("--dump", flags.dump, "Write per-path (k, j, u) CSV files");
    sub->add_option_function<std::string>("--out", [&](const std::string& v) { flags.out_dir = v; },
                                          "Output directory, overrides the file");
  }

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
    if (chosen->get_name() != "replay") cfg.subcommand = chosen->get_name();
    return dispatch(std::move(cfg), flags, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalAbort& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const PropertyViolation& e) {
    err << "property violation: " << e.what() << '\n';
    return kExitProperty;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace svlab
