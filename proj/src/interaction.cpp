#include "svlab/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "svlab/brownian.hpp"
#include "svlab/error.hpp"

namespace svlab {

void InteractionData::validate() const {
  const std::size_t rows = n_steps() + 1;
  const std::size_t cols = grid.n_cells();
  for (const Field* f : {&a, &d, &b, &e, &c_a, &c_d, &sigma_a, &sigma_d}) {
    if (f->rows != rows || f->cols != cols || f->data.size() != rows * cols) {
      throw InvalidInput("interaction fields must all have n_steps + 1 rows of n_cells entries");
    }
  }
  if (!(dt > 0.0)) throw InvalidInput("interaction data needs dt > 0");
}

InteractionData make_interaction_data(const GridSpec& grid, double dt, std::size_t n_steps) {
  InteractionData data;
  data.grid = grid;
  data.dt = dt;
  data.dw.assign(n_steps, 0.0);
  const Field blank(n_steps + 1, grid.n_cells());
  data.a = data.d = data.b = data.e = data.c_a = data.c_d = data.sigma_a = data.sigma_d = blank;
  return data;
}

std::vector<double> prefix_integral(std::span<const double> f, double dx) {
  std::vector<double> out(f.size());
  CompensatedSum s;
  for (std::size_t j = 0; j < f.size(); ++j) {
    s.add(f[j] * dx);
    out[j] = s.value();
  }
  return out;
}

std::vector<double> suffix_integral(std::span<const double> f, double dx) {
  std::vector<double> out(f.size());
  CompensatedSum s;
  for (std::size_t j = f.size(); j-- > 0;) {
    s.add(f[j] * dx);
    out[j] = s.value();
  }
  return out;
}

double pair_integral(std::span<const double> a, std::span<const double> d, double dx) {
  if (a.size() != d.size()) throw InvalidInput("pair integral needs fields of equal length");
  const auto right = suffix_integral(d, dx);
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) s.add(a[i] * right[i + 1] * dx);
  return s.value();
}

Antiderivatives antiderivatives(const InteractionData& data, std::size_t k) {
  if (k > data.n_steps()) throw InvalidInput("time step out of range");
  const double dx = data.grid.dx();
  return {prefix_integral(data.a.row(k), dx), suffix_integral(data.d.row(k), dx),
          prefix_integral(data.sigma_a.row(k), dx), suffix_integral(data.sigma_d.row(k), dx)};
}

double interaction_functional(const InteractionData& data, std::size_t k) {
  if (k > data.n_steps()) throw InvalidInput("time step out of range");
  return pair_integral(data.a.row(k), data.d.row(k), data.grid.dx());
}

NoiseInteraction noise_interaction(const InteractionData& data, std::size_t k) {
  if (k > data.n_steps()) throw InvalidInput("time step out of range");
  const double dx = data.grid.dx();
  const auto sa = data.sigma_a.row(k);
  const auto sd = data.sigma_d.row(k);
  const auto left = prefix_integral(sa, dx);
  const auto right = suffix_integral(sd, dx);
  const std::size_t n = sa.size();
  CompensatedSum via_a;
  CompensatedSum via_d;
  double scale_a = 0.0;
  double scale_d = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j + 1 < n) via_a.add(sa[j] * right[j + 1] * dx);
    if (j > 0) via_d.add(left[j - 1] * sd[j] * dx);
    scale_a += std::abs(sa[j]) * dx;
    scale_d += std::abs(sd[j]) * dx;
  }
  const NoiseInteraction out{via_a.value(), via_d.value()};
  if (std::abs(out.via_sigma_a - out.via_sigma_d) > 1e-10 * scale_a * scale_d) {
    std::ostringstream os;
    os << "noise interaction forms disagree at step " << k << ": " << out.via_sigma_a << " vs " << out.via_sigma_d;
    throw PropertyViolation(os.str());
  }
  return out;
}

DecayReport check_decay(const InteractionData& data) {
  DecayReport r{0.0, 0.0, 0.0, 0.0, true};
  const std::size_t n = data.grid.n_cells();
  for (std::size_t k = 0; k <= data.n_steps(); ++k) {
    const auto a = data.a.row(k);
    const auto d = data.d.row(k);
    r.a_edge = std::max({r.a_edge, std::abs(a[0]), std::abs(a[n - 1])});
    r.d_edge = std::max({r.d_edge, std::abs(d[0]), std::abs(d[n - 1])});
    for (std::size_t j = 0; j < n; ++j) {
      r.a_max = std::max(r.a_max, std::abs(a[j]));
      r.d_max = std::max(r.d_max, std::abs(d[j]));
    }
  }
  r.ok = r.a_edge <= 1e-8 * r.a_max && r.d_edge <= 1e-8 * r.d_max;
  return r;
}

namespace {

// Residual of the identity over steps [k_begin, k_end).
double window_residual(const InteractionData& data, std::size_t k_begin, std::size_t k_end) {
  const double dx = data.grid.dx();
  const double dt = data.dt;
  const std::size_t n = data.grid.n_cells();
  CompensatedSum lhs;
  CompensatedSum rhs;
  std::vector<double> da(n), dd(n);
  for (std::size_t k = k_begin; k < k_end; ++k) {
    const auto a = data.a.row(k);
    const auto d = data.d.row(k);
    const auto b = data.b.row(k);
    const auto e = data.e.row(k);
    const auto ca = data.c_a.row(k);
    const auto cd = data.c_d.row(k);
    const auto sa = data.sigma_a.row(k);
    const auto sd = data.sigma_d.row(k);
    const auto cal_a = prefix_integral(a, dx);
    const auto cal_d = suffix_integral(d, dx);
    const auto sig_d = suffix_integral(sd, dx);
    const double dw = data.dw[k];

    CompensatedSum flux;
    CompensatedSum source;
    CompensatedSum noise;
    CompensatedSum i_sigma;
    for (std::size_t j = 0; j < n; ++j) {
      const double b_left = j > 0 ? b[j - 1] : 0.0;
      flux.add((a[j] * e[j] - d[j] * b_left) * dx);
      const double d_right = j + 1 < n ? cal_d[j + 1] : 0.0;
      const double a_left = j > 0 ? cal_a[j - 1] : 0.0;
      source.add((ca[j] * d_right + a_left * cd[j]) * dx);
      noise.add((sa[j] * d_right + a_left * sd[j]) * dx);
      if (j + 1 < n) i_sigma.add(sa[j] * sig_d[j + 1] * dx);
    }
    const auto a_next = data.a.row(k + 1);
    const auto d_next = data.d.row(k + 1);
    for (std::size_t j = 0; j < n; ++j) {
      da[j] = a_next[j] - a[j];
      dd[j] = d_next[j] - d[j];
    }
    const double covariation = pair_integral(da, dd, dx);
    const double is = i_sigma.value();

    lhs.add(flux.value() * dt);
    rhs.add(-source.value() * dt);
    rhs.add(-noise.value() * dw);
    rhs.add(-is * dt);
    rhs.add(-(covariation - is * dw * dw));
  }
  rhs.add(interaction_functional(data, k_end));
  rhs.add(-interaction_functional(data, k_begin));
  return std::abs(lhs.value() - rhs.value());
}

}  // namespace

std::vector<double> identity_residual_windows(const InteractionData& data, std::size_t n_windows) {
  data.validate();
  const std::size_t steps = data.n_steps();
  if (n_windows == 0 || steps % n_windows != 0) throw InvalidInput("window count must divide the number of steps");
  const std::size_t len = steps / n_windows;
  std::vector<double> out(n_windows);
  for (std::size_t w = 0; w < n_windows; ++w) out[w] = window_residual(data, w * len, (w + 1) * len);
  return out;
}

double identity_residual(const InteractionData& data) {
  data.validate();
  return window_residual(data, 0, data.n_steps());
}

InteractionData build_from_solution(const PathResult& path, const WeightFunction& chi, double h, const FluxSpec& flux,
                                    const NoiseSpec& noise, const EntropyPair& pair) {
  if (path.stride != 1) throw InvalidInput("interaction fields need every time step stored (stride 1)");
  if (!(std::abs(h) < 1.0)) throw InvalidInput("shift h must satisfy |h| < 1");
  const GridSpec& grid = path.grid;
  const std::ptrdiff_t s = grid.cells_for(h, "shift h");
  const std::size_t n = grid.n_cells();
  const std::size_t steps = path.n_steps;
  const double dx = grid.dx();
  const double dt = path.dt;

  InteractionData data = make_interaction_data(grid, dt, steps);
  data.dw = path.dw;
  const auto w = chi.sample(grid);
  const auto xs = grid.centres();

  std::vector<double> fu(n), eu(n), qu(n), sg(n), es(n);
  for (std::size_t k = 0; k <= steps; ++k) {
    const auto u = path.row(k);
    for (std::size_t j = 0; j < n; ++j) {
      fu[j] = flux.f(u[j]);
      eu[j] = pair.eta(u[j]);
      qu[j] = pair.q(u[j]);
      sg[j] = noise(xs[j], u[j]);
      es[j] = pair.eta_prime(u[j]) * sg[j];
    }
    auto delta = [&](std::span<const double> f, std::size_t j) { return grid.shifted(f, j, s) - f[j]; };
    for (std::size_t j = 0; j < n; ++j) {
      data.a.at(k, j) = w[j] * delta(u, j);
      data.b.at(k, j) = w[j] * delta(fu, j);
      data.d.at(k, j) = w[j] * delta(eu, j);
      data.e.at(k, j) = w[j] * delta(qu, j);
      data.sigma_a.at(k, j) = w[j] * delta(sg, j);
      data.sigma_d.at(k, j) = w[j] * delta(es, j);
    }
  }
  for (std::size_t k = 0; k < steps; ++k) {
    const double dw = data.dw[k];
    for (std::size_t j = 0; j < n; ++j) {
      const double b_left = j > 0 ? data.b.at(k, j - 1) : 0.0;
      const double e_left = j > 0 ? data.e.at(k, j - 1) : 0.0;
      data.c_a.at(k, j) = (data.a.at(k + 1, j) - data.a.at(k, j) - data.sigma_a.at(k, j) * dw) / dt +
                          (data.b.at(k, j) - b_left) / dx;
      data.c_d.at(k, j) = (data.d.at(k + 1, j) - data.d.at(k, j) - data.sigma_d.at(k, j) * dw) / dt +
                          (data.e.at(k, j) - e_left) / dx;
    }
  }
  return data;
}

std::vector<InteractionLevel> interaction_refinement_study(const InteractionStudyConfig& cfg) {
  if (cfg.levels < 2) throw InvalidInput("refinement study needs at least two levels");
  if (cfg.n_paths == 0) throw InvalidInput("refinement study needs at least one path");
  const GridSpec grid(cfg.half_width, cfg.n_cells, Boundary::dirichlet_zero);
  const FluxSpec& flux = cfg.flux;
  const EntropyPair pair = make_entropy_pair(flux, cfg.entropy);
  const NoiseSpec& noise = cfg.noise;
  const WeightFunction chi = make_power_weight(cfg.weight_n);
  const double h = static_cast<double>(cfg.shift_cells) * grid.dx();
  const double dt0 = cfg.t_final / static_cast<double>(cfg.base_steps);

  std::vector<double> windowed(cfg.n_paths * cfg.levels);
  std::vector<double> full(cfg.n_paths * cfg.levels);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t m) {
    const std::uint64_t seed = path_seed(cfg.seed, m);
    std::vector<double> dw = brownian_increments(seed, cfg.base_steps, dt0);
    double dt = dt0;
    for (std::size_t level = 0; level < cfg.levels; ++level) {
      if (level > 0) {
        dw = refine_increments(dw, dt, mix_seed(seed) + level);
        dt *= 0.5;
      }
      SolveConfig sc;
      sc.epsilon = cfg.epsilon;
      sc.t_final = cfg.t_final;
      sc.n_steps = dw.size();
      sc.grid = grid;
      sc.seed = seed;
      sc.initial_condition = cfg.initial_condition;
      sc.dw = dw;
      const PathResult path = solve_path(flux, noise, pair, sc);
      const InteractionData data = build_from_solution(path, chi, h, flux, noise, pair);
      const DecayReport decay = check_decay(data);
      if (!decay.ok) {
        std::ostringstream os;
        os << "decay hypothesis fails at level " << level << ": edge |A| = " << decay.a_edge << " of "
           << decay.a_max << ", edge |D| = " << decay.d_edge << " of " << decay.d_max;
        throw PropertyViolation(os.str());
      }
      const auto parts = identity_residual_windows(data, cfg.n_windows);
      CompensatedSum sq;
      for (double r : parts) sq.add(r * r);
      windowed[level * cfg.n_paths + m] = std::sqrt(sq.value());
      full[level * cfg.n_paths + m] = identity_residual(data);
    }
  });

  std::vector<InteractionLevel> out;
  double dt = dt0;
  for (std::size_t level = 0; level < cfg.levels; ++level) {
    const std::span<const double> wl(windowed.data() + level * cfg.n_paths, cfg.n_paths);
    const std::span<const double> fl(full.data() + level * cfg.n_paths, cfg.n_paths);
    out.push_back({level, dt, cfg.base_steps << level, mean_and_error(wl), mean_and_error(fl)});
    dt *= 0.5;
  }
  return out;
}

}  // namespace svlab
