#include "svlab/spde_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "svlab/brownian.hpp"
#include "svlab/error.hpp"
#include "svlab/kernels.hpp"

namespace svlab {

NoiseSpec make_zero_noise() {
  NoiseSpec n;
  n.name = "zero";
  n.kind = NoiseSpec::Kind::zero;
  n.growth_const = 0.0;
  n.sigma = [](double, double) { return 0.0; };
  return n;
}

NoiseSpec make_additive_noise(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidInput("additive noise needs a finite K >= 0");
  NoiseSpec n;
  n.name = "additive";
  n.kind = NoiseSpec::Kind::additive;
  n.growth_const = k;
  n.sigma = [k](double, double) { return k; };
  return n;
}

NoiseSpec make_multiplicative_noise(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidInput("multiplicative noise needs a finite K >= 0");
  NoiseSpec n;
  n.name = "multiplicative";
  n.kind = NoiseSpec::Kind::multiplicative;
  n.growth_const = k;
  n.sigma = [k](double, double u) { return k * u; };
  return n;
}

void verify_noise_growth(const NoiseSpec& noise, std::span<const double> xs, std::span<const double> us) {
  for (double x : xs) {
    for (double u : us) {
      const double s = noise(x, u);
      const double bound = noise.growth_const * (1.0 + std::abs(u));
      if (!std::isfinite(s) || std::abs(s) > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "noise " << noise.name << ": |sigma(" << x << ", " << u << ")| = " << std::abs(s)
           << " exceeds K (1 + |u|) = " << bound;
        throw PropertyViolation(os.str());
      }
    }
  }
}

namespace {

constexpr const char* kInitialConditions[] = {"neg-sin", "sin2", "neg-sin-compact", "smoothed-step", "random-trig",
                                              "zero"};

}  // namespace

bool is_known_initial_condition(const std::string& name) {
  return std::find(std::begin(kInitialConditions), std::end(kInitialConditions), name) != std::end(kInitialConditions);
}

std::vector<double> make_initial_condition(const std::string& name, const GridSpec& grid, std::uint64_t seed) {
  const double pi = std::numbers::pi;
  const double l = grid.half_width();
  std::vector<double> u(grid.n_cells());
  if (name == "neg-sin") {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = -std::sin(pi * grid.x(j) / l);
  } else if (name == "sin2") {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::sin(2.0 * pi * grid.x(j) / l);
  } else if (name == "neg-sin-compact") {
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double x = grid.x(j);
      u[j] = std::abs(x) <= 1.0 ? -std::sin(pi * x) : 0.0;
    }
  } else if (name == "smoothed-step") {
    const double width = 4.0 * grid.dx();
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::tanh(grid.x(j) / width);
  } else if (name == "random-trig") {
    std::mt19937_64 gen(mix_seed(seed));
    std::normal_distribution<double> normal(0.0, 1.0);
    double a[4];
    double b[4];
    for (int k = 0; k < 4; ++k) {
      a[k] = normal(gen);
      b[k] = normal(gen);
    }
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double x = grid.x(j);
      double s = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double w = (k + 1) * pi * x / l;
        s += (a[k] * std::cos(w) + b[k] * std::sin(w)) / (k + 1);
      }
      u[j] = s;
    }
  } else if (name != "zero") {
    throw InvalidInput("unknown initial condition '" + name + "'");
  }
  return u;
}

double max_wave_speed(const FluxSpec& flux, double m) {
  if (flux.kernel_kind == kernels::FluxKind::zero && flux.has_kernel) return 0.0;
  return std::max({std::abs(flux.f_prime(m)), std::abs(flux.f_prime(-m)), std::abs(flux.f_prime(flux.sonic_point))});
}

double certified_speed(const SolveConfig& cfg) { return kCflSafety * cfg.grid.dx() / cfg.dt() - 1e-12; }

void check_cfl(const FluxSpec& flux, const SolveConfig& cfg, double max_abs_u) {
  const double dx = cfg.grid.dx();
  const double dt = cfg.dt();
  const double viscous = kCflSafety * dx * dx / (2.0 * cfg.epsilon);
  if (dt > viscous * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "CFL: dt = " << dt << " exceeds the viscous limit " << viscous << " (eps = " << cfg.epsilon
       << ", dx = " << dx << ")";
    throw NumericalAbort(os.str());
  }
  const double speed = max_wave_speed(flux, max_abs_u);
  const double hyperbolic = kCflSafety * dx / (speed + 1e-12);
  if (dt > hyperbolic * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "CFL: dt = " << dt << " exceeds the hyperbolic limit " << hyperbolic << " for |u| <= " << max_abs_u;
    throw NumericalAbort(os.str());
  }
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void store_row(PathResult& res, const EntropyPair& pair, std::span<const double> cur, std::size_t slot) {
  const auto& grid = res.grid;
  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  const std::size_t base = slot * n;
  for (std::size_t j = 0; j < n; ++j) {
    const double up = grid.shifted(cur, j, 1);
    const double d = (up - cur[j]) / dx;
    const double g = res.epsilon * (d * d);
    res.u[base + j] = cur[j];
    res.eps_grad_sq[base + j] = g;
    res.mu_eps[base + j] = pair.eta_second(cur[j]) * g;
  }
}

}  // namespace

PathResult solve_path(const FluxSpec& flux, const NoiseSpec& noise, const EntropyPair& pair, const SolveConfig& cfg) {
  if (cfg.n_steps == 0 || !(cfg.t_final > 0.0)) throw InvalidInput("solver needs t_final > 0 and n_steps > 0");
  if (!(cfg.epsilon > 0.0)) throw InvalidInput("solver needs a positive viscosity");
  if (cfg.store_stride == 0 || cfg.n_steps % cfg.store_stride != 0) {
    throw InvalidInput("store_stride must divide n_steps");
  }
  const GridSpec& grid = cfg.grid;
  const std::size_t n = grid.n_cells();
  const double dt = cfg.dt();
  const double dx = grid.dx();

  std::vector<double> u0 = cfg.u0.empty() ? make_initial_condition(cfg.initial_condition, grid, cfg.seed) : cfg.u0;
  if (u0.size() != n) throw InvalidInput("initial state has the wrong number of cells");
  for (double v : u0) {
    if (!std::isfinite(v)) throw InvalidInput("initial state is not finite");
  }
  std::vector<double> dw = cfg.dw.empty() ? brownian_increments(cfg.seed, cfg.n_steps, dt) : cfg.dw;
  if (dw.size() != cfg.n_steps) throw InvalidInput("supplied Brownian increments do not match n_steps");

  double m = max_abs(u0);
  check_cfl(flux, cfg, m);
  const double speed_limit = certified_speed(cfg);

  PathResult res;
  res.grid = grid;
  res.epsilon = cfg.epsilon;
  res.dt = dt;
  res.n_steps = cfg.n_steps;
  res.stride = cfg.store_stride;
  res.seed = cfg.seed;
  res.u.resize(res.n_saved() * n);
  res.eps_grad_sq.resize(res.n_saved() * n);
  res.mu_eps.resize(res.n_saved() * n);
  res.max_abs_u = m;

  const auto& table = kernels::active();
  const bool vector_flux = flux.has_kernel && flux.sonic_point == 0.0;
  const bool periodic = grid.boundary() == Boundary::periodic;
  const double lambda = dt / dx;
  const double nu = cfg.epsilon * dt / (dx * dx);
  const double k_sigma = noise.growth_const;
  const std::vector<double> xs = grid.centres();

  std::vector<double> cur(n + 2, 0.0);
  std::vector<double> next(n + 2, 0.0);
  std::vector<double> face(n + 1);
  std::vector<double> amp(n, 0.0);
  std::copy(u0.begin(), u0.end(), cur.begin() + 1);
  store_row(res, pair, std::span<const double>(cur).subspan(1, n), 0);

  for (std::size_t k = 0; k < cfg.n_steps; ++k) {
    if (periodic) {
      cur[0] = cur[n];
      cur[n + 1] = cur[1];
    } else {
      cur[0] = 0.0;
      cur[n + 1] = 0.0;
    }
    if (vector_flux) {
      table.eo_faces(flux.kernel_kind, cur.data(), cur.data() + 1, face.data(), n + 1);
    } else {
      for (std::size_t i = 0; i <= n; ++i) face[i] = flux.engquist_osher(cur[i], cur[i + 1]);
    }
    switch (noise.kind) {
      case NoiseSpec::Kind::zero:
        break;
      case NoiseSpec::Kind::additive:
        std::fill(amp.begin(), amp.end(), k_sigma);
        break;
      case NoiseSpec::Kind::multiplicative:
        for (std::size_t i = 0; i < n; ++i) amp[i] = k_sigma * cur[i + 1];
        break;
      case NoiseSpec::Kind::custom:
        for (std::size_t i = 0; i < n; ++i) amp[i] = noise(xs[i], cur[i + 1]);
        break;
    }
    table.explicit_update(cur.data() + 1, face.data(), amp.data(), lambda, nu, dw[k], next.data() + 1, n);
    std::swap(cur, next);

    const std::span<const double> state(cur.data() + 1, n);
    m = 0.0;
    for (double v : state) {
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite state at step " << k + 1 << " (t = " << dt * static_cast<double>(k + 1) << ")";
        throw NumericalAbort(os.str());
      }
      m = std::max(m, std::abs(v));
    }
    res.max_abs_u = std::max(res.max_abs_u, m);
    if (max_wave_speed(flux, m) > speed_limit) {
      std::ostringstream os;
      os << "state left the CFL-certified range at step " << k + 1 << ": max |u| = " << m
         << ", wave speed " << max_wave_speed(flux, m) << " > certified " << speed_limit
         << "; rerun with a smaller dt";
      throw NumericalAbort(os.str());
    }
    if ((k + 1) % cfg.store_stride == 0) store_row(res, pair, state, (k + 1) / cfg.store_stride);
  }
  res.dw = std::move(dw);
  return res;
}

namespace {

[[noreturn]] void rethrow_tagged(std::exception_ptr ep, std::size_t index) {
  const std::string tag = "path " + std::to_string(index) + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    throw ConfigError(e.key(), tag + e.what());
  } catch (const NumericalAbort& e) {
    throw NumericalAbort(tag + e.what());
  } catch (const PropertyViolation& e) {
    throw PropertyViolation(tag + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(tag + e.what());
  } catch (const std::exception& e) {
    throw Error(tag + e.what());
  }
}

}  // namespace

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job) {
  if (n == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) rethrow_tagged(failure, failed_index);
}

std::vector<PathResult> solve_ensemble(const FluxSpec& flux, const NoiseSpec& noise, const EntropyPair& pair,
                                       const SolveConfig& cfg, std::size_t n_paths, std::uint64_t seed_base,
                                       std::size_t threads) {
  if (n_paths == 0) throw InvalidInput("ensemble needs at least one path");
  if (!cfg.dw.empty()) throw InvalidInput("ensembles draw their own increments; dw override is per path");
  std::vector<PathResult> out(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t m) {
    SolveConfig local = cfg;
    local.seed = path_seed(seed_base, m);
    out[m] = solve_path(flux, noise, pair, local);
  });
  return out;
}

AprioriMoments apriori_moments(std::span<const PathResult> ensemble, const WeightFunction& chi, double p, double r) {
  if (ensemble.empty()) throw InvalidInput("moments need a nonempty ensemble");
  if (!(p >= 1.0) || !(r >= 1.0)) throw InvalidInput("moments need p >= 1 and r >= 1");
  std::vector<double> sup_lp(ensemble.size());
  std::vector<double> diss(ensemble.size());
  std::vector<double> meas(ensemble.size());
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    const auto& path = ensemble[m];
    const auto w = chi.sample(path.grid);
    const double dx = path.grid.dx();
    double sup = 0.0;
    for (std::size_t k = 0; k < path.n_saved(); ++k) sup = std::max(sup, weighted_lp_norm(path.row(k), chi, p, path.grid));
    CompensatedSum g_sum;
    CompensatedSum mu_sum;
    for (std::size_t k = 0; k + 1 < path.n_saved(); ++k) {
      const auto g = path.grad_row(k);
      const auto mu = path.mu_row(k);
      for (std::size_t j = 0; j < w.size(); ++j) {
        g_sum.add(g[j] * w[j]);
        mu_sum.add(std::abs(mu[j]) * w[j]);
      }
    }
    const double cell_time = dx * path.saved_dt();
    sup_lp[m] = std::pow(sup, r);
    diss[m] = std::pow(g_sum.value() * cell_time, r);
    meas[m] = std::pow(mu_sum.value() * cell_time, r);
  }
  return {mean_and_error(sup_lp), mean_and_error(diss), mean_and_error(meas)};
}

TestFunction bump_test_function(double centre, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("bump test function needs a positive radius");
  auto parts = [centre, radius](double x, double& r, double& s, double& phi) {
    r = (x - centre) / radius;
    s = 1.0 - r * r;
    phi = s > 0.0 ? std::exp(-1.0 / s) : 0.0;
  };
  TestFunction t;
  t.value = [parts](double x) {
    double r, s, phi;
    parts(x, r, s, phi);
    return phi;
  };
  t.d1 = [parts, radius](double x) {
    double r, s, phi;
    parts(x, r, s, phi);
    if (phi == 0.0) return 0.0;
    return phi * (-2.0 * r / (radius * s * s));
  };
  t.d2 = [parts, radius](double x) {
    double r, s, phi;
    parts(x, r, s, phi);
    if (phi == 0.0) return 0.0;
    const double s2 = s * s;
    return phi / (radius * radius) * (4.0 * r * r / (s2 * s2) - 2.0 / s2 - 8.0 * r * r / (s2 * s));
  };
  return t;
}

double entropy_balance_residual(const PathResult& path, const FluxSpec& flux, const NoiseSpec& noise,
                                const EntropyPair& pair, const TestFunction& phi) {
  (void)flux;
  if (path.stride != 1) throw InvalidInput("entropy balance needs every time step stored (stride 1)");
  const auto& grid = path.grid;
  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  std::vector<double> p0(n), p1(n), p2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j);
    p0[j] = phi.value(x);
    p1[j] = phi.d1(x);
    p2[j] = phi.d2(x);
  }
  CompensatedSum lhs;
  const auto first = path.row(0);
  const auto last = path.row(path.n_saved() - 1);
  for (std::size_t j = 0; j < n; ++j) lhs.add(p0[j] * (pair.eta(last[j]) - pair.eta(first[j])) * dx);

  CompensatedSum rhs;
  for (std::size_t k = 0; k < path.n_steps; ++k) {
    const auto u = path.row(k);
    const auto mu = path.mu_row(k);
    CompensatedSum drift;
    CompensatedSum mart;
    for (std::size_t j = 0; j < n; ++j) {
      if (p0[j] == 0.0 && p1[j] == 0.0 && p2[j] == 0.0) continue;
      const double x = grid.x(j);
      const double s = noise(x, u[j]);
      drift.add(pair.q(u[j]) * p1[j] + path.epsilon * pair.eta(u[j]) * p2[j] - p0[j] * mu[j] +
                0.5 * p0[j] * pair.eta_second(u[j]) * s * s);
      mart.add(p0[j] * pair.eta_prime(u[j]) * s);
    }
    rhs.add(drift.value() * dx * path.dt);
    rhs.add(mart.value() * dx * path.dw[k]);
  }
  return std::abs(lhs.value() - rhs.value());
}

}  // namespace svlab
