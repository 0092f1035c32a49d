#include "svlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "svlab/error.hpp"
#include "svlab/kernels.hpp"
#include "svlab/numerics.hpp"

namespace svlab {

std::string to_string(ModulusKind kind) {
  switch (kind) {
    case ModulusKind::spatial_sup:
      return "spatial_sup";
    case ModulusKind::spatial_mollified:
      return "spatial_mollified";
    case ModulusKind::temporal_sup:
      return "temporal_sup";
    case ModulusKind::power:
      return "power";
  }
  return "unknown";
}

void ModulusCurve::validate() const {
  if (deltas.size() != values.size() || deltas.size() != std_errs.size()) {
    throw PropertyViolation("modulus curve columns differ in length");
  }
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] > deltas[i - 1])) throw PropertyViolation("modulus curve scales are not strictly increasing");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw PropertyViolation("modulus curve holds a negative or non-finite value");
  }
  if (kind == ModulusKind::spatial_sup || kind == ModulusKind::temporal_sup) {
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] < values[i - 1]) {
        std::ostringstream os;
        os << to_string(kind) << " modulus decreases between delta = " << deltas[i - 1] << " and " << deltas[i];
        throw PropertyViolation(os.str());
      }
    }
  }
}

namespace {

struct Layout {
  GridSpec grid{1.0, 64};
  GridSpec::Window window{0, 0};
  std::vector<double> w;  // chi on the window
  std::size_t intervals = 0;
  double cell_time = 0.0;  // dx * saved dt
};

Layout layout_for(std::span<const PathResult> ensemble, const WeightFunction& chi, const ModulusOptions& opts) {
  if (ensemble.empty()) throw InvalidInput("modulus needs a nonempty ensemble");
  const PathResult& first = ensemble.front();
  for (const auto& p : ensemble) {
    if (!(p.grid == first.grid) || p.n_saved() != first.n_saved() || p.saved_dt() != first.saved_dt()) {
      throw InvalidInput("ensemble members must share grid and time layout");
    }
  }
  if (first.n_saved() < 2) throw InvalidInput("modulus needs at least two stored times");
  Layout l;
  l.grid = first.grid;
  const double margin = opts.margin < 0.0 ? first.grid.half_width() / 8.0 : opts.margin;
  l.window = first.grid.interior(margin);
  if (l.window.end <= l.window.begin) throw InvalidInput("interior window is empty");
  const auto all = chi.sample(first.grid);
  l.w.assign(all.begin() + static_cast<std::ptrdiff_t>(l.window.begin),
             all.begin() + static_cast<std::ptrdiff_t>(l.window.end));
  l.intervals = first.n_saved() - 1;
  l.cell_time = first.grid.dx() * first.saved_dt();
  return l;
}

bool is_integer_power(double p) { return p >= 1.0 && p <= 64.0 && p == std::round(p); }

// sum over rows k in [0, rows) and window cells of |u^k_{j+s} - u^k_j|^p chi_j, times dx dt.
double shift_functional(const PathResult& path, const Layout& l, std::ptrdiff_t s, double p, std::size_t rows) {
  const auto& table = kernels::active();
  const std::size_t len = l.window.end - l.window.begin;
  std::vector<double> buf(len);
  CompensatedSum total;
  const bool integer = is_integer_power(p);
  for (std::size_t k = 0; k < rows; ++k) {
    const auto u = path.row(k);
    for (std::size_t j = 0; j < len; ++j) buf[j] = l.grid.shifted(u, l.window.begin + j, s);
    const double* base = u.data() + l.window.begin;
    if (integer) {
      total.add(table.pow_diff_sum(buf.data(), base, l.w.data(), len, static_cast<int>(p)));
    } else {
      double acc = 0.0;
      for (std::size_t j = 0; j < len; ++j) acc += std::pow(std::abs(buf[j] - base[j]), p) * l.w[j];
      total.add(acc);
    }
  }
  return total.value() * l.cell_time;
}

double symmetric_functional(const PathResult& path, const Layout& l, std::ptrdiff_t s) {
  const auto& table = kernels::active();
  const std::size_t len = l.window.end - l.window.begin;
  std::vector<double> plus(len), minus(len);
  CompensatedSum total;
  for (std::size_t k = 0; k < l.intervals; ++k) {
    const auto u = path.row(k);
    for (std::size_t j = 0; j < len; ++j) {
      plus[j] = l.grid.shifted(u, l.window.begin + j, s);
      minus[j] = l.grid.shifted(u, l.window.begin + j, -s);
    }
    total.add(table.pow_diff_sum(plus.data(), minus.data(), l.w.data(), len, 1));
  }
  return total.value() * l.cell_time;
}

double lag_functional(const PathResult& path, const Layout& l, std::size_t lag, std::size_t rows) {
  const auto& table = kernels::active();
  const std::size_t len = l.window.end - l.window.begin;
  CompensatedSum total;
  for (std::size_t k = 0; k < rows; ++k) {
    const double* a = path.row(k + lag).data() + l.window.begin;
    const double* b = path.row(k).data() + l.window.begin;
    total.add(table.pow_diff_sum(a, b, l.w.data(), len, 1));
  }
  return total.value() * l.cell_time;
}

void check_increasing(std::span<const double> deltas, const char* what) {
  if (deltas.empty()) throw InvalidInput(std::string(what) + " list is empty");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] > deltas[i - 1])) throw InvalidInput(std::string(what) + " list must be strictly increasing");
  }
}

// Number of whole steps of size unit in length, rejecting misalignment.
std::size_t aligned_count(double length, double unit, const char* what) {
  const double r = length / unit;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    std::ostringstream os;
    os << what << " = " << length << " is not a multiple of " << unit;
    throw InvalidInput(os.str());
  }
  return static_cast<std::size_t>(n);
}

ModulusCurve collect(ModulusKind kind, double power, const std::vector<double>& deltas,
                     const std::vector<std::vector<double>>& per_path, std::size_t n_paths) {
  ModulusCurve c;
  c.kind = kind;
  c.power = power;
  c.label = to_string(kind);
  c.n_paths = n_paths;
  std::vector<double> column(n_paths);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (std::size_t m = 0; m < n_paths; ++m) column[m] = per_path[m][i];
    const auto me = mean_and_error(column);
    c.deltas.push_back(deltas[i]);
    c.values.push_back(me.mean);
    c.std_errs.push_back(me.std_err);
  }
  return c;
}

}  // namespace

ModulusCurve spatial_sup_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi,
                                 std::span<const double> deltas, std::size_t z_per_delta, const ModulusOptions& opts) {
  check_increasing(deltas, "delta");
  if (z_per_delta == 0) throw InvalidInput("z_per_delta must be positive");
  const Layout l = layout_for(ensemble, chi, opts);
  const double dx = l.grid.dx();
  std::vector<double> kept;
  std::vector<double> skipped;
  std::vector<std::size_t> reach;
  for (double d : deltas) {
    if (d < dx * (1.0 - 1e-12)) {
      skipped.push_back(d);
      continue;
    }
    kept.push_back(d);
    reach.push_back(static_cast<std::size_t>(std::floor(d / dx + 1e-9)));
  }
  const std::size_t s_max = reach.empty() ? 0 : reach.back();
  std::vector<std::vector<double>> per_path(ensemble.size(), std::vector<double>(kept.size()));
  parallel_for(ensemble.size(), opts.threads, [&](std::size_t m) {
    std::vector<double> g(s_max + 1, 0.0);
    for (std::size_t s = 1; s <= s_max; ++s) {
      const auto sp = static_cast<std::ptrdiff_t>(s);
      g[s] = std::max(shift_functional(ensemble[m], l, sp, 1.0, l.intervals),
                      shift_functional(ensemble[m], l, -sp, 1.0, l.intervals));
    }
    double running = 0.0;
    std::size_t s = 1;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (; s <= reach[i]; ++s) running = std::max(running, g[s]);
      per_path[m][i] = running;
    }
  });
  ModulusCurve c = collect(ModulusKind::spatial_sup, 1.0, kept, per_path, ensemble.size());
  c.skipped = std::move(skipped);
  return c;
}

ModulusCurve mollified_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi,
                               const FriedrichsKernel& kernel, std::span<const double> deltas,
                               const ModulusOptions& opts) {
  check_increasing(deltas, "delta");
  const Layout l = layout_for(ensemble, chi, opts);
  const double dx = l.grid.dx();
  std::vector<double> kept;
  std::vector<double> skipped;
  std::vector<DiscreteStencil> stencils;
  for (double d : deltas) {
    if (d < dx * (1.0 - 1e-12)) {
      skipped.push_back(d);
      continue;
    }
    kept.push_back(d);
    stencils.push_back(ApproximateIdentity(kernel, d).stencil(dx));
  }
  const std::size_t s_max = stencils.empty() ? 0 : static_cast<std::size_t>(stencils.back().last());
  std::vector<std::vector<double>> per_path(ensemble.size(), std::vector<double>(kept.size()));
  parallel_for(ensemble.size(), opts.threads, [&](std::size_t m) {
    std::vector<double> h(2 * s_max + 1, 0.0);
    for (std::size_t s = 1; s <= s_max; ++s) {
      const double v = symmetric_functional(ensemble[m], l, static_cast<std::ptrdiff_t>(s));
      h[s_max + s] = v;
      h[s_max - s] = symmetric_functional(ensemble[m], l, -static_cast<std::ptrdiff_t>(s));
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const auto& st = stencils[i];
      CompensatedSum acc;
      for (std::ptrdiff_t s = st.first; s <= st.last(); ++s) {
        acc.add(st.at(s) * h[static_cast<std::size_t>(s + static_cast<std::ptrdiff_t>(s_max))]);
      }
      per_path[m][i] = acc.value();
    }
  });
  ModulusCurve c = collect(ModulusKind::spatial_mollified, 1.0, kept, per_path, ensemble.size());
  c.skipped = std::move(skipped);
  return c;
}

ModulusCurve temporal_sup_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi,
                                  std::span<const double> deltas, const ModulusOptions& opts) {
  check_increasing(deltas, "delta");
  const Layout l = layout_for(ensemble, chi, opts);
  const double dts = ensemble.front().saved_dt();
  const double t_final = dts * static_cast<double>(l.intervals);
  if (deltas.back() >= t_final * (1.0 - 1e-12)) throw InvalidInput("temporal modulus needs delta < T");
  std::vector<double> kept;
  std::vector<double> skipped;
  std::vector<std::size_t> reach;
  for (double d : deltas) {
    if (d < dts * (1.0 - 1e-12)) {
      skipped.push_back(d);
      continue;
    }
    kept.push_back(d);
    reach.push_back(aligned_count(d, dts, "temporal delta"));
  }
  const std::size_t lag_max = reach.empty() ? 0 : reach.back();
  const std::size_t rows = l.intervals - lag_max;
  std::vector<std::vector<double>> per_path(ensemble.size(), std::vector<double>(kept.size()));
  parallel_for(ensemble.size(), opts.threads, [&](std::size_t m) {
    double running = 0.0;
    std::size_t lag = 1;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (; lag <= reach[i]; ++lag) running = std::max(running, lag_functional(ensemble[m], l, lag, rows));
      per_path[m][i] = running;
    }
  });
  ModulusCurve c = collect(ModulusKind::temporal_sup, 1.0, kept, per_path, ensemble.size());
  c.skipped = std::move(skipped);
  return c;
}

ModulusCurve power_modulus(std::span<const PathResult> ensemble, const WeightFunction& chi, double power,
                           std::span<const double> z_list, const ModulusOptions& opts) {
  if (!(power >= 1.0)) throw InvalidInput("power modulus needs power >= 1");
  check_increasing(z_list, "z");
  const Layout l = layout_for(ensemble, chi, opts);
  std::vector<std::ptrdiff_t> shifts;
  for (double z : z_list) shifts.push_back(l.grid.cells_for(z, "shift z"));
  std::vector<double> zs(z_list.begin(), z_list.end());
  std::vector<std::vector<double>> per_path(ensemble.size(), std::vector<double>(zs.size()));
  parallel_for(ensemble.size(), opts.threads, [&](std::size_t m) {
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      per_path[m][i] = shift_functional(ensemble[m], l, shifts[i], power, l.intervals);
    }
  });
  ModulusCurve c = collect(ModulusKind::power, power, zs, per_path, ensemble.size());
  std::ostringstream os;
  os << "power_" << power;
  c.label = os.str();
  return c;
}

RateFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidInput("rate fit needs at least three points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) {
      std::ostringstream os;
      os << "rate fit needs positive values; got (" << x[i] << ", " << y[i] << ")";
      throw InvalidInput(os.str());
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = compensated_total(lx) / static_cast<double>(n);
  const double my = compensated_total(ly) / static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("rate fit needs distinct scales");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (f.intercept + f.slope * lx[i]);
    ssr += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  f.slope_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  f.window_lo = 0;
  f.window_hi = n;
  return f;
}

RateFit fit_rate(const ModulusCurve& curve, std::size_t lo, std::size_t hi) {
  if (hi > curve.deltas.size() || lo >= hi || hi - lo < 3) throw InvalidInput("fit window must hold at least three points");
  RateFit f = fit_loglog(std::span<const double>(curve.deltas).subspan(lo, hi - lo),
                         std::span<const double>(curve.values).subspan(lo, hi - lo));
  f.window_lo = lo;
  f.window_hi = hi;
  return f;
}

std::pair<std::size_t, std::size_t> fit_window(std::span<const double> deltas, double floor, double ceiling) {
  std::size_t lo = 0;
  while (lo < deltas.size() && deltas[lo] < 4.0 * floor * (1.0 - 1e-12)) ++lo;
  std::size_t hi = lo;
  while (hi < deltas.size() && deltas[hi] <= ceiling / 4.0 * (1.0 + 1e-12)) ++hi;
  return {lo, hi};
}

double kruzkov_rho_t(const std::function<double(double)>& rho_x, double c1, double c2, double c3, int m_f, int m_g,
                     double delta) {
  if (!(delta > 0.0)) throw InvalidInput("rho_t needs delta > 0");
  if (c1 < 0.0 || c2 < 0.0 || c3 < 0.0 || m_f < 0 || m_g < 0) throw InvalidInput("rho_t needs nonnegative constants");
  const double lo = std::log(1e-8);
  const double hi = std::log(1e2);
  const double sqrt_delta = std::sqrt(delta);
  auto objective = [&](double log_nu) {
    const double nu = std::exp(log_nu);
    return c1 * rho_x(nu) + c2 * delta / std::pow(nu, m_f) + c3 * sqrt_delta / std::pow(nu, m_g);
  };

  constexpr std::size_t kScan = 2000;
  const double step = (hi - lo) / static_cast<double>(kScan);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  double previous_rho = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= kScan; ++i) {
    const double t = lo + step * static_cast<double>(i);
    const double r = rho_x(std::exp(t));
    if (!(r >= previous_rho - 1e-12 * std::abs(previous_rho))) {
      std::ostringstream os;
      os << "rho_x is not nondecreasing near nu = " << std::exp(t);
      throw InvalidInput(os.str());
    }
    previous_rho = r;
    const double v = objective(t);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
  double b = lo + step * static_cast<double>(std::min(best + 1, kScan));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  // A bracket of width 1e-10 in log nu pins the minimiser far below the 1e-8 value tolerance.
  for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  return std::min({best_value, f1, f2});
}

std::vector<std::optional<double>> sup_vs_mollified_consistency(std::span<const PathResult> ensemble,
                                                                const WeightFunction& chi,
                                                                const FriedrichsKernel& kernel,
                                                                std::span<const double> deltas,
                                                                const ModulusOptions& opts) {
  const ModulusCurve sup = spatial_sup_modulus(ensemble, chi, deltas, 1, opts);
  const ModulusCurve moll = mollified_modulus(ensemble, chi, kernel, deltas, opts);
  std::vector<std::optional<double>> out;
  for (double d : deltas) {
    const auto is = std::find(sup.deltas.begin(), sup.deltas.end(), d);
    const auto im = std::find(moll.deltas.begin(), moll.deltas.end(), d);
    if (is == sup.deltas.end() || im == moll.deltas.end()) {
      out.emplace_back();
      continue;
    }
    const double num = sup.values[static_cast<std::size_t>(is - sup.deltas.begin())];
    const double den = moll.values[static_cast<std::size_t>(im - moll.deltas.begin())];
    if (den > 0.0) {
      out.emplace_back(num / den);
    } else {
      out.emplace_back();
    }
  }
  return out;
}

HolderCheck holder_consistency(std::span<const PathResult> ensemble, const WeightFunction& chi, double z,
                               const ModulusOptions& opts) {
  const double zs[] = {z};
  const double first = power_modulus(ensemble, chi, 1.0, zs, opts).values[0];
  const double fourth = power_modulus(ensemble, chi, 4.0, zs, opts).values[0];
  const Layout l = layout_for(ensemble, chi, opts);
  const double mass = compensated_total(l.w) * l.grid.dx();
  const double horizon = ensemble.front().saved_dt() * static_cast<double>(l.intervals);
  return {first, std::pow(fourth, 0.25) * std::pow(mass * horizon, 0.75)};
}

double mu_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidInput("mu needs p >= 1");
  return 1.0 - 1.0 / p;
}

double mu_x_exponent(double p, double p_f, double p_eta) { return mu_exponent(p) / (p_f + p_eta + 2.0); }

PathResult frozen_path(const GridSpec& grid, std::span<const double> u, double t_final, std::size_t n_steps) {
  if (u.size() != grid.n_cells()) throw InvalidInput("frozen profile size does not match the grid");
  if (n_steps == 0 || !(t_final > 0.0)) throw InvalidInput("frozen path needs t_final > 0 and n_steps > 0");
  PathResult p;
  p.grid = grid;
  p.dt = t_final / static_cast<double>(n_steps);
  p.n_steps = n_steps;
  p.stride = 1;
  p.u.reserve((n_steps + 1) * u.size());
  for (std::size_t k = 0; k <= n_steps; ++k) p.u.insert(p.u.end(), u.begin(), u.end());
  p.eps_grad_sq.assign(p.u.size(), 0.0);
  p.mu_eps.assign(p.u.size(), 0.0);
  p.dw.assign(n_steps, 0.0);
  for (double v : u) p.max_abs_u = std::max(p.max_abs_u, std::abs(v));
  return p;
}

}  // namespace svlab
