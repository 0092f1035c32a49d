#include "svlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "svlab/error.hpp"
#include "svlab/numerics.hpp"

namespace svlab {

double FluxSpec::engquist_osher(double left, double right) const {
  const double us = sonic_point;
  return f(std::max(left, us)) + f(std::min(right, us)) - f(us);
}

FluxSpec make_burgers() {
  FluxSpec flux;
  flux.name = "burgers";
  flux.f = [](double u) { return 0.5 * u * u; };
  flux.f_prime = [](double u) { return u; };
  flux.c_f = 1.0;
  flux.p_f = 1.0;
  flux.has_kernel = true;
  flux.kernel_kind = kernels::FluxKind::burgers;
  return flux;
}

FluxSpec make_quartic() {
  FluxSpec flux;
  flux.name = "quartic";
  flux.f = [](double u) { return 0.25 * (u * u) * (u * u); };
  flux.f_prime = [](double u) { return u * u * u; };
  flux.p_f = 3.0;
  const auto lattice = Lattice{}.points();
  flux.c_f = measure_nonlinearity(flux.f_prime, flux.p_f, lattice);
  flux.has_kernel = true;
  flux.kernel_kind = kernels::FluxKind::quartic;
  return flux;
}

FluxSpec make_zero_flux() {
  FluxSpec flux;
  flux.name = "zero";
  flux.f = [](double) { return 0.0; };
  flux.f_prime = [](double) { return 0.0; };
  flux.c_f = 0.0;
  flux.p_f = 1.0;
  flux.has_kernel = true;
  flux.kernel_kind = kernels::FluxKind::zero;
  return flux;
}

EntropyFunctions entropy_same_as_flux(const FluxSpec& flux) {
  EntropyFunctions e;
  e.name = "same-as-flux";
  e.eta = flux.f;
  e.eta_prime = flux.f_prime;
  e.c_eta = flux.c_f;
  e.p_eta = flux.p_f;
  if (flux.name == "burgers") {
    e.eta_second = [](double) { return 1.0; };
    e.p0 = 2.0;
  } else if (flux.name == "quartic") {
    e.eta_second = [](double u) { return 3.0 * u * u; };
    e.p0 = 4.0;
  } else {
    throw InvalidInput("entropy 'same-as-flux' needs a flux with a known second derivative, got " + flux.name);
  }
  return e;
}

EntropyFunctions power_entropy(double p0) {
  if (!(p0 >= 2.0) || !std::isfinite(p0)) throw InvalidInput("power entropy needs p0 >= 2");
  EntropyFunctions e;
  std::ostringstream os;
  os << "power:" << p0;
  e.name = os.str();
  e.eta = [p0](double u) { return std::pow(std::abs(u), p0); };
  e.eta_prime = [p0](double u) { return p0 * std::pow(std::abs(u), p0 - 1.0) * (u < 0.0 ? -1.0 : 1.0); };
  e.eta_second = [p0](double u) { return p0 * (p0 - 1.0) * std::pow(std::abs(u), p0 - 2.0); };
  e.p0 = p0;
  e.p_eta = p0 - 1.0;
  e.c_eta = measure_nonlinearity(e.eta_prime, e.p_eta, Lattice{}.points());
  return e;
}

EntropyFunctions linear_entropy() {
  EntropyFunctions e;
  e.name = "linear";
  e.eta = [](double u) { return u; };
  e.eta_prime = [](double) { return 1.0; };
  e.eta_second = [](double) { return 0.0; };
  e.c_eta = 0.0;
  e.p_eta = 1.0;
  e.p0 = 2.0;
  return e;
}

std::vector<double> Lattice::points() const {
  if (!(half_width > 0.0) || !(step > 0.0)) throw InvalidInput("lattice needs positive half width and step");
  const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / step));
  std::vector<double> pts(n + 1);
  for (std::size_t i = 0; i <= n; ++i) pts[i] = -half_width + static_cast<double>(i) * step;
  return pts;
}

EntropyFlux::EntropyFlux(const FluxSpec& flux, const EntropyFunctions& entropy, Lattice lattice, double anchor_value)
    : eta_prime_(entropy.eta_prime), f_prime_(flux.f_prime), lattice_(lattice) {
  const double zero_index = lattice.half_width / lattice.step;
  if (std::abs(zero_index - std::round(zero_index)) > 1e-9) {
    throw InvalidInput("entropy flux lattice must contain u = 0 as a node");
  }
  nodes_ = lattice.points();
  values_.assign(nodes_.size(), 0.0);
  slopes_.resize(nodes_.size());
  const auto i0 = static_cast<std::size_t>(std::llround(zero_index));
  auto integrand = [this](double s) { return eta_prime_(s) * f_prime_(s); };
  values_[i0] = anchor_value;
  for (std::size_t i = i0 + 1; i < nodes_.size(); ++i) {
    values_[i] = values_[i - 1] + integrate(integrand, nodes_[i - 1], nodes_[i]);
  }
  for (std::size_t i = i0; i-- > 0;) {
    values_[i] = values_[i + 1] - integrate(integrand, nodes_[i], nodes_[i + 1]);
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) slopes_[i] = integrand(nodes_[i]);
}

double EntropyFlux::operator()(double u) const {
  const double lo = nodes_.front();
  const double hi = nodes_.back();
  auto integrand = [this](double s) { return eta_prime_(s) * f_prime_(s); };
  if (u > hi) return values_.back() + integrate(integrand, hi, u);
  if (u < lo) return values_.front() - integrate(integrand, u, lo);
  const double h = lattice_.step;
  auto i = static_cast<std::size_t>(std::floor((u - lo) / h));
  i = std::min(i, nodes_.size() - 2);
  const double t = (u - nodes_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
}

EntropyFlux entropy_flux(const FluxSpec& flux, const EntropyFunctions& entropy, Lattice lattice) {
  return EntropyFlux(flux, entropy, lattice);
}

double EntropyPair::engquist_osher_q(double left, double right, double sonic_point) const {
  return q(std::max(left, sonic_point)) + q(std::min(right, sonic_point)) - q(sonic_point);
}

EntropyPair make_entropy_pair(const FluxSpec& flux, EntropyFunctions functions, Lattice lattice,
                              double anchor_value) {
  EntropyFlux q(flux, functions, lattice, anchor_value);
  const double k = measure_growth_constant(functions, lattice.points());
  return EntropyPair{std::move(functions), std::move(q), k};
}

double measure_nonlinearity(const ScalarFn& g, double p, std::span<const double> lattice) {
  if (lattice.size() < 2) throw InvalidInput("nonlinearity check needs at least two lattice points");
  std::vector<double> gv(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) gv[i] = g(lattice[i]);
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      const double w = lattice[i];
      const double v = lattice[j];
      if (!(w < v)) continue;
      inf = std::min(inf, (gv[j] - gv[i]) / std::pow(v - w, p));
    }
  }
  return inf;
}

double measure_growth_constant(const EntropyFunctions& e, std::span<const double> lattice) {
  double k = 0.0;
  for (double u : lattice) {
    const double a = std::abs(u);
    k = std::max(k, std::abs(e.eta(u)) / (1.0 + std::pow(a, e.p0)));
    k = std::max(k, std::abs(e.eta_prime(u)) / (1.0 + std::pow(a, e.p0 - 1.0)));
    k = std::max(k, std::abs(e.eta_second(u)) / (1.0 + std::pow(a, e.p0 - 2.0)));
  }
  if (!std::isfinite(k)) throw PropertyViolation("entropy " + e.name + " is not polynomially bounded on the lattice");
  return k;
}

double interaction_defect(const FluxSpec& flux, const EntropyPair& pair, double v, double w) {
  return (w - v) * (pair.q(w) - pair.q(v)) - (pair.eta(w) - pair.eta(v)) * (flux.f(w) - flux.f(v));
}

double lemma_constant(const FluxSpec& flux, const EntropyFunctions& e) {
  const double s = flux.p_f + e.p_eta;
  return flux.c_f * e.c_eta / ((1.0 + s) * (2.0 + s));
}

LemmaReport verify_lemma_bound(const FluxSpec& flux, const EntropyPair& pair, std::span<const double> lattice) {
  if (lattice.size() < 2) throw InvalidInput("lemma check needs at least two lattice points");
  const auto& e = pair.functions;
  constexpr double kTol = 1e-9;

  LemmaReport report{};
  report.exponent = flux.p_f + e.p_eta + 2.0;
  report.lemma_constant = lemma_constant(flux, e);
  report.measured_c_f = measure_nonlinearity(flux.f_prime, flux.p_f, lattice);
  report.measured_c_eta = measure_nonlinearity(e.eta_prime, e.p_eta, lattice);

  if (!(flux.c_f > 0.0) || report.measured_c_f < flux.c_f - kTol) {
    std::ostringstream os;
    os << "flux " << flux.name << ": declared C_f = " << flux.c_f << " but lattice infimum is "
       << report.measured_c_f;
    throw PropertyViolation(os.str());
  }
  if (!(e.c_eta > 0.0) || report.measured_c_eta < e.c_eta - kTol) {
    std::ostringstream os;
    os << "entropy " << e.name << ": declared C_eta = " << e.c_eta << " but lattice infimum is "
       << report.measured_c_eta << " (eta' must grow at least like (v - w)^p_eta)";
    throw PropertyViolation(os.str());
  }

  std::vector<double> qv(lattice.size()), ev(lattice.size()), fv(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    qv[i] = pair.q(lattice[i]);
    ev[i] = pair.eta(lattice[i]);
    fv[i] = flux.f(lattice[i]);
  }
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      const double w = lattice[i];
      const double v = lattice[j];
      if (!(w < v)) continue;
      const double defect = (w - v) * (qv[i] - qv[j]) - (ev[i] - ev[j]) * (fv[i] - fv[j]);
      min_ratio = std::min(min_ratio, defect / std::pow(v - w, report.exponent));
    }
  }
  report.min_ratio = min_ratio;
  if (min_ratio < report.lemma_constant - kTol) {
    std::ostringstream os;
    os << "interaction defect ratio " << min_ratio << " falls below C_{f,eta} = " << report.lemma_constant;
    throw PropertyViolation(os.str());
  }
  return report;
}

}  // namespace svlab
