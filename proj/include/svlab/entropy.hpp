#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "svlab/kernels.hpp"

namespace svlab {

using ScalarFn = std::function<double(double)>;

// Convex flux f with f'(v) - f'(w) >= c_f (v - w)^{p_f} for w < v.
struct FluxSpec {
  std::string name;
  ScalarFn f;
  ScalarFn f_prime;
  double c_f = 0.0;
  double p_f = 1.0;
  // f' changes sign here; the Engquist-Osher split is taken about this point.
  double sonic_point = 0.0;
  // Vectorised face-flux path; custom fluxes fall back to the generic evaluation.
  bool has_kernel = false;
  kernels::FluxKind kernel_kind = kernels::FluxKind::zero;

  // F(a, b) = f(max(a, u_s)) + f(min(b, u_s)) - f(u_s).
  double engquist_osher(double left, double right) const;
};

FluxSpec make_burgers();
// f(u) = u^4 / 4, p_f = 3, c_f measured on the default lattice.
FluxSpec make_quartic();
// f = 0, used for pure heat and pure noise runs. Not genuinely nonlinear.
FluxSpec make_zero_flux();

// Entropy eta with its first two derivatives and nonlinearity data.
struct EntropyFunctions {
  std::string name;
  ScalarFn eta;
  ScalarFn eta_prime;
  ScalarFn eta_second;
  double c_eta = 0.0;
  double p_eta = 1.0;
  double p0 = 2.0;  // polynomial growth order
};

EntropyFunctions entropy_same_as_flux(const FluxSpec& flux);
// eta(u) = |u|^{p0}, p_eta = p0 - 1, c_eta measured on the default lattice.
EntropyFunctions power_entropy(double p0);
// eta(u) = u. Degenerate: violates the entropy nonlinearity condition.
EntropyFunctions linear_entropy();

// Lattice on which nonlinearity and growth constants are measured: [-U, U] in steps of h.
struct Lattice {
  double half_width = 8.0;
  double step = 1.0 / 16.0;
  std::vector<double> points() const;
};

// q(u) = int_0^u eta'(s) f'(s) ds tabulated on a lattice; cubic Hermite in between
// (slopes eta' f' are exact). Outside the lattice q is integrated on demand.
class EntropyFlux {
 public:
  EntropyFlux(const FluxSpec& flux, const EntropyFunctions& entropy, Lattice lattice = {}, double anchor_value = 0.0);

  double operator()(double u) const;
  double derivative(double u) const { return eta_prime_(u) * f_prime_(u); }
  const Lattice& lattice() const noexcept { return lattice_; }

 private:
  ScalarFn eta_prime_;
  ScalarFn f_prime_;
  Lattice lattice_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

EntropyFlux entropy_flux(const FluxSpec& flux, const EntropyFunctions& entropy, Lattice lattice = {});

// Entropy functions together with their entropy flux and measured growth constant.
struct EntropyPair {
  EntropyFunctions functions;
  EntropyFlux q;
  double growth_constant = 0.0;  // K in |eta^{(k)}(u)| <= K (1 + |u|^{p0-k})

  double eta(double u) const { return functions.eta(u); }
  double eta_prime(double u) const { return functions.eta_prime(u); }
  double eta_second(double u) const { return functions.eta_second(u); }
  // Engquist-Osher entropy flux Q(a, b) = q(max(a, u_s)) + q(min(b, u_s)) - q(u_s).
  double engquist_osher_q(double left, double right, double sonic_point) const;
};

EntropyPair make_entropy_pair(const FluxSpec& flux, EntropyFunctions functions, Lattice lattice = {},
                              double anchor_value = 0.0);

// inf over lattice pairs w < v of (g(v) - g(w)) / (v - w)^p.
double measure_nonlinearity(const ScalarFn& g, double p, std::span<const double> lattice);

// max over the lattice of the three ratios in the polynomial growth condition.
double measure_growth_constant(const EntropyFunctions& e, std::span<const double> lattice);

// (w - v)(q(w) - q(v)) - (eta(w) - eta(v))(f(w) - f(v)).
double interaction_defect(const FluxSpec& flux, const EntropyPair& pair, double v, double w);

// C_{f,eta} = C_f C_eta / ((1 + p_f + p_eta)(2 + p_f + p_eta)).
double lemma_constant(const FluxSpec& flux, const EntropyFunctions& e);

struct LemmaReport {
  double min_ratio;         // min over w < v of defect / (v - w)^{p_f + p_eta + 2}
  double lemma_constant;    // C_{f,eta} from the declared constants
  double exponent;          // p_f + p_eta + 2
  double measured_c_f;
  double measured_c_eta;
};

// Checks the declared nonlinearity constants on the lattice and the defect lower bound.
// Throws PropertyViolation if a declared constant fails or the bound is violated beyond 1e-9.
LemmaReport verify_lemma_bound(const FluxSpec& flux, const EntropyPair& pair, std::span<const double> lattice);

}  // namespace svlab
