#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "svlab/grid.hpp"

namespace svlab::testing {

// Seeded source of random test inputs. Every property test draws from one of these so a
// failure is reproducible from the seed printed with it.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool coin() { return index(0, 1) == 1; }

  std::vector<double> vec(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  // Random grid with a power-of-two cell count in [16, 256].
  GridSpec grid(Boundary b) {
    const std::size_t n = std::size_t{1} << index(4, 8);
    const double half = static_cast<double>(index(1, 4)) * 0.5;
    return GridSpec(half, n, b);
  }

  // Smooth random field: a few Fourier modes plus a small rough part.
  std::vector<double> field(const GridSpec& g, double amplitude) {
    std::vector<double> u(g.n_cells());
    const double pi = 3.14159265358979323846;
    const double a1 = normal(), a2 = normal(), b1 = normal();
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double s = g.x(j) / g.half_width();
      u[j] = amplitude * (a1 * std::sin(pi * s) + 0.5 * a2 * std::cos(pi * s) + 0.25 * b1 * std::sin(3 * pi * s)) +
             0.05 * amplitude * uniform(-1.0, 1.0);
    }
    return u;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace svlab::testing
