#include "svlab/brownian.hpp"

#include <cmath>
#include <random>

#include "svlab/error.hpp"

namespace svlab {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> brownian_increments(std::uint64_t seed, std::size_t n, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("Brownian increments need dt > 0");
  std::mt19937_64 gen(mix_seed(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(dt);
  std::vector<double> dw(n);
  for (auto& v : dw) v = scale * normal(gen);
  return dw;
}

std::vector<double> refine_increments(std::span<const double> coarse, double dt_coarse, std::uint64_t seed) {
  if (!(dt_coarse > 0.0)) throw InvalidInput("bridge refinement needs dt > 0");
  std::mt19937_64 gen(mix_seed(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double spread = std::sqrt(dt_coarse / 4.0);
  std::vector<double> fine(2 * coarse.size());
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const double a = 0.5 * coarse[k] + spread * normal(gen);
    fine[2 * k] = a;
    fine[2 * k + 1] = coarse[k] - a;
  }
  return fine;
}

std::vector<double> coarsen_increments(std::span<const double> fine) {
  if (fine.size() % 2 != 0) throw InvalidInput("coarsening needs an even number of increments");
  std::vector<double> coarse(fine.size() / 2);
  for (std::size_t k = 0; k < coarse.size(); ++k) coarse[k] = fine[2 * k] + fine[2 * k + 1];
  return coarse;
}

}  // namespace svlab
