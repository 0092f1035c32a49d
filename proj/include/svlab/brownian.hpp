#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace svlab {

// splitmix64 finaliser; scrambles nearby seeds into unrelated generator states.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

// Seed of ensemble member m: seed_base xor m.
inline std::uint64_t path_seed(std::uint64_t seed_base, std::uint64_t m) noexcept { return seed_base ^ m; }

// n independent N(0, dt) increments drawn from a generator seeded by mix_seed(seed).
std::vector<double> brownian_increments(std::uint64_t seed, std::size_t n, double dt);

// Conditional midpoint split of every coarse increment (Brownian bridge):
//   a = dW / 2 + sqrt(dt / 4) Z,  b = dW - a,
// so the fine path passes through the coarse one. dt_coarse is the coarse step.
std::vector<double> refine_increments(std::span<const double> coarse, double dt_coarse, std::uint64_t seed);

// Coarse increments recovered by summing consecutive pairs.
std::vector<double> coarsen_increments(std::span<const double> fine);

}  // namespace svlab
