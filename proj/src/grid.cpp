#include "svlab/grid.hpp"

#include <cmath>
#include <string>

#include "svlab/error.hpp"

namespace svlab {

GridSpec::GridSpec(double half_width, std::size_t n_cells, Boundary boundary)
    : half_width_(half_width), n_cells_(n_cells), dx_(0.0), boundary_(boundary) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidInput("grid half width must be positive and finite");
  }
  if (n_cells < 16) {
    throw InvalidInput("grid needs at least 16 cells, got " + std::to_string(n_cells));
  }
  dx_ = 2.0 * half_width / static_cast<double>(n_cells);
  if (dx_ * static_cast<double>(n_cells) != 2.0 * half_width) {
    throw InvalidInput("dx * n_cells does not reproduce 2L exactly; choose L and n_cells with an exact ratio");
  }
}

std::vector<double> GridSpec::centres() const {
  std::vector<double> xs(n_cells_);
  for (std::size_t j = 0; j < n_cells_; ++j) xs[j] = x(j);
  return xs;
}

std::ptrdiff_t GridSpec::wrap(std::ptrdiff_t j) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(n_cells_);
  if (boundary_ == Boundary::periodic) {
    std::ptrdiff_t r = j % n;
    return r < 0 ? r + n : r;
  }
  return (j < 0 || j >= n) ? -1 : j;
}

double GridSpec::shifted(std::span<const double> u, std::size_t j, std::ptrdiff_t shift) const noexcept {
  const std::ptrdiff_t k = wrap(static_cast<std::ptrdiff_t>(j) + shift);
  return k < 0 ? 0.0 : u[static_cast<std::size_t>(k)];
}

bool GridSpec::is_aligned(double length) const noexcept {
  const double cells = length / dx_;
  return std::abs(cells - std::round(cells)) <= 1e-9 * std::max(1.0, std::abs(cells));
}

std::ptrdiff_t GridSpec::cells_for(double length, const char* what) const {
  if (!is_aligned(length)) {
    throw InvalidInput(std::string(what) + " = " + std::to_string(length) + " is not a multiple of dx = " +
                       std::to_string(dx_));
  }
  return static_cast<std::ptrdiff_t>(std::llround(length / dx_));
}

GridSpec::Window GridSpec::interior(double margin) const {
  if (margin < 0.0 || 2.0 * margin >= 2.0 * half_width_) {
    throw InvalidInput("interior window margin must lie in [0, L)");
  }
  std::size_t begin = 0;
  while (begin < n_cells_ && x(begin) < -half_width_ + margin) ++begin;
  std::size_t end = n_cells_;
  while (end > begin && x(end - 1) > half_width_ - margin) --end;
  return {begin, end};
}

}  // namespace svlab
