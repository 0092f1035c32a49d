#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace svlab {

enum class Boundary { periodic, dirichlet_zero };

// Uniform cell-centred grid on [-L, L]. Cell j has centre x_j = -L + (j + 1/2) dx.
class GridSpec {
 public:
  GridSpec(double half_width, std::size_t n_cells, Boundary boundary = Boundary::periodic);

  double half_width() const noexcept { return half_width_; }
  std::size_t n_cells() const noexcept { return n_cells_; }
  double dx() const noexcept { return dx_; }
  Boundary boundary() const noexcept { return boundary_; }

  double x(std::size_t j) const noexcept { return -half_width_ + (static_cast<double>(j) + 0.5) * dx_; }
  // Position of the face between cells j and j+1.
  double face(std::size_t j) const noexcept { return -half_width_ + static_cast<double>(j + 1) * dx_; }
  std::vector<double> centres() const;

  // Cell index with periodic wrap or -1 when outside a Dirichlet domain.
  std::ptrdiff_t wrap(std::ptrdiff_t j) const noexcept;

  // Value of u at cell j + shift honouring the boundary (zero extension for Dirichlet).
  double shifted(std::span<const double> u, std::size_t j, std::ptrdiff_t shift) const noexcept;

  // Number of cells represented by a length that must be grid-aligned. Throws if it is not.
  std::ptrdiff_t cells_for(double length, const char* what) const;
  bool is_aligned(double length) const noexcept;

  // Cells whose centres lie in [-L + margin, L - margin].
  struct Window {
    std::size_t begin;
    std::size_t end;
  };
  Window interior(double margin) const;
  Window full() const noexcept { return {0, n_cells_}; }

  bool operator==(const GridSpec&) const = default;

 private:
  double half_width_;
  std::size_t n_cells_;
  double dx_;
  Boundary boundary_;
};

}  // namespace svlab
