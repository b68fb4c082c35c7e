#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Sparse>

#include "so21/nonrel/field.hpp"

namespace so21::nonrel {

struct LandauLevel {
  /// Mean of the clustered eigenvalues.
  double energy = 0.0;
  std::size_t degeneracy = 0;
};

struct LandauResult {
  std::vector<LandauLevel> levels;
  /// hbar w_c (n + 1/2) for the field actually used.
  std::vector<double> expected;
  /// Field snapped to an integer number of flux quanta through the box.
  double field_used = 0.0;
  long flux_quanta = 0;
  /// sqrt(hbar / (e B))
  double magnetic_length = 0.0;
  /// hbar e B / m
  double cyclotron_energy = 0.0;
};

/// Nearest field carrying an integer number (>= 1) of flux quanta
/// 2 pi hbar / e through the box.
double quantized_field(double b, const Grid2D& grid, const PhysicalParams& p);

/// Discrete (1/2m)((-i hbar dx + e Ax)^2 + (-i hbar dy + e Ay)^2) on the
/// magnetic torus: symmetric gauge, Peierls phases on a 5-point stencil, and
/// magnetic-translation phases on the wrap links. `b` must carry an integer
/// number of flux quanta.
Eigen::SparseMatrix<cplx> landau_operator(double b, const Grid2D& grid, const PhysicalParams& p);

/// Lowest `count` eigenvalues of a Hermitian positive semidefinite sparse
/// matrix, ascending, via block shift-invert subspace iteration carrying
/// `spare` extra vectors (0 picks max(8, count/4)). The start block comes
/// from `seed`.
std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<cplx>& h, std::size_t count,
                                       std::uint64_t seed = 1, std::size_t spare = 0);

/// Groups sorted eigenvalues; a new level starts where the gap exceeds
/// rel_gap times the current value.
std::vector<LandauLevel> cluster_levels(const std::vector<double>& sorted, double rel_gap = 1e-3);

/// Lowest n_levels Landau levels. Throws GridError unless the magnetic
/// length lies between 3 grid spacings and L/6.
LandauResult landau_levels(double b, const Grid2D& grid, const PhysicalParams& p,
                           std::size_t n_levels);

}  // namespace so21::nonrel
