#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "so21/planewave.hpp"

namespace so21::nonrel {

/// Periodic N x N grid of side L. Sample (ix, iy) sits at (ix L/N, iy L/N)
/// and is stored at flat index iy * N + ix. Fourier index i maps to the
/// wavenumber 2 pi n / L with n in [-N/2, N/2).
class Grid2D {
 public:
  /// Throws GridError unless n is a power of two >= 8 and length > 0.
  Grid2D(std::size_t n, double length);

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  std::size_t size() const { return n_ * n_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  double coordinate(std::size_t i) const { return static_cast<double>(i) * spacing(); }
  double wavenumber(std::size_t i) const;
  /// pi N / L
  double nyquist() const;
  bool is_nyquist_index(std::size_t i) const { return i == n_ / 2; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  std::size_t n_;
  double length_;
};

/// Complex field sampled on a Grid2D: one component (Schrodinger) or two
/// (Dirac spinor, upper then lower).
class WaveField {
 public:
  WaveField(Grid2D grid, int components);

  const Grid2D& grid() const { return grid_; }
  int components() const { return static_cast<int>(data_.size()); }
  Eigen::ArrayXcd& component(int c) { return data_.at(static_cast<std::size_t>(c)); }
  const Eigen::ArrayXcd& component(int c) const { return data_.at(static_cast<std::size_t>(c)); }

  /// True once the rest-mass phase e^{-i m c^2 t / hbar} has been removed.
  bool gauge_frame() const { return gauge_frame_; }
  void set_gauge_frame(bool v) { gauge_frame_ = v; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  /// sqrt(sum |psi|^2 dx dy) over all components.
  double norm() const;

 private:
  Grid2D grid_;
  std::vector<Eigen::ArrayXcd> data_;
  bool gauge_frame_ = false;
  double time_ = 0.0;
};

/// <a|b> summed over components, with the dx dy weight.
cplx inner_product(const WaveField& a, const WaveField& b);

struct GaussianSpec {
  double center_x = 0.0;
  double center_y = 0.0;
  Momentum k0;
  /// Position standard deviation of |psi|^2 per axis.
  double sigma = 1.0;
};

/// Normalized packet exp(-|r - r0|^2 / (4 sigma^2) + i k0 . r). Two
/// components: every Fourier mode carries the positive-branch spinor u_N(k),
/// giving a pure positive-energy packet. Throws GridError when sigma < 4 L/N
/// or |k0| + 4/sigma reaches the Nyquist wavenumber.
WaveField build_gaussian(const Grid2D& grid, const GaussianSpec& spec, int components,
                         const PhysicalParams& p = {});

/// Uniform single-mode field with wavenumber (2 pi nx / L, 2 pi ny / L)
/// carrying the given spinor (two components) or unit amplitude (one).
WaveField plane_wave_field(const Grid2D& grid, int nx, int ny, const Spinor2& spinor,
                           int components = 2);

/// Two-component field with `scalar` as upper component and zero lower
/// component.
WaveField embed_upper(const WaveField& scalar);
/// Scalar field holding component `c` of `field`.
WaveField extract_component(const WaveField& field, int c);

/// Per-component Fourier coefficients (unnormalized forward transform).
std::vector<Eigen::ArrayXcd> fourier_coefficients(const WaveField& field);

/// Spectral mean of (kx, ky) weighted by |psi(k)|^2.
Momentum mean_momentum(const WaveField& field);

struct BranchWeights {
  double positive = 0.0;
  double negative = 0.0;
};

/// Fraction of the spectral weight carried by u_N(k) and v_N(k) components
/// after decomposing each Fourier mode s(k) = a u_N + b v_N.
BranchWeights branch_weights(const WaveField& field, const PhysicalParams& p);

/// Position variance of |psi|^2 along x about its mean (minimum image).
double position_variance_x(const WaveField& field);

/// max |psi|^2 on the outermost rows and columns divided by max |psi|^2.
double boundary_density(const WaveField& field);

}  // namespace so21::nonrel
