#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "so21/nonrel/field.hpp"

namespace so21::nonrel {

/// Per-mode Dirac Hamiltonian c hbar (ky sigma_1 - kx sigma_2) + m c^2 sigma_3,
/// eigenvalues +- hbar w(k).
Matrix2c mode_hamiltonian(Momentum k, const PhysicalParams& p);

/// Advances every Fourier mode by exp(-i H(k) t / hbar). In the gauge frame
/// the rest energy is subtracted from H(k) so the frame is preserved.
WaveField evolve_dirac(const WaveField& field, double t, const PhysicalParams& p);

/// Multiplies by e^{+i m c^2 t / hbar} and marks the field as gauge frame.
/// Throws StateError if already applied.
WaveField remove_rest_phase(const WaveField& field, double t, const PhysicalParams& p);

/// Leading-order lower component  -(d/dx + i d/dy) psi_upper / (2 m c / hbar),
/// computed spectrally (Nyquist derivative set to zero). Requires the gauge
/// frame.
WaveField small_component(const WaveField& field, const PhysicalParams& p);

/// Real potentials on a grid: A0 in energy/charge units (enters as e c A0),
/// Ax and Ay in momentum/charge units (enter as -i hbar d + e A).
struct PotentialConfig {
  Grid2D grid;
  Eigen::ArrayXd a0;
  Eigen::ArrayXd ax;
  Eigen::ArrayXd ay;
  double e = 1.0;

  static PotentialConfig zero(const Grid2D& grid, double e = 1.0);
  static PotentialConfig constant_scalar(const Grid2D& grid, double a0, double e = 1.0);
  /// Symmetric gauge about the box centre: Ax = -B (y - L/2)/2, Ay = B (x - L/2)/2.
  static PotentialConfig uniform_field(const Grid2D& grid, double b, double e = 1.0);

  /// Throws InvalidArgument on shape mismatch or non-finite samples.
  void validate() const;
  /// Human-readable warnings: large discrete gradients of any potential.
  std::vector<std::string> diagnostics() const;
  bool has_vector_potential() const;
};

/// Free propagation: exact phase e^{-i hbar k^2 t / 2m} per mode.
WaveField evolve_schrodinger(const WaveField& field, double t, const PhysicalParams& p);

/// Minimally coupled propagation with Strang splitting: half potential
/// phase, kinetic x half step, kinetic y step, kinetic x half step, half
/// potential phase. Kinetic steps use row-wise kx + e Ax(y)/hbar and
/// column-wise ky + e Ay(x)/hbar, so Ax must not depend on x nor Ay on y.
/// Throws DiagnosticsError when steps < 1, when a potential phase per step
/// exceeds pi, or when the vector potential has the wrong dependence.
WaveField evolve_schrodinger(const WaveField& field, double t, const PhysicalParams& p,
                             const PotentialConfig& pot, int steps);

struct LimitReport {
  /// ||upper(dirac) - schrod|| / ||schrod||
  double relative_distance = 0.0;
  /// hbar |<k>| / (m c) of the Schrodinger field.
  double velocity_scale = 0.0;
  /// Worst boundary density of the two fields.
  double boundary_density = 0.0;
};

/// Throws InvalidArgument on mismatched grids or shapes, StateError if the
/// Dirac field is not in the gauge frame.
LimitReport compare_limit(const WaveField& dirac, const WaveField& schrod,
                          const PhysicalParams& p);

struct LimitRun {
  double k0 = 0.0;
  LimitReport report;
};

struct ScalingStudy {
  std::vector<LimitRun> runs;
  /// Least-squares slope of log distance against log (v/c).
  double slope = 0.0;
  /// distance(k0) / distance(k0 / 2) for consecutive runs.
  std::vector<double> halving_ratios;
};

struct LimitSetup {
  Grid2D grid{128, 1280.0};
  double sigma = 100.0;
  double time = 10.0;
};

/// Evolves the non-relativistic initial data (upper = centred Gaussian with
/// momentum (k0, 0), lower = 0) with both equations and compares them.
LimitReport run_limit(const LimitSetup& setup, Momentum k0, const PhysicalParams& p);

/// run_limit over each k0, sorted ascending, plus the fitted order.
ScalingStudy scaling_study(const LimitSetup& setup, const std::vector<double>& k0_values,
                           const PhysicalParams& p);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace so21::nonrel
