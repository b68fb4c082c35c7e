#pragma once

#include <span>

#include "so21/algebra.hpp"

namespace so21 {

/// Mass, speed of light, reduced Planck constant and charge. Natural units
/// by default.
struct PhysicalParams {
  double m = 1.0;
  double c = 1.0;
  double hbar = 1.0;
  double e = 1.0;

  /// Throws InvalidArgument unless m, c, hbar are finite and positive.
  void validate() const;

  /// m c^2 / hbar, the rest frequency.
  double rest_frequency() const { return m * c * c / hbar; }
  /// m c / hbar, the inverse Compton length.
  double inverse_compton() const { return m * c / hbar; }
};

struct Momentum {
  double kx = 0.0;
  double ky = 0.0;

  double px(const PhysicalParams& p) const { return p.hbar * kx; }
  double py(const PhysicalParams& p) const { return p.hbar * ky; }
  double norm_sq() const { return kx * kx + ky * ky; }

  friend Momentum operator-(Momentum k) { return {-k.kx, -k.ky}; }
  friend bool operator==(const Momentum&, const Momentum&) = default;
};

struct Spinor2 {
  cplx upper{};
  cplx lower{};

  friend Spinor2 operator*(cplx s, const Spinor2& v) { return {s * v.upper, s * v.lower}; }
  friend Spinor2 operator+(const Spinor2& a, const Spinor2& b) {
    return {a.upper + b.upper, a.lower + b.lower};
  }
  friend Spinor2 operator*(const Matrix2c& m, const Spinor2& v) {
    return {m(0, 0) * v.upper + m(0, 1) * v.lower, m(1, 0) * v.upper + m(1, 1) * v.lower};
  }
  double norm() const;
};

enum class Branch { Positive, Negative };

/// Positive branch:  u e^{ i(k.r - w t)},   negative branch:  v e^{-i(k.r - w t)}.
struct PlaneWaveSolution {
  Branch branch = Branch::Positive;
  Momentum momentum;
  double omega = 0.0;
  Spinor2 spinor;

  double energy(const PhysicalParams& p) const { return p.hbar * omega; }
};

struct SpacetimePoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

/// Positive root of w^2 = k^2 c^2 + (m c^2 / hbar)^2.
double dispersion_omega(Momentum k, const PhysicalParams& p);

/// Lower amplitude of u:  G1 = -i (px + i py) c / (E + m c^2).
cplx g1(Momentum k, const PhysicalParams& p);
/// Upper amplitude of v:  G2 = i (px - i py) c / (E + m c^2).
cplx g2(Momentum k, const PhysicalParams& p);

/// Un-normalized u = (1, G1).
Spinor2 build_u(Momentum k, const PhysicalParams& p);
/// Un-normalized v = (G2, 1).
Spinor2 build_v(Momentum k, const PhysicalParams& p);

/// conj(a) . sigma_3 . b
cplx metric_inner(const Spinor2& a, const Spinor2& b);

constexpr double kDefaultNormEps = 1e-12;

/// Scales `s` to metric norm +1 (Positive) or -1 (Negative). Throws
/// DegenerateNormalization if |metric norm| <= eps, InvalidArgument if its
/// sign disagrees with the branch.
Spinor2 normalize(const Spinor2& s, Branch branch, double eps = kDefaultNormEps);

/// Normalized u_N or v_N.
Spinor2 normalized_spinor(Branch branch, Momentum k, const PhysicalParams& p);

/// Fully constructed on-shell plane wave.
PlaneWaveSolution make_solution(Branch branch, Momentum k, const PhysicalParams& p);

/// Value of the plane wave at a spacetime point.
Spinor2 evaluate(const PlaneWaveSolution& sol, SpacetimePoint at);

/// Coefficient matrix (multiplied by c) obtained by inserting the plane wave
/// with frequency `omega` into the Dirac operator. Its determinant vanishes
/// exactly on shell.
Matrix2c coefficient_matrix(Branch branch, Momentum k, double omega, const PhysicalParams& p);

/// Max 2-norm of the Dirac operator applied to the plane wave over the
/// sample points. Derivatives are taken in closed form.
double dirac_residual(const PlaneWaveSolution& sol, const PhysicalParams& p,
                      std::span<const SpacetimePoint> samples);

/// |-w^2/c^2 + k^2 + (m c / hbar)^2|
double klein_gordon_residual(const PlaneWaveSolution& sol, const PhysicalParams& p);

/// Residuals of the two scalar component equations that determine the
/// spinor amplitude: for u, ic(kx - i ky) G1 - (w - mc^2/hbar) (the one not
/// used to define G1); for v, -ic(kx + i ky) G2 - (w - mc^2/hbar).
double amplitude_consistency_residual(Branch branch, Momentum k, const PhysicalParams& p);

/// Classical field energy over a periodic box of side `box_side` for a plane
/// wave carrying one particle per box: the integral of hbar w conj(psi)
/// sigma_0 psi, evaluated by quadrature. Equals +hbar w for the positive
/// branch and -hbar w for the negative branch.
double classical_energy(const PlaneWaveSolution& sol, double box_side, const PhysicalParams& p);

}  // namespace so21
