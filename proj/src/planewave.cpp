#include "so21/planewave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "so21/errors.hpp"

namespace so21 {

namespace {

constexpr cplx kI{0.0, 1.0};

double branch_sign(Branch b) { return b == Branch::Positive ? 1.0 : -1.0; }

}  // namespace

void PhysicalParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(m)) throw InvalidArgument("mass must be positive and finite");
  if (!positive(c)) throw InvalidArgument("speed of light must be positive and finite");
  if (!positive(hbar)) throw InvalidArgument("hbar must be positive and finite");
  if (!std::isfinite(e)) throw InvalidArgument("charge must be finite");
}

double Spinor2::norm() const { return std::sqrt(std::norm(upper) + std::norm(lower)); }

double dispersion_omega(Momentum k, const PhysicalParams& p) {
  p.validate();
  return std::hypot(p.c * std::hypot(k.kx, k.ky), p.rest_frequency());
}

cplx g1(Momentum k, const PhysicalParams& p) {
  const double denom = dispersion_omega(k, p) + p.rest_frequency();
  return -kI * cplx{k.kx, k.ky} * (p.c / denom);
}

cplx g2(Momentum k, const PhysicalParams& p) {
  const double denom = dispersion_omega(k, p) + p.rest_frequency();
  return kI * cplx{k.kx, -k.ky} * (p.c / denom);
}

Spinor2 build_u(Momentum k, const PhysicalParams& p) { return {1.0, g1(k, p)}; }

Spinor2 build_v(Momentum k, const PhysicalParams& p) { return {g2(k, p), 1.0}; }

cplx metric_inner(const Spinor2& a, const Spinor2& b) {
  return std::conj(a.upper) * b.upper - std::conj(a.lower) * b.lower;
}

Spinor2 normalize(const Spinor2& s, Branch branch, double eps) {
  const double n = metric_inner(s, s).real();
  if (!(std::abs(n) > eps)) {
    throw DegenerateNormalization("metric norm " + std::to_string(n) +
                                  " too close to zero to normalize");
  }
  if (n * branch_sign(branch) < 0.0) {
    throw InvalidArgument("metric norm sign does not match the requested branch");
  }
  return (1.0 / std::sqrt(std::abs(n))) * s;
}

Spinor2 normalized_spinor(Branch branch, Momentum k, const PhysicalParams& p) {
  return branch == Branch::Positive ? normalize(build_u(k, p), branch)
                                    : normalize(build_v(k, p), branch);
}

PlaneWaveSolution make_solution(Branch branch, Momentum k, const PhysicalParams& p) {
  return {branch, k, dispersion_omega(k, p), normalized_spinor(branch, k, p)};
}

Spinor2 evaluate(const PlaneWaveSolution& sol, SpacetimePoint at) {
  const double phase = sol.momentum.kx * at.x + sol.momentum.ky * at.y - sol.omega * at.t;
  return std::polar(1.0, branch_sign(sol.branch) * phase) * sol.spinor;
}

Matrix2c coefficient_matrix(Branch branch, Momentum k, double omega, const PhysicalParams& p) {
  const double w0 = p.rest_frequency();
  const cplx k_minus{k.kx, -k.ky};
  const cplx k_plus{k.kx, k.ky};
  if (branch == Branch::Positive) {
    return {-(omega - w0), kI * p.c * k_minus, kI * p.c * k_plus, omega + w0};
  }
  return {omega + w0, -kI * k_minus * p.c, -kI * k_plus * p.c, -(omega - w0)};
}

double dirac_residual(const PlaneWaveSolution& sol, const PhysicalParams& p,
                      std::span<const SpacetimePoint> samples) {
  // d/dt, d/dx, d/dy act on the phase as multiplication by these factors.
  const double s = branch_sign(sol.branch);
  const cplx dt = -kI * s * sol.omega;
  const cplx dx = kI * s * sol.momentum.kx;
  const cplx dy = kI * s * sol.momentum.ky;

  const auto op = dirac_symbol_pauli(p.c, p.inverse_compton());
  const Matrix2c symbol = op.dt * dt + op.dx * dx + op.dy * dy + op.mass;

  double worst = 0.0;
  for (const auto& at : samples) worst = std::max(worst, (symbol * evaluate(sol, at)).norm());
  return worst;
}

double klein_gordon_residual(const PlaneWaveSolution& sol, const PhysicalParams& p) {
  const double w = sol.omega / p.c;
  const double mu = p.inverse_compton();
  return std::abs(-w * w + sol.momentum.norm_sq() + mu * mu);
}

double amplitude_consistency_residual(Branch branch, Momentum k, const PhysicalParams& p) {
  const double w = dispersion_omega(k, p);
  const double w0 = p.rest_frequency();
  if (branch == Branch::Positive) {
    return std::abs(kI * p.c * cplx{k.kx, -k.ky} * g1(k, p) - (w - w0));
  }
  return std::abs(-kI * p.c * cplx{k.kx, k.ky} * g2(k, p) - (w - w0));
}

double classical_energy(const PlaneWaveSolution& sol, double box_side, const PhysicalParams& p) {
  if (!(box_side > 0.0) || !std::isfinite(box_side)) {
    throw InvalidArgument("classical_energy: box side must be positive");
  }
  // One particle per box: psi = spinor e^{i phase} / L. Midpoint quadrature;
  // the density is constant so any resolution is exact.
  constexpr int n = 8;
  const double h = box_side / n;
  const double amplitude = 1.0 / box_side;
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Spinor2 psi = amplitude * evaluate(sol, {(i + 0.5) * h, (j + 0.5) * h, 0.0});
      total += p.hbar * sol.omega * metric_inner(psi, psi).real() * h * h;
    }
  }
  return total;
}

}  // namespace so21
