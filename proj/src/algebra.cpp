#include "so21/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "so21/errors.hpp"

namespace so21 {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kHermitianTol = 1e-12;

}  // namespace

Matrix2c Matrix2c::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

double Matrix2c::max_abs() const {
  double out = 0.0;
  for (const auto& z : m_) out = std::max(out, std::abs(z));
  return out;
}

bool Matrix2c::is_hermitian(double tol) const { return max_deviation(*this, adjoint()) <= tol; }

Matrix2c& Matrix2c::operator+=(const Matrix2c& o) {
  for (int i = 0; i < 4; ++i) m_[i] += o.m_[i];
  return *this;
}

Matrix2c& Matrix2c::operator-=(const Matrix2c& o) {
  for (int i = 0; i < 4; ++i) m_[i] -= o.m_[i];
  return *this;
}

Matrix2c& Matrix2c::operator*=(cplx s) {
  for (auto& z : m_) z *= s;
  return *this;
}

Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

double max_deviation(const Matrix2c& a, const Matrix2c& b) { return (a - b).max_abs(); }

Matrix2c pauli(int index) {
  switch (index) {
    case 1:
      return {0.0, 1.0, 1.0, 0.0};
    case 2:
      return {0.0, -kI, kI, 0.0};
    case 3:
      return Matrix2c::diag(1.0, -1.0);
    default:
      throw InvalidArgument("pauli: index must be 1, 2 or 3, got " + std::to_string(index));
  }
}

Matrix2c gamma(int mu) {
  switch (mu) {
    case 0:
      return -kI * pauli(3);
    case 1:
      return pauli(1);
    case 2:
      return pauli(2);
    default:
      throw InvalidArgument("gamma: mu must be 0, 1 or 2, got " + std::to_string(mu));
  }
}

Matrix2c k_generator(int index) {
  switch (index) {
    case 1:
      return (-0.5 * kI) * pauli(2);
    case 2:
      return (0.5 * kI) * pauli(1);
    case 3:
      return 0.5 * pauli(3);
    default:
      throw InvalidArgument("k_generator: index must be 1, 2 or 3, got " +
                            std::to_string(index));
  }
}

Matrix2c commutator(const Matrix2c& a, const Matrix2c& b) { return a * b - b * a; }

Matrix2c anticommutator(const Matrix2c& a, const Matrix2c& b) { return a * b + b * a; }

Matrix2c matrix_exponential(const Matrix2c& h, double phase) {
  if (!h.is_hermitian(kHermitianTol)) {
    throw InvalidArgument("matrix_exponential: input is not Hermitian");
  }
  // h = a0 I + a1 sigma1 + a2 sigma2 + a3 sigma3, with real coefficients.
  const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double a3 = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const cplx off = 0.5 * (h(0, 1) + std::conj(h(1, 0)));  // a1 - i a2
  const double a1 = off.real();
  const double a2 = -off.imag();
  const double norm = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);

  const double theta = phase * norm;
  const double c = std::cos(theta);
  // sin(theta)/norm, continuous at norm = 0.
  const double s_over_n = norm > 0.0 ? std::sin(theta) / norm : phase;

  // cos(theta) I - i sin(theta) (a . sigma)/|a|
  const Matrix2c rotation{cplx{c, -s_over_n * a3}, -kI * s_over_n * cplx{a1, -a2},
                          -kI * s_over_n * cplx{a1, a2}, cplx{c, s_over_n * a3}};
  return std::polar(1.0, -phase * a0) * rotation;
}

DiracSymbol dirac_symbol_pauli(double c, double mass_term) {
  return {(-kI / c) * pauli(3), pauli(1), pauli(2), mass_term * Matrix2c::identity()};
}

DiracSymbol dirac_symbol_gamma(double c, double mass_term) {
  // d/dx_0 = (1/c) d/dt
  return {gamma(0) * (1.0 / c), gamma(1), gamma(2), mass_term * Matrix2c::identity()};
}

DiracSymbol dirac_symbol_generators(double c, double mass_term) {
  return {(-2.0 * kI / c) * k_generator(3), (-2.0 * kI) * k_generator(2),
          (2.0 * kI) * k_generator(1), mass_term * Matrix2c::identity()};
}

double max_deviation(const DiracSymbol& a, const DiracSymbol& b) {
  return std::max({max_deviation(a.dt, b.dt), max_deviation(a.dx, b.dx),
                   max_deviation(a.dy, b.dy), max_deviation(a.mass, b.mass)});
}

}  // namespace so21
