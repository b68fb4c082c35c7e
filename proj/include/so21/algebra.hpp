#pragma once

#include <array>
#include <complex>

namespace so21 {

using cplx = std::complex<double>;

/// 2x2 complex matrix stored row-major. Carrier for the Pauli, gamma and
/// SO(2,1) generator algebra and for the per-mode Dirac Hamiltonians.
class Matrix2c {
 public:
  constexpr Matrix2c() = default;
  constexpr Matrix2c(cplx a00, cplx a01, cplx a10, cplx a11) : m_{a00, a01, a10, a11} {}

  static constexpr Matrix2c identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Matrix2c zero() { return {}; }
  static constexpr Matrix2c diag(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

  constexpr cplx operator()(int row, int col) const { return m_[2 * row + col]; }
  constexpr cplx& operator()(int row, int col) { return m_[2 * row + col]; }
  constexpr const std::array<cplx, 4>& entries() const { return m_; }

  Matrix2c adjoint() const;
  cplx trace() const { return m_[0] + m_[3]; }
  cplx det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  /// Largest entry-wise modulus.
  double max_abs() const;
  bool is_hermitian(double tol = 0.0) const;

  Matrix2c& operator+=(const Matrix2c& o);
  Matrix2c& operator-=(const Matrix2c& o);
  Matrix2c& operator*=(cplx s);

  friend Matrix2c operator+(Matrix2c a, const Matrix2c& b) { return a += b; }
  friend Matrix2c operator-(Matrix2c a, const Matrix2c& b) { return a -= b; }
  friend Matrix2c operator-(Matrix2c a) { return a *= -1.0; }
  friend Matrix2c operator*(Matrix2c a, cplx s) { return a *= s; }
  friend Matrix2c operator*(cplx s, Matrix2c a) { return a *= s; }
  friend Matrix2c operator*(const Matrix2c& a, const Matrix2c& b);
  friend bool operator==(const Matrix2c&, const Matrix2c&) = default;

 private:
  std::array<cplx, 4> m_{};
};

/// Entry-wise max |a - b|.
double max_deviation(const Matrix2c& a, const Matrix2c& b);

/// Pauli matrix sigma_1, sigma_2 or sigma_3. sigma_0 of the planar equation
/// is sigma_3.
Matrix2c pauli(int index);

/// gamma_0 = -i sigma_3, gamma_1 = sigma_1, gamma_2 = sigma_2.
Matrix2c gamma(int mu);

/// SO(2,1) generators K1 = -i sigma_2 / 2, K2 = i sigma_1 / 2, K3 = sigma_3 / 2.
Matrix2c k_generator(int index);

Matrix2c commutator(const Matrix2c& a, const Matrix2c& b);
Matrix2c anticommutator(const Matrix2c& a, const Matrix2c& b);

/// exp(-i * phase * h) for Hermitian h, evaluated in closed form from the
/// decomposition h = a0 I + a . sigma. Throws InvalidArgument when h is not
/// Hermitian to 1e-12.
Matrix2c matrix_exponential(const Matrix2c& h, double phase);

/// Coefficients of the first-order operator  D_t d/dt + D_x d/dx + D_y d/dy + M
/// acting on a two-component field. Used to compare the three equivalent
/// ways of writing the planar Dirac operator.
struct DiracSymbol {
  Matrix2c dt;
  Matrix2c dx;
  Matrix2c dy;
  Matrix2c mass;
};

/// -i sigma_0 / c d/dt + sigma_1 d/dx + sigma_2 d/dy + (m c / hbar) I
DiracSymbol dirac_symbol_pauli(double c, double mass_term);
/// gamma_mu d/dx_mu + (m c / hbar) I with x_0 = c t.
DiracSymbol dirac_symbol_gamma(double c, double mass_term);
/// -2i K3 / c d/dt - 2i K2 d/dx + 2i K1 d/dy + (m c / hbar) I
DiracSymbol dirac_symbol_generators(double c, double mass_term);

double max_deviation(const DiracSymbol& a, const DiracSymbol& b);

}  // namespace so21
