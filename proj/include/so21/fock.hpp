#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "so21/algebra.hpp"
#include "so21/planewave.hpp"
#include "so21/report.hpp"

namespace so21 {

enum class Species { Electron, Positron };

/// Momenta of a periodic box of side L, discretizing the (kx, ky) integrals.
/// Each momentum carries one electron and one positron mode.
struct ModeSet {
  std::vector<Momentum> momenta;
  double box_side = 1.0;

  /// Deterministic momentum-symmetric set on the box lattice 2 pi n / L:
  /// k = 0 when `count` is odd, then +-(1,0), +-(0,1), +-(1,1), +-(1,-1), ...
  /// in units of 2 pi / L.
  static ModeSet symmetric(std::size_t count, double box_side);

  std::optional<std::size_t> find(Momentum k, double tol = 1e-12) const;
};

constexpr std::size_t kMaxModes = 6;

class FockOperator;
using FockState = Eigen::VectorXcd;
using SparseMatrixC = Eigen::SparseMatrix<cplx>;

namespace detail {
struct SpaceData;
}

/// Fermionic Fock space of 2M modes, dimension 4^M. Jordan-Wigner positions
/// 0..M-1 hold electrons, M..2M-1 positrons; bit j of a basis index is the
/// occupation of position j.
class FockSpace {
 public:
  FockSpace(ModeSet modes, PhysicalParams params, std::size_t max_modes = kMaxModes);

  std::size_t mode_count() const;
  std::size_t dimension() const;
  const ModeSet& modes() const;
  const PhysicalParams& params() const;
  /// Dispersion frequency of mode i.
  double omega(std::size_t mode) const;

  /// Jordan-Wigner string position of a mode.
  std::size_t position(Species s, std::size_t mode) const;
  /// Index of the mode holding -k. Throws InvalidArgument if absent.
  std::size_t partner(std::size_t mode) const;

  FockOperator annihilation(Species s, std::size_t mode) const;
  FockOperator creation(Species s, std::size_t mode) const;
  FockOperator number(Species s, std::size_t mode) const;
  FockOperator identity() const;
  FockOperator zero() const;

  FockState vacuum() const;
  FockState basis_state(std::uint64_t occupation_bits) const;
  std::uint64_t occupation_bit(Species s, std::size_t mode) const;

  bool same_space(const FockSpace& other) const { return data_ == other.data_; }

 private:
  friend class FockOperator;
  std::shared_ptr<const detail::SpaceData> data_;
};

/// Square operator on a FockSpace. Operators of different spaces cannot be
/// combined.
class FockOperator {
 public:
  FockOperator(std::shared_ptr<const detail::SpaceData> space, SparseMatrixC matrix);

  const SparseMatrixC& matrix() const { return matrix_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }

  FockOperator adjoint() const;
  /// Largest entry-wise modulus, 0 for the zero operator.
  double max_abs() const;
  bool is_diagonal() const;

  FockState apply(const FockState& v) const;
  cplx expectation(const FockState& v) const;
  cplx entry(std::size_t row, std::size_t col) const;

  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);
  FockOperator& operator*=(cplx s);

  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(FockOperator a, cplx s) { return a *= s; }
  friend FockOperator operator*(cplx s, FockOperator a) { return a *= s; }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);

 private:
  void require_same(const FockOperator& o) const;
  std::shared_ptr<const detail::SpaceData> space_;
  SparseMatrixC matrix_;
};

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);

/// Max |a - b| entry-wise.
double max_deviation(const FockOperator& a, const FockOperator& b);

/// Sorted eigenvalues of a Hermitian operator. Diagonal operators are read
/// off exactly; others are diagonalized densely (dimension <= 1024).
std::vector<double> eigenvalues(const FockOperator& op);

/// Outcome of one operator identity: the largest entry-wise deviation.
struct OperatorCheck {
  std::string name;
  double max_deviation = 0.0;
  std::size_t dimension = 0;
  double tolerance = 0.0;
  bool passed = false;

  static OperatorCheck make(std::string name, double deviation, std::size_t dim,
                            double tolerance);
  Check as_check() const;
};

void to_json(nlohmann::ordered_json& j, const OperatorCheck& c);

/// The ten anti-commutator families of b, b+, d, d+ over all mode pairs.
std::vector<OperatorCheck> verify_ccr(const FockSpace& space, double tolerance = 1e-14);

/// sum_k hbar w(k) (b+ b - d d+)
FockOperator hamiltonian(const FockSpace& space);
/// sum_k hbar w(k) (b+ b + d+ d)
FockOperator normal_ordered_hamiltonian(const FockSpace& space);
/// sum_k (b+ b - d+ d)
FockOperator charge_operator(const FockSpace& space);
/// sum_k k (b+ b + d+ d), x and y components.
std::array<FockOperator, 2> momentum_operators(const FockSpace& space);

/// Energies sum_k hbar w(k) (n+(k) + n-(k)) of every occupation basis state,
/// indexed like the basis.
std::vector<double> occupation_energies(const FockSpace& space);

/// Two spinor components of the discrete-box field
///   sum_k (1/L) [b(k) u_N(k) + d+(k) v_N(k)] e^{i(k.r - w t)}.
std::array<FockOperator, 2> field_operator(const FockSpace& space, double x, double y, double t);

struct FieldAnticommutator {
  /// Coefficient matrix of {Psi_a(r,t), (Psi^+ sigma_0)_b(r',t)} times the identity.
  Matrix2c kernel;
  /// How far each entry is from a multiple of the identity.
  double identity_deviation = 0.0;
  /// max over a, b of |{Psi_a(r), Psi_b(r')}|.
  double same_field_deviation = 0.0;
};

FieldAnticommutator field_anticommutator(const FockSpace& space, double x, double y,
                                         double x_prime, double y_prime, double t);

/// sum_k (u_N u_N^+ + v_N v_N^+) sigma_0 e^{i k.(r - r')} / L^2
Matrix2c field_kernel_mode_sum(const FockSpace& space, double x, double y, double x_prime,
                               double y_prime);

/// Integral over the box of hbar Psi^+ sigma_0 (i d/dt Psi), evaluated with
/// an n x n point rule that is exact for lattice momenta. Throws
/// InvalidArgument if a momentum is off the 2 pi / L lattice or the rule is
/// too coarse to separate the modes. n = 0 picks the smallest exact rule.
FockOperator field_hamiltonian(const FockSpace& space, double t = 0.0,
                               std::size_t points_per_side = 0);

/// P(k) = b(k) d(-k)
FockOperator pair_annihilation(const FockSpace& space, std::size_t mode);

/// Hermitian pair perturbation  b+(k) d+(-k) + d(-k) b(k).
FockOperator pair_operator(const FockSpace& space, std::size_t mode);
/// The printed ordering  b+(k) d+(-k) + b(k) d(-k), which is anti-Hermitian.
FockOperator pair_operator_literal(const FockSpace& space, std::size_t mode);

struct PairCommutatorReport {
  std::size_t mode = 0;
  std::size_t mode_prime = 0;
  /// |[P, P+] - (I - n_b(k) - n_d(-k))| (same mode only, else 0).
  double exact_identity_deviation = 0.0;
  /// <vac|[P(k), P+(k')]|vac>
  cplx vacuum_expectation{};
  /// max |[P(k), P+(k')]| for k != k', 0 otherwise.
  double off_diagonal_max = 0.0;
  std::size_t dimension = 0;
};

PairCommutatorReport pair_commutator_check(const FockSpace& space, std::size_t mode,
                                           std::size_t mode_prime);

enum class PairOrdering {
  /// n_b(k) n_d(-k), positive semidefinite.
  Counting,
  /// b+(k) d+(-k) b(k) d(-k) as printed, equal to -n_b(k) n_d(-k).
  Literal,
};

FockOperator pair_number_operator(const FockSpace& space, std::size_t mode,
                                  PairOrdering ordering = PairOrdering::Counting);
/// sum over all modes of pair_number_operator.
FockOperator total_pair_number(const FockSpace& space,
                               PairOrdering ordering = PairOrdering::Counting);

}  // namespace so21
