#include "so21/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "so21/errors.hpp"

namespace so21 {

namespace detail {

struct SpaceData {
  ModeSet modes;
  PhysicalParams params;
  std::vector<double> omegas;
  std::size_t dimension = 0;
};

}  // namespace detail

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kDenseLimit = 1024;

using Triplet = Eigen::Triplet<cplx>;

SparseMatrixC from_triplets(std::size_t dim, const std::vector<Triplet>& t) {
  SparseMatrixC m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMatrixC identity_matrix(std::size_t dim) {
  std::vector<Triplet> t;
  t.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) t.emplace_back(i, i, 1.0);
  return from_triplets(dim, t);
}

}  // namespace

// ---------------------------------------------------------------- ModeSet

ModeSet ModeSet::symmetric(std::size_t count, double box_side) {
  if (count == 0) throw InvalidArgument("ModeSet::symmetric: count must be >= 1");
  // Half-plane representatives n with nx > 0 or (nx == 0, ny > 0); each
  // contributes the pair +n, -n.
  std::vector<std::pair<int, int>> reps;
  const int reach = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))) + 1;
  for (int nx = 0; nx <= reach; ++nx) {
    for (int ny = -reach; ny <= reach; ++ny) {
      if (nx > 0 || (nx == 0 && ny > 0)) reps.emplace_back(nx, ny);
    }
  }
  std::sort(reps.begin(), reps.end(), [](auto a, auto b) {
    const int na = a.first * a.first + a.second * a.second;
    const int nb = b.first * b.first + b.second * b.second;
    return std::tuple(na, -a.first, -a.second) < std::tuple(nb, -b.first, -b.second);
  });

  const double unit = 2.0 * std::numbers::pi / box_side;
  ModeSet out{{}, box_side};
  if (count % 2 == 1) out.momenta.push_back({0.0, 0.0});
  for (const auto& [nx, ny] : reps) {
    if (out.momenta.size() >= count) break;
    out.momenta.push_back({unit * nx, unit * ny});
    out.momenta.push_back({-unit * nx, -unit * ny});
  }
  return out;
}

std::optional<std::size_t> ModeSet::find(Momentum k, double tol) const {
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    if (std::abs(momenta[i].kx - k.kx) <= tol && std::abs(momenta[i].ky - k.ky) <= tol) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- FockSpace

FockSpace::FockSpace(ModeSet modes, PhysicalParams params, std::size_t max_modes) {
  params.validate();
  const std::size_t m = modes.momenta.size();
  if (m == 0) throw InvalidArgument("FockSpace: at least one mode is required");
  if (m > max_modes) {
    throw CapacityError("FockSpace: " + std::to_string(m) + " modes exceed the limit of " +
                        std::to_string(max_modes));
  }
  if (!(modes.box_side > 0.0) || !std::isfinite(modes.box_side)) {
    throw InvalidArgument("FockSpace: box side must be positive");
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& k = modes.momenta[i];
    if (!std::isfinite(k.kx) || !std::isfinite(k.ky)) {
      throw InvalidArgument("FockSpace: non-finite momentum");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (modes.momenta[j] == k) {
        throw InvalidArgument("FockSpace: duplicate momentum at modes " + std::to_string(j) +
                              " and " + std::to_string(i));
      }
    }
  }
  auto data = std::make_shared<detail::SpaceData>();
  data->dimension = std::size_t{1} << (2 * m);
  for (const auto& k : modes.momenta) data->omegas.push_back(dispersion_omega(k, params));
  data->modes = std::move(modes);
  data->params = params;
  data_ = std::move(data);
}

std::size_t FockSpace::mode_count() const { return data_->modes.momenta.size(); }
std::size_t FockSpace::dimension() const { return data_->dimension; }
const ModeSet& FockSpace::modes() const { return data_->modes; }
const PhysicalParams& FockSpace::params() const { return data_->params; }

double FockSpace::omega(std::size_t mode) const {
  if (mode >= mode_count()) throw InvalidArgument("FockSpace: mode index out of range");
  return data_->omegas[mode];
}

std::size_t FockSpace::position(Species s, std::size_t mode) const {
  if (mode >= mode_count()) {
    throw InvalidArgument("FockSpace: mode index " + std::to_string(mode) + " out of range");
  }
  return s == Species::Electron ? mode : mode_count() + mode;
}

std::size_t FockSpace::partner(std::size_t mode) const {
  if (mode >= mode_count()) throw InvalidArgument("FockSpace: mode index out of range");
  const auto idx = modes().find(-modes().momenta[mode]);
  if (!idx) {
    throw InvalidArgument("FockSpace: mode set does not contain -k for mode " +
                          std::to_string(mode));
  }
  return *idx;
}

std::uint64_t FockSpace::occupation_bit(Species s, std::size_t mode) const {
  return std::uint64_t{1} << position(s, mode);
}

FockOperator FockSpace::annihilation(Species s, std::size_t mode) const {
  const std::size_t pos = position(s, mode);
  const std::uint64_t bit = std::uint64_t{1} << pos;
  const std::uint64_t below = bit - 1;
  std::vector<Triplet> t;
  t.reserve(dimension() / 2);
  for (std::uint64_t state = 0; state < dimension(); ++state) {
    if ((state & bit) == 0) continue;
    // Jordan-Wigner string: one sign per occupied position before `pos`.
    const double sign = (std::popcount(state & below) % 2 == 0) ? 1.0 : -1.0;
    t.emplace_back(static_cast<Eigen::Index>(state ^ bit), static_cast<Eigen::Index>(state), sign);
  }
  return {data_, from_triplets(dimension(), t)};
}

FockOperator FockSpace::creation(Species s, std::size_t mode) const {
  return annihilation(s, mode).adjoint();
}

FockOperator FockSpace::number(Species s, std::size_t mode) const {
  const std::uint64_t bit = occupation_bit(s, mode);
  std::vector<Triplet> t;
  for (std::uint64_t state = 0; state < dimension(); ++state) {
    if (state & bit) t.emplace_back(state, state, 1.0);
  }
  return {data_, from_triplets(dimension(), t)};
}

FockOperator FockSpace::identity() const { return {data_, identity_matrix(dimension())}; }

FockOperator FockSpace::zero() const {
  return {data_, SparseMatrixC(static_cast<Eigen::Index>(dimension()),
                               static_cast<Eigen::Index>(dimension()))};
}

FockState FockSpace::vacuum() const { return basis_state(0); }

FockState FockSpace::basis_state(std::uint64_t occupation_bits) const {
  if (occupation_bits >= dimension()) throw InvalidArgument("basis_state: bits out of range");
  FockState v = FockState::Zero(static_cast<Eigen::Index>(dimension()));
  v(static_cast<Eigen::Index>(occupation_bits)) = 1.0;
  return v;
}

// ---------------------------------------------------------------- FockOperator

FockOperator::FockOperator(std::shared_ptr<const detail::SpaceData> space, SparseMatrixC matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (!space_ || matrix_.rows() != static_cast<Eigen::Index>(space_->dimension) ||
      matrix_.cols() != matrix_.rows()) {
    throw InvalidArgument("FockOperator: matrix dimension does not match its space");
  }
}

void FockOperator::require_same(const FockOperator& o) const {
  if (space_ != o.space_) {
    throw InvalidArgument("FockOperator: operands belong to different Fock spaces");
  }
}

FockOperator FockOperator::adjoint() const {
  SparseMatrixC a = matrix_.adjoint();
  return {space_, std::move(a)};
}

double FockOperator::max_abs() const {
  double out = 0.0;
  for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it) {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

bool FockOperator::is_diagonal() const {
  for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it) {
      if (it.row() != it.col() && it.value() != cplx{}) return false;
    }
  }
  return true;
}

FockState FockOperator::apply(const FockState& v) const {
  if (v.size() != matrix_.cols()) throw InvalidArgument("FockOperator::apply: size mismatch");
  return matrix_ * v;
}

cplx FockOperator::expectation(const FockState& v) const { return v.dot(apply(v)); }

cplx FockOperator::entry(std::size_t row, std::size_t col) const {
  return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  require_same(o);
  matrix_ += o.matrix_;
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
  require_same(o);
  matrix_ -= o.matrix_;
  return *this;
}

FockOperator& FockOperator::operator*=(cplx s) {
  matrix_ *= s;
  return *this;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  a.require_same(b);
  SparseMatrixC prod = a.matrix_ * b.matrix_;
  return {a.space_, std::move(prod)};
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) {
  return a * b + b * a;
}

double max_deviation(const FockOperator& a, const FockOperator& b) { return (a - b).max_abs(); }

std::vector<double> eigenvalues(const FockOperator& op) {
  const double scale = std::max(1.0, op.max_abs());
  if (max_deviation(op, op.adjoint()) > 1e-12 * scale) {
    throw InvalidArgument("eigenvalues: operator is not Hermitian");
  }
  std::vector<double> out;
  if (op.is_diagonal()) {
    out.reserve(op.dimension());
    for (std::size_t i = 0; i < op.dimension(); ++i) out.push_back(op.entry(i, i).real());
  } else {
    if (op.dimension() > kDenseLimit) {
      throw CapacityError("eigenvalues: dense diagonalization limited to dimension " +
                          std::to_string(kDenseLimit));
    }
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(op.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- checks

OperatorCheck OperatorCheck::make(std::string name, double deviation, std::size_t dim,
                                  double tolerance) {
  const bool ok = std::isfinite(deviation) && deviation <= tolerance;
  return {std::move(name), deviation, dim, tolerance, ok};
}

Check OperatorCheck::as_check() const {
  Check c{name, max_deviation, 0.0, tolerance, passed, dimension};
  return c;
}

void to_json(nlohmann::ordered_json& j, const OperatorCheck& c) {
  j = nlohmann::ordered_json{{"check", c.name},
                             {"max_deviation", c.max_deviation},
                             {"dimension", c.dimension},
                             {"passed", c.passed},
                             {"tolerance", c.tolerance}};
}

std::vector<OperatorCheck> verify_ccr(const FockSpace& space, double tolerance) {
  const std::size_t m = space.mode_count();
  std::vector<FockOperator> b, bd, d, dd;
  for (std::size_t i = 0; i < m; ++i) {
    b.push_back(space.annihilation(Species::Electron, i));
    bd.push_back(b.back().adjoint());
    d.push_back(space.annihilation(Species::Positron, i));
    dd.push_back(d.back().adjoint());
  }
  const FockOperator id = space.identity();

  struct Family {
    const char* name;
    const std::vector<FockOperator>* lhs;
    const std::vector<FockOperator>* rhs;
    bool delta;  // anti-commutator equals delta_kk' I instead of zero
  };
  const Family families[] = {
      {"{b,b}", &b, &b, false},      {"{d,d}", &d, &d, false},
      {"{b,d}", &b, &d, false},      {"{b+,b+}", &bd, &bd, false},
      {"{d+,d+}", &dd, &dd, false},  {"{b+,d+}", &bd, &dd, false},
      {"{b,d+}", &b, &dd, false},    {"{d,b+}", &d, &bd, false},
      {"{b,b+}=delta", &b, &bd, true}, {"{d,d+}=delta", &d, &dd, true},
  };

  std::vector<OperatorCheck> out;
  for (const auto& f : families) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        FockOperator ac = anticommutator((*f.lhs)[i], (*f.rhs)[j]);
        if (f.delta && i == j) ac -= id;
        worst = std::max(worst, ac.max_abs());
      }
    }
    out.push_back(OperatorCheck::make(std::string("ccr ") + f.name, worst, space.dimension(),
                                      tolerance));
  }
  return out;
}

// ---------------------------------------------------------------- Hamiltonians

FockOperator hamiltonian(const FockSpace& space) {
  FockOperator h = space.zero();
  for (std::size_t k = 0; k < space.mode_count(); ++k) {
    const auto b = space.annihilation(Species::Electron, k);
    const auto d = space.annihilation(Species::Positron, k);
    const double energy = space.params().hbar * space.omega(k);
    h += energy * (b.adjoint() * b - d * d.adjoint());
  }
  return h;
}

FockOperator normal_ordered_hamiltonian(const FockSpace& space) {
  FockOperator h = space.zero();
  for (std::size_t k = 0; k < space.mode_count(); ++k) {
    const double energy = space.params().hbar * space.omega(k);
    h += energy * (space.number(Species::Electron, k) + space.number(Species::Positron, k));
  }
  return h;
}

FockOperator charge_operator(const FockSpace& space) {
  FockOperator q = space.zero();
  for (std::size_t k = 0; k < space.mode_count(); ++k) {
    q += space.number(Species::Electron, k) - space.number(Species::Positron, k);
  }
  return q;
}

std::array<FockOperator, 2> momentum_operators(const FockSpace& space) {
  FockOperator px = space.zero();
  FockOperator py = space.zero();
  for (std::size_t k = 0; k < space.mode_count(); ++k) {
    const FockOperator n =
        space.number(Species::Electron, k) + space.number(Species::Positron, k);
    px += space.modes().momenta[k].kx * n;
    py += space.modes().momenta[k].ky * n;
  }
  return {px, py};
}

std::vector<double> occupation_energies(const FockSpace& space) {
  std::vector<double> out(space.dimension(), 0.0);
  for (std::uint64_t state = 0; state < space.dimension(); ++state) {
    for (std::size_t k = 0; k < space.mode_count(); ++k) {
      const int occupied = ((state & space.occupation_bit(Species::Electron, k)) ? 1 : 0) +
                           ((state & space.occupation_bit(Species::Positron, k)) ? 1 : 0);
      out[state] += occupied * space.params().hbar * space.omega(k);
    }
  }
  return out;
}

// ---------------------------------------------------------------- fields

namespace {

struct ModeFactors {
  FockOperator b;
  FockOperator d_dagger;
  Spinor2 u;
  Spinor2 v;
};

std::vector<ModeFactors> mode_factors(const FockSpace& space) {
  std::vector<ModeFactors> out;
  for (std::size_t k = 0; k < space.mode_count(); ++k) {
    const Momentum mom = space.modes().momenta[k];
    out.push_back({space.annihilation(Species::Electron, k),
                   space.creation(Species::Positron, k),
                   normalized_spinor(Branch::Positive, mom, space.params()),
                   normalized_spinor(Branch::Negative, mom, space.params())});
  }
  return out;
}

// Psi(r, t) with each mode additionally weighted by `weight(k)`.
template <class Weight>
std::array<FockOperator, 2> weighted_field(const FockSpace& space,
                                           const std::vector<ModeFactors>& factors, double x,
                                           double y, double t, Weight weight) {
  std::array<FockOperator, 2> psi{space.zero(), space.zero()};
  const double inv_l = 1.0 / space.modes().box_side;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Momentum mom = space.modes().momenta[k];
    const cplx phase =
        std::polar(inv_l * weight(k), mom.kx * x + mom.ky * y - space.omega(k) * t);
    const auto& f = factors[k];
    psi[0] += (phase * f.u.upper) * f.b + (phase * f.v.upper) * f.d_dagger;
    psi[1] += (phase * f.u.lower) * f.b + (phase * f.v.lower) * f.d_dagger;
  }
  return psi;
}

}  // namespace

std::array<FockOperator, 2> field_operator(const FockSpace& space, double x, double y, double t) {
  return weighted_field(space, mode_factors(space), x, y, t, [](std::size_t) { return 1.0; });
}

FieldAnticommutator field_anticommutator(const FockSpace& space, double x, double y,
                                         double x_prime, double y_prime, double t) {
  const auto factors = mode_factors(space);
  const auto unit = [](std::size_t) { return 1.0; };
  const auto psi = weighted_field(space, factors, x, y, t, unit);
  const auto psi_p = weighted_field(space, factors, x_prime, y_prime, t, unit);
  const double metric[2] = {1.0, -1.0};
  const FockOperator id = space.identity();

  FieldAnticommutator out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      // (Psi^+ sigma_0)_b = Psi_b^+ * metric[b]
      const FockOperator ac = metric[b] * anticommutator(psi[a], psi_p[b].adjoint());
      const cplx coefficient = ac.entry(0, 0);
      out.kernel(a, b) = coefficient;
      out.identity_deviation = std::max(out.identity_deviation, max_deviation(ac, coefficient * id));
      out.same_field_deviation =
          std::max(out.same_field_deviation, anticommutator(psi[a], psi_p[b]).max_abs());
    }
  }
  return out;
}

Matrix2c field_kernel_mode_sum(const FockSpace& space, double x, double y, double x_prime,
                               double y_prime) {
  auto outer = [](const Spinor2& s) {
    return Matrix2c{s.upper * std::conj(s.upper), s.upper * std::conj(s.lower),
                    s.lower * std::conj(s.upper), s.lower * std::conj(s.lower)};
  };
  const double l = space.modes().box_side;
  Matrix2c sum;
  for (std::size_t k = 0; k < space.mode_count(); ++k) {
    const Momentum mom = space.modes().momenta[k];
    const Spinor2 u = normalized_spinor(Branch::Positive, mom, space.params());
    const Spinor2 v = normalized_spinor(Branch::Negative, mom, space.params());
    const cplx phase = std::polar(1.0 / (l * l), mom.kx * (x - x_prime) + mom.ky * (y - y_prime));
    sum += phase * ((outer(u) + outer(v)) * pauli(3));
  }
  return sum;
}

FockOperator field_hamiltonian(const FockSpace& space, double t, std::size_t points_per_side) {
  const double l = space.modes().box_side;
  const double unit = 2.0 * std::numbers::pi / l;
  long max_spread = 0;
  std::vector<std::pair<long, long>> lattice;
  for (const auto& k : space.modes().momenta) {
    const double nx = k.kx / unit;
    const double ny = k.ky / unit;
    if (std::abs(nx - std::round(nx)) > 1e-9 || std::abs(ny - std::round(ny)) > 1e-9) {
      throw InvalidArgument("field_hamiltonian: momenta must lie on the 2 pi / L lattice");
    }
    lattice.emplace_back(std::lround(nx), std::lround(ny));
  }
  for (const auto& a : lattice) {
    for (const auto& b : lattice) {
      max_spread = std::max({max_spread, std::abs(a.first - b.first), std::abs(a.second - b.second)});
    }
  }
  const std::size_t needed = static_cast<std::size_t>(max_spread) + 1;
  const std::size_t n = points_per_side == 0 ? needed : points_per_side;
  if (n < needed) {
    throw InvalidArgument("field_hamiltonian: need at least " + std::to_string(needed) +
                          " quadrature points per side");
  }

  const auto factors = mode_factors(space);
  const double h = l / static_cast<double>(n);
  const double weight = h * h * space.params().hbar;
  const double metric[2] = {1.0, -1.0};
  FockOperator total = space.zero();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) * h;
      const double y = static_cast<double>(j) * h;
      const auto psi = weighted_field(space, factors, x, y, t, [](std::size_t) { return 1.0; });
      // i d/dt acting on e^{-i w t} brings down w(k).
      const auto dpsi = weighted_field(space, factors, x, y, t,
                                       [&](std::size_t k) { return space.omega(k); });
      for (int a = 0; a < 2; ++a) total += (weight * metric[a]) * (psi[a].adjoint() * dpsi[a]);
    }
  }
  return total;
}

// ---------------------------------------------------------------- pairs

FockOperator pair_annihilation(const FockSpace& space, std::size_t mode) {
  const std::size_t partner = space.partner(mode);
  return space.annihilation(Species::Electron, mode) *
         space.annihilation(Species::Positron, partner);
}

FockOperator pair_operator(const FockSpace& space, std::size_t mode) {
  const std::size_t partner = space.partner(mode);
  const FockOperator create =
      space.creation(Species::Electron, mode) * space.creation(Species::Positron, partner);
  return create + create.adjoint();
}

FockOperator pair_operator_literal(const FockSpace& space, std::size_t mode) {
  const std::size_t partner = space.partner(mode);
  return space.creation(Species::Electron, mode) * space.creation(Species::Positron, partner) +
         space.annihilation(Species::Electron, mode) *
             space.annihilation(Species::Positron, partner);
}

PairCommutatorReport pair_commutator_check(const FockSpace& space, std::size_t mode,
                                           std::size_t mode_prime) {
  const FockOperator p = pair_annihilation(space, mode);
  const FockOperator p_prime = pair_annihilation(space, mode_prime);
  const FockOperator comm = commutator(p, p_prime.adjoint());

  PairCommutatorReport out;
  out.mode = mode;
  out.mode_prime = mode_prime;
  out.dimension = space.dimension();
  out.vacuum_expectation = comm.expectation(space.vacuum());
  if (mode == mode_prime) {
    const FockOperator expected = space.identity() - space.number(Species::Electron, mode) -
                                  space.number(Species::Positron, space.partner(mode));
    out.exact_identity_deviation = max_deviation(comm, expected);
  } else {
    out.off_diagonal_max = comm.max_abs();
  }
  return out;
}

FockOperator pair_number_operator(const FockSpace& space, std::size_t mode,
                                  PairOrdering ordering) {
  const std::size_t partner = space.partner(mode);
  if (ordering == PairOrdering::Literal) {
    return space.creation(Species::Electron, mode) * space.creation(Species::Positron, partner) *
           space.annihilation(Species::Electron, mode) *
           space.annihilation(Species::Positron, partner);
  }
  return space.number(Species::Electron, mode) * space.number(Species::Positron, partner);
}

FockOperator total_pair_number(const FockSpace& space, PairOrdering ordering) {
  FockOperator n = space.zero();
  for (std::size_t k = 0; k < space.mode_count(); ++k) n += pair_number_operator(space, k, ordering);
  return n;
}

}  // namespace so21
