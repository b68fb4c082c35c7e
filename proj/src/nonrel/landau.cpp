#include "so21/nonrel/landau.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "so21/errors.hpp"

namespace so21::nonrel {

namespace {

using SparseC = Eigen::SparseMatrix<cplx>;

double flux_quantum(const PhysicalParams& p) { return 2.0 * std::numbers::pi * p.hbar / p.e; }

// Two passes of Cholesky QR; falls back to Householder if the Gram matrix is
// numerically singular.
void orthonormalize(Eigen::MatrixXcd& y) {
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::MatrixXcd gram = y.adjoint() * y;
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) {
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
      y = qr.householderQ() * Eigen::MatrixXcd::Identity(y.rows(), y.cols());
      return;
    }
    // y <- y R^{-1}, R upper triangular with gram = R^+ R.
    y = llt.matrixU().solve<Eigen::OnTheRight>(y);
  }
}

}  // namespace

double quantized_field(double b, const Grid2D& grid, const PhysicalParams& p) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("landau: B must be positive");
  const double area = grid.length() * grid.length();
  const double quanta = std::max(1.0, std::round(b * area / flux_quantum(p)));
  return quanta * flux_quantum(p) / area;
}

SparseC landau_operator(double b, const Grid2D& grid, const PhysicalParams& p) {
  p.validate();
  const std::size_t n = grid.n();
  const double h = grid.spacing();
  const double len = grid.length();
  const double quanta = b * len * len / flux_quantum(p);
  if (std::abs(quanta - std::round(quanta)) > 1e-9)
    throw InvalidArgument("landau: B must carry an integer number of flux quanta");

  const double hop = p.hbar * p.hbar / (2.0 * p.m * h * h);
  const double q = p.e / p.hbar;
  auto idx = [n](std::size_t ix, std::size_t iy) {
    return static_cast<Eigen::Index>((iy % n) * n + (ix % n));
  };

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(5 * n * n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = grid.coordinate(ix);
      const double y = grid.coordinate(iy);
      const Eigen::Index r = idx(ix, iy);
      trip.emplace_back(r, r, 4.0 * hop);

      // Peierls phase e A . dl / hbar with Ax = -B y / 2, Ay = B x / 2. Wrap
      // links carry the magnetic translation that makes the gauge periodic.
      double tx = q * (-b * y / 2.0) * h;
      if (ix == n - 1) tx -= q * b * len * y / 2.0;
      const Eigen::Index rx = idx(ix + 1, iy);
      trip.emplace_back(r, rx, -hop * std::polar(1.0, tx));
      trip.emplace_back(rx, r, -hop * std::polar(1.0, -tx));

      double ty = q * (b * x / 2.0) * h;
      if (iy == n - 1) ty += q * b * len * x / 2.0;
      const Eigen::Index ry = idx(ix, iy + 1);
      trip.emplace_back(r, ry, -hop * std::polar(1.0, ty));
      trip.emplace_back(ry, r, -hop * std::polar(1.0, -ty));
    }
  SparseC m(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n * n));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

std::vector<double> lowest_eigenvalues(const SparseC& h, std::size_t count, std::uint64_t seed,
                                       std::size_t spare) {
  const Eigen::Index dim = h.rows();
  if (h.cols() != dim || count == 0 || static_cast<Eigen::Index>(count) > dim)
    throw InvalidArgument("lowest_eigenvalues: bad matrix shape or count");

  // Block shift-invert subspace iteration with Rayleigh-Ritz on h itself.
  // The spare vectors let degenerate levels at the top of the wanted range
  // converge; the rate is lambda_count / lambda_(block+1).
  if (spare == 0) spare = std::max<std::size_t>(8, count / 4);
  const auto block = std::min<Eigen::Index>(dim, static_cast<Eigen::Index>(count + spare));

  double scale = 1.0;
  for (Eigen::Index k = 0; k < h.nonZeros(); ++k)
    scale = std::max(scale, std::abs(h.valuePtr()[k]));
  SparseC shifted = h;
  for (Eigen::Index i = 0; i < dim; ++i) shifted.coeffRef(i, i) += 1e-10 * scale;
  Eigen::SimplicialLDLT<SparseC> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw DiagnosticsError("lowest_eigenvalues: factorization failed");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd x(dim, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) x(i, j) = cplx(gauss(rng), gauss(rng));

  // Three inverse applications per Rayleigh-Ritz step: solves are cheap next
  // to the dense projection, and the block stays well conditioned.
  for (int iter = 0; iter < 400; ++iter) {
    Eigen::MatrixXcd q = solver.solve(x);
    q = solver.solve(q);
    q = solver.solve(q);
    orthonormalize(q);
    const Eigen::MatrixXcd hq = h * q;
    Eigen::MatrixXcd t = q.adjoint() * hq;
    t = (t + t.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
    const Eigen::VectorXd& ritz = es.eigenvalues();
    x = q * es.eigenvectors();

    const Eigen::MatrixXcd resid = hq * es.eigenvectors() - x * ritz.asDiagonal();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(count); ++j)
      worst = std::max(worst, resid.col(j).norm() / std::max(std::abs(ritz[j]), 1e-12 * scale));
    // Eigenvalue error is of order residual^2 relative.
    if (worst < 1e-8) return {ritz.data(), ritz.data() + count};
  }
  throw DiagnosticsError("lowest_eigenvalues: subspace iteration did not converge");
}

std::vector<LandauLevel> cluster_levels(const std::vector<double>& sorted, double rel_gap) {
  std::vector<LandauLevel> out;
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const bool fresh =
        i == 0 || sorted[i] - sorted[i - 1] > rel_gap * std::abs(sorted[i]);
    if (fresh && i > 0) {
      out.back().energy = sum / static_cast<double>(out.back().degeneracy);
      sum = 0.0;
    }
    if (fresh) out.push_back({0.0, 0});
    sum += sorted[i];
    ++out.back().degeneracy;
  }
  if (!out.empty()) out.back().energy = sum / static_cast<double>(out.back().degeneracy);
  return out;
}

LandauResult landau_levels(double b, const Grid2D& grid, const PhysicalParams& p,
                           std::size_t n_levels) {
  p.validate();
  if (n_levels == 0) throw InvalidArgument("landau: need at least one level");
  LandauResult r;
  r.field_used = quantized_field(b, grid, p);
  r.flux_quanta = std::lround(r.field_used * grid.length() * grid.length() / flux_quantum(p));
  r.magnetic_length = std::sqrt(p.hbar / (p.e * r.field_used));
  if (r.magnetic_length < 3.0 * grid.spacing() || r.magnetic_length > grid.length() / 6.0)
    throw GridError("landau: magnetic length " + std::to_string(r.magnetic_length) +
                    " outside [3 dx, L/6] = [" + std::to_string(3.0 * grid.spacing()) + ", " +
                    std::to_string(grid.length() / 6.0) + "]");
  r.cyclotron_energy = p.hbar * p.e * r.field_used / p.m;

  // Each torus level holds flux_quanta states; one extra level closes the last cluster.
  const auto per_level = static_cast<std::size_t>(r.flux_quanta);
  const std::size_t count =
      std::min<std::size_t>((n_levels + 1) * per_level, grid.size());
  const auto values =
      lowest_eigenvalues(landau_operator(r.field_used, grid, p), count, 1, per_level);
  auto levels = cluster_levels(values);
  // The final cluster may be cut short by the eigenvalue count.
  if (levels.size() > n_levels) levels.resize(n_levels);
  r.levels = std::move(levels);
  for (std::size_t k = 0; k < r.levels.size(); ++k)
    r.expected.push_back(r.cyclotron_energy * (static_cast<double>(k) + 0.5));
  return r;
}

}  // namespace so21::nonrel
