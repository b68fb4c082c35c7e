#include "so21/nonrel/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nonrel/fft.hpp"
#include "so21/errors.hpp"

namespace so21::nonrel {

namespace {

void require_components(const WaveField& f, int wanted, const char* what) {
  if (f.components() != wanted)
    throw InvalidArgument(std::string(what) + ": expected a " + std::to_string(wanted) +
                          "-component field");
}

Eigen::Index flat(std::size_t ix, std::size_t iy, std::size_t n) {
  return static_cast<Eigen::Index>(iy * n + ix);
}

// Multiplies row iy (along x) in Fourier space by exp(-i hbar (kx + s_y)^2 dt / 2m).
void kinetic_rows(Eigen::ArrayXcd& a, const Grid2D& g, const std::vector<double>& shift,
                  double dt, const PhysicalParams& p) {
  const std::size_t n = g.n();
  fft::forward_rows(a, n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double k = g.wavenumber(ix) + shift[iy];
      a[flat(ix, iy, n)] *= std::polar(1.0, -p.hbar * k * k * dt / (2.0 * p.m));
    }
  fft::inverse_rows(a, n);
}

// Column ix (along y) with ky + s_x.
void kinetic_cols(Eigen::ArrayXcd& a, const Grid2D& g, const std::vector<double>& shift,
                  double dt, const PhysicalParams& p) {
  const std::size_t n = g.n();
  fft::forward_cols(a, n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double k = g.wavenumber(iy) + shift[ix];
      a[flat(ix, iy, n)] *= std::polar(1.0, -p.hbar * k * k * dt / (2.0 * p.m));
    }
  fft::inverse_cols(a, n);
}

double max_abs(const Eigen::ArrayXd& a) { return a.size() == 0 ? 0.0 : a.abs().maxCoeff(); }

}  // namespace

Matrix2c mode_hamiltonian(Momentum k, const PhysicalParams& p) {
  const double ch = p.c * p.hbar;
  return ch * k.ky * pauli(1) - ch * k.kx * pauli(2) + p.m * p.c * p.c * pauli(3);
}

WaveField evolve_dirac(const WaveField& field, double t, const PhysicalParams& p) {
  require_components(field, 2, "evolve_dirac");
  p.validate();
  const Grid2D& g = field.grid();
  const std::size_t n = g.n();
  Eigen::ArrayXcd up = field.component(0);
  Eigen::ArrayXcd lo = field.component(1);
  fft::forward_2d(up, n);
  fft::forward_2d(lo, n);
  const Matrix2c rest = Matrix2c::identity() * (p.m * p.c * p.c);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      Matrix2c h = mode_hamiltonian({g.wavenumber(ix), g.wavenumber(iy)}, p);
      if (field.gauge_frame()) h -= rest;
      const Matrix2c u = matrix_exponential(h * (1.0 / p.hbar), t);
      const Eigen::Index i = flat(ix, iy, n);
      const Spinor2 s = u * Spinor2{up[i], lo[i]};
      up[i] = s.upper;
      lo[i] = s.lower;
    }
  fft::inverse_2d(up, n);
  fft::inverse_2d(lo, n);
  WaveField out = field;
  out.component(0) = std::move(up);
  out.component(1) = std::move(lo);
  out.set_time(field.time() + t);
  return out;
}

WaveField remove_rest_phase(const WaveField& field, double t, const PhysicalParams& p) {
  require_components(field, 2, "remove_rest_phase");
  if (field.gauge_frame()) throw StateError("remove_rest_phase: field already in gauge frame");
  const cplx ph = std::polar(1.0, p.rest_frequency() * t);
  WaveField out = field;
  for (int c = 0; c < 2; ++c) out.component(c) *= ph;
  out.set_gauge_frame(true);
  return out;
}

WaveField small_component(const WaveField& field, const PhysicalParams& p) {
  require_components(field, 2, "small_component");
  if (!field.gauge_frame()) throw StateError("small_component: field not in gauge frame");
  const Grid2D& g = field.grid();
  const std::size_t n = g.n();
  Eigen::ArrayXcd a = field.component(0);
  fft::forward_2d(a, n);
  const double scale = p.hbar / (2.0 * p.m * p.c);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double kx = g.is_nyquist_index(ix) ? 0.0 : g.wavenumber(ix);
      const double ky = g.is_nyquist_index(iy) ? 0.0 : g.wavenumber(iy);
      // -(i kx + i (i ky)) = ky - i kx
      a[flat(ix, iy, n)] *= cplx(ky, -kx) * scale;
    }
  fft::inverse_2d(a, n);
  WaveField out(g, 1);
  out.component(0) = std::move(a);
  out.set_time(field.time());
  out.set_gauge_frame(true);
  return out;
}

PotentialConfig PotentialConfig::zero(const Grid2D& grid, double e) {
  const auto sz = static_cast<Eigen::Index>(grid.size());
  return {grid, Eigen::ArrayXd::Zero(sz), Eigen::ArrayXd::Zero(sz), Eigen::ArrayXd::Zero(sz), e};
}

PotentialConfig PotentialConfig::constant_scalar(const Grid2D& grid, double a0, double e) {
  PotentialConfig pc = zero(grid, e);
  pc.a0.setConstant(a0);
  return pc;
}

PotentialConfig PotentialConfig::uniform_field(const Grid2D& grid, double b, double e) {
  PotentialConfig pc = zero(grid, e);
  const std::size_t n = grid.n();
  const double half = grid.length() / 2.0;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const Eigen::Index i = flat(ix, iy, n);
      pc.ax[i] = -b * (grid.coordinate(iy) - half) / 2.0;
      pc.ay[i] = b * (grid.coordinate(ix) - half) / 2.0;
    }
  return pc;
}

void PotentialConfig::validate() const {
  const auto sz = static_cast<Eigen::Index>(grid.size());
  if (a0.size() != sz || ax.size() != sz || ay.size() != sz)
    throw InvalidArgument("potential: sample count does not match the grid");
  if (!a0.isFinite().all() || !ax.isFinite().all() || !ay.isFinite().all() || !std::isfinite(e))
    throw InvalidArgument("potential: non-finite sample");
}

std::vector<std::string> PotentialConfig::diagnostics() const {
  validate();
  std::vector<std::string> out;
  const std::size_t n = grid.n();
  const double h = grid.spacing();
  auto check = [&](const Eigen::ArrayXd& a, const char* name) {
    const double scale = std::max(max_abs(a), 1e-300);
    double worst = 0.0;
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t ix = 0; ix + 1 < n; ++ix) {
        worst = std::max(worst, std::abs(a[flat(ix + 1, iy, n)] - a[flat(ix, iy, n)]));
        worst = std::max(worst, std::abs(a[flat(iy, ix + 1, n)] - a[flat(iy, ix, n)]));
      }
    // Interior jumps above a tenth of the range indicate an unresolved potential.
    if (worst > 0.1 * scale && worst > 0.0)
      out.push_back(std::string(name) + ": max discrete gradient " + std::to_string(worst / h) +
                    " exceeds 0.1 of the range per grid spacing");
  };
  check(a0, "A0");
  check(ax, "Ax");
  check(ay, "Ay");
  return out;
}

bool PotentialConfig::has_vector_potential() const { return max_abs(ax) > 0.0 || max_abs(ay) > 0.0; }

WaveField evolve_schrodinger(const WaveField& field, double t, const PhysicalParams& p) {
  require_components(field, 1, "evolve_schrodinger");
  p.validate();
  const Grid2D& g = field.grid();
  const std::size_t n = g.n();
  Eigen::ArrayXcd a = field.component(0);
  fft::forward_2d(a, n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double k2 = g.wavenumber(ix) * g.wavenumber(ix) + g.wavenumber(iy) * g.wavenumber(iy);
      a[flat(ix, iy, n)] *= std::polar(1.0, -p.hbar * k2 * t / (2.0 * p.m));
    }
  fft::inverse_2d(a, n);
  WaveField out = field;
  out.component(0) = std::move(a);
  out.set_time(field.time() + t);
  return out;
}

WaveField evolve_schrodinger(const WaveField& field, double t, const PhysicalParams& p,
                             const PotentialConfig& pot, int steps) {
  require_components(field, 1, "evolve_schrodinger");
  p.validate();
  pot.validate();
  if (!(pot.grid == field.grid())) throw InvalidArgument("evolve_schrodinger: grid mismatch");
  if (steps < 1) throw DiagnosticsError("evolve_schrodinger: steps must be >= 1");
  const Grid2D& g = field.grid();
  const std::size_t n = g.n();
  const double dt = t / steps;

  const Eigen::ArrayXd energy = pot.e * p.c * pot.a0;
  if (max_abs(energy) * std::abs(dt) / p.hbar > std::numbers::pi)
    throw DiagnosticsError("evolve_schrodinger: potential phase per step exceeds pi");

  std::vector<double> shift_x(n), shift_y(n);
  for (std::size_t iy = 0; iy < n; ++iy) shift_x[iy] = pot.e * pot.ax[flat(0, iy, n)] / p.hbar;
  for (std::size_t ix = 0; ix < n; ++ix) shift_y[ix] = pot.e * pot.ay[flat(ix, 0, n)] / p.hbar;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      if (pot.ax[flat(ix, iy, n)] != pot.ax[flat(0, iy, n)])
        throw DiagnosticsError("evolve_schrodinger: Ax must not depend on x");
      if (pot.ay[flat(ix, iy, n)] != pot.ay[flat(ix, 0, n)])
        throw DiagnosticsError("evolve_schrodinger: Ay must not depend on y");
    }

  Eigen::ArrayXcd half_phase(energy.size());
  for (Eigen::Index i = 0; i < energy.size(); ++i)
    half_phase[i] = std::polar(1.0, -energy[i] * dt / (2.0 * p.hbar));

  Eigen::ArrayXcd a = field.component(0);
  for (int s = 0; s < steps; ++s) {
    a *= half_phase;
    kinetic_rows(a, g, shift_x, dt / 2.0, p);
    kinetic_cols(a, g, shift_y, dt, p);
    kinetic_rows(a, g, shift_x, dt / 2.0, p);
    a *= half_phase;
  }
  WaveField out = field;
  out.component(0) = std::move(a);
  out.set_time(field.time() + t);
  return out;
}

LimitReport compare_limit(const WaveField& dirac, const WaveField& schrod,
                          const PhysicalParams& p) {
  if (dirac.components() != 2 || schrod.components() != 1)
    throw InvalidArgument("compare_limit: expected a spinor and a scalar field");
  if (!(dirac.grid() == schrod.grid())) throw InvalidArgument("compare_limit: grid mismatch");
  if (!dirac.gauge_frame()) throw StateError("compare_limit: Dirac field not in gauge frame");
  const double h = schrod.grid().spacing();
  const double diff = (dirac.component(0) - schrod.component(0)).matrix().norm() * h;
  const double ref = schrod.norm();
  LimitReport r;
  r.relative_distance = ref > 0.0 ? diff / ref : diff;
  const Momentum k = mean_momentum(schrod);
  r.velocity_scale = p.hbar * std::sqrt(k.norm_sq()) / (p.m * p.c);
  r.boundary_density = std::max(boundary_density(dirac), boundary_density(schrod));
  return r;
}

LimitReport run_limit(const LimitSetup& setup, Momentum k0, const PhysicalParams& p) {
  const double mid = setup.grid.length() / 2.0;
  const WaveField initial = build_gaussian(setup.grid, {mid, mid, k0, setup.sigma}, 1, p);
  const WaveField dirac =
      remove_rest_phase(evolve_dirac(embed_upper(initial), setup.time, p), setup.time, p);
  const WaveField schrod = evolve_schrodinger(initial, setup.time, p);
  return compare_limit(dirac, schrod, p);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("log_log_slope: need at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidArgument("log_log_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingStudy scaling_study(const LimitSetup& setup, const std::vector<double>& k0_values,
                           const PhysicalParams& p) {
  std::vector<double> ks = k0_values;
  std::sort(ks.begin(), ks.end());
  ScalingStudy s;
  std::vector<double> v, d;
  for (double k : ks) {
    const LimitReport r = run_limit(setup, {k, 0.0}, p);
    s.runs.push_back({k, r});
    v.push_back(p.hbar * k / (p.m * p.c));
    d.push_back(r.relative_distance);
  }
  s.slope = log_log_slope(v, d);
  for (std::size_t i = 1; i < d.size(); ++i) s.halving_ratios.push_back(d[i] / d[i - 1]);
  return s;
}

}  // namespace so21::nonrel
