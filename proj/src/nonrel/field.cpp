#include "so21/nonrel/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nonrel/fft.hpp"
#include "so21/errors.hpp"

namespace so21::nonrel {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Signed separation reduced to [-L/2, L/2).
double minimum_image(double d, double length) {
  return d - length * std::floor(d / length + 0.5);
}

void require_components(const WaveField& f, int wanted, const char* what) {
  if (f.components() != wanted)
    throw InvalidArgument(std::string(what) + ": expected a " + std::to_string(wanted) +
                          "-component field");
}

}  // namespace

Grid2D::Grid2D(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 8 || !is_power_of_two(n))
    throw GridError("grid: N must be a power of two >= 8, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length)) throw GridError("grid: L must be positive");
}

double Grid2D::wavenumber(std::size_t i) const {
  const auto n = static_cast<long>(n_);
  long idx = static_cast<long>(i);
  if (idx >= n / 2) idx -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(idx) / length_;
}

double Grid2D::nyquist() const { return std::numbers::pi * static_cast<double>(n_) / length_; }

WaveField::WaveField(Grid2D grid, int components) : grid_(grid) {
  if (components != 1 && components != 2)
    throw InvalidArgument("wave field: components must be 1 or 2");
  data_.assign(static_cast<std::size_t>(components),
               Eigen::ArrayXcd::Zero(static_cast<Eigen::Index>(grid_.size())));
}

double WaveField::norm() const {
  double s = 0.0;
  for (const auto& c : data_) s += c.abs2().sum();
  return std::sqrt(s) * grid_.spacing();
}

cplx inner_product(const WaveField& a, const WaveField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw InvalidArgument("inner product: fields live on different grids or shapes");
  cplx s = 0.0;
  for (int c = 0; c < a.components(); ++c)
    s += (a.component(c).conjugate() * b.component(c)).sum();
  const double h = a.grid().spacing();
  return s * h * h;
}

WaveField build_gaussian(const Grid2D& grid, const GaussianSpec& spec, int components,
                         const PhysicalParams& p) {
  p.validate();
  const double n = static_cast<double>(grid.n());
  if (!(spec.sigma >= 4.0 * grid.length() / n))
    throw GridError("gaussian: sigma below 4 L/N, packet not resolved");
  const double kmax = std::sqrt(spec.k0.norm_sq()) + 4.0 / spec.sigma;
  if (!(kmax < grid.nyquist()))
    throw GridError("gaussian: |k0| + 4/sigma reaches the Nyquist wavenumber");

  WaveField f(grid, components);
  Eigen::ArrayXcd& up = f.component(0);
  const std::size_t N = grid.n();
  const double s4 = 4.0 * spec.sigma * spec.sigma;
  for (std::size_t iy = 0; iy < N; ++iy) {
    const double y = grid.coordinate(iy);
    const double dy = minimum_image(y - spec.center_y, grid.length());
    for (std::size_t ix = 0; ix < N; ++ix) {
      const double x = grid.coordinate(ix);
      const double dx = minimum_image(x - spec.center_x, grid.length());
      const double phase = spec.k0.kx * x + spec.k0.ky * y;
      up[static_cast<Eigen::Index>(iy * N + ix)] =
          std::exp(-(dx * dx + dy * dy) / s4) * std::polar(1.0, phase);
    }
  }
  // The exact box phase e^{i k0 . r} is only periodic for lattice k0; the
  // residual jump sits where the packet has decayed below 1e-8 relative.

  if (components == 2) {
    Eigen::ArrayXcd lo = up;
    fft::forward_2d(up, N);
    for (std::size_t iy = 0; iy < N; ++iy)
      for (std::size_t ix = 0; ix < N; ++ix) {
        const auto i = static_cast<Eigen::Index>(iy * N + ix);
        const Spinor2 u = normalized_spinor(
            Branch::Positive, Momentum{grid.wavenumber(ix), grid.wavenumber(iy)}, p);
        lo[i] = up[i] * u.lower;
        up[i] = up[i] * u.upper;
      }
    fft::inverse_2d(up, N);
    fft::inverse_2d(lo, N);
    f.component(1) = lo;
  }

  const double nrm = f.norm();
  for (int c = 0; c < components; ++c) f.component(c) /= nrm;
  return f;
}

WaveField plane_wave_field(const Grid2D& grid, int nx, int ny, const Spinor2& spinor,
                           int components) {
  WaveField f(grid, components);
  const std::size_t N = grid.n();
  const double kx = 2.0 * std::numbers::pi * nx / grid.length();
  const double ky = 2.0 * std::numbers::pi * ny / grid.length();
  for (std::size_t iy = 0; iy < N; ++iy)
    for (std::size_t ix = 0; ix < N; ++ix) {
      const auto i = static_cast<Eigen::Index>(iy * N + ix);
      const cplx ph = std::polar(1.0, kx * grid.coordinate(ix) + ky * grid.coordinate(iy));
      if (components == 1) {
        f.component(0)[i] = ph;
      } else {
        f.component(0)[i] = spinor.upper * ph;
        f.component(1)[i] = spinor.lower * ph;
      }
    }
  return f;
}

WaveField embed_upper(const WaveField& scalar) {
  require_components(scalar, 1, "embed_upper");
  WaveField f(scalar.grid(), 2);
  f.component(0) = scalar.component(0);
  f.set_time(scalar.time());
  return f;
}

WaveField extract_component(const WaveField& field, int c) {
  if (c < 0 || c >= field.components()) throw InvalidArgument("extract_component: bad index");
  WaveField f(field.grid(), 1);
  f.component(0) = field.component(c);
  f.set_time(field.time());
  f.set_gauge_frame(field.gauge_frame());
  return f;
}

std::vector<Eigen::ArrayXcd> fourier_coefficients(const WaveField& field) {
  std::vector<Eigen::ArrayXcd> out;
  for (int c = 0; c < field.components(); ++c) {
    Eigen::ArrayXcd a = field.component(c);
    fft::forward_2d(a, field.grid().n());
    out.push_back(std::move(a));
  }
  return out;
}

Momentum mean_momentum(const WaveField& field) {
  const auto coeffs = fourier_coefficients(field);
  const Grid2D& g = field.grid();
  const std::size_t N = g.n();
  double w = 0.0, kx = 0.0, ky = 0.0;
  for (const auto& a : coeffs)
    for (std::size_t iy = 0; iy < N; ++iy)
      for (std::size_t ix = 0; ix < N; ++ix) {
        const double d = std::norm(a[static_cast<Eigen::Index>(iy * N + ix)]);
        w += d;
        kx += d * g.wavenumber(ix);
        ky += d * g.wavenumber(iy);
      }
  if (w == 0.0) return {};
  return {kx / w, ky / w};
}

BranchWeights branch_weights(const WaveField& field, const PhysicalParams& p) {
  require_components(field, 2, "branch_weights");
  const auto coeffs = fourier_coefficients(field);
  const Grid2D& g = field.grid();
  const std::size_t N = g.n();
  // u_N and v_N are metric-orthogonal with metric norms +1 and -1, so
  // s = a u_N + b v_N has a = <u_N|s>, b = -<v_N|s>.
  double pos = 0.0, neg = 0.0;
  for (std::size_t iy = 0; iy < N; ++iy)
    for (std::size_t ix = 0; ix < N; ++ix) {
      const auto i = static_cast<Eigen::Index>(iy * N + ix);
      const Spinor2 s{coeffs[0][i], coeffs[1][i]};
      const Momentum k{g.wavenumber(ix), g.wavenumber(iy)};
      pos += std::norm(metric_inner(normalized_spinor(Branch::Positive, k, p), s));
      neg += std::norm(metric_inner(normalized_spinor(Branch::Negative, k, p), s));
    }
  const double total = pos + neg;
  if (total == 0.0) return {};
  return {pos / total, neg / total};
}

double position_variance_x(const WaveField& field) {
  const Grid2D& g = field.grid();
  const std::size_t N = g.n();
  std::vector<double> px(N, 0.0);
  for (int c = 0; c < field.components(); ++c)
    for (std::size_t iy = 0; iy < N; ++iy)
      for (std::size_t ix = 0; ix < N; ++ix)
        px[ix] += std::norm(field.component(c)[static_cast<Eigen::Index>(iy * N + ix)]);
  const auto peak = static_cast<std::size_t>(std::max_element(px.begin(), px.end()) - px.begin());
  const double ref = g.coordinate(peak);
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t ix = 0; ix < N; ++ix) {
    const double d = minimum_image(g.coordinate(ix) - ref, g.length());
    w += px[ix];
    m1 += px[ix] * d;
    m2 += px[ix] * d * d;
  }
  m1 /= w;
  return m2 / w - m1 * m1;
}

double boundary_density(const WaveField& field) {
  const std::size_t N = field.grid().n();
  std::vector<double> dens(field.grid().size(), 0.0);
  for (int c = 0; c < field.components(); ++c)
    for (std::size_t i = 0; i < dens.size(); ++i)
      dens[i] += std::norm(field.component(c)[static_cast<Eigen::Index>(i)]);
  const double peak = *std::max_element(dens.begin(), dens.end());
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    edge = std::max({edge, dens[j], dens[(N - 1) * N + j], dens[j * N], dens[j * N + N - 1]});
  }
  return edge / peak;
}

}  // namespace so21::nonrel
