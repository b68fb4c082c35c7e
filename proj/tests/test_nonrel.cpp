#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "generators.hpp"
#include "so21/errors.hpp"
#include "so21/nonrel/evolution.hpp"
#include "so21/nonrel/field.hpp"
#include "so21/nonrel/landau.hpp"
#include "so21/nonrel/snapshot.hpp"

using namespace so21;
using namespace so21::nonrel;

namespace {

constexpr double kPi = std::numbers::pi;

double distance(const WaveField& a, const WaveField& b) {
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c) s += (a.component(c) - b.component(c)).abs2().sum();
  return std::sqrt(s) * a.grid().spacing();
}

WaveField random_field(const Grid2D& g, int components, gen::Source& src) {
  WaveField f(g, components);
  for (int c = 0; c < components; ++c)
    for (auto& v : f.component(c)) v = src.complex();
  const double n = f.norm();
  for (int c = 0; c < components; ++c) f.component(c) /= n;
  return f;
}

// Single positive-branch mode with kx = kappa m c / hbar: the box is one
// wavelength long so the mode sits on the lattice.
WaveField single_mode(double kappa, const PhysicalParams& p) {
  const double k = kappa * p.inverse_compton();
  const Grid2D g(8, 2.0 * kPi / k);
  return plane_wave_field(g, 1, 0, normalized_spinor(Branch::Positive, {k, 0.0}, p));
}

}  // namespace

TEST_CASE("grid validation and wavenumbers") {
  CHECK_THROWS_AS(Grid2D(12, 1.0), GridError);
  CHECK_THROWS_AS(Grid2D(4, 1.0), GridError);
  CHECK_THROWS_AS(Grid2D(16, 0.0), GridError);
  const Grid2D g(8, 2.0 * kPi);
  CHECK(g.wavenumber(0) == 0.0);
  CHECK(g.wavenumber(3) == doctest::Approx(3.0));
  CHECK(g.wavenumber(4) == doctest::Approx(-4.0));
  CHECK(g.wavenumber(7) == doctest::Approx(-1.0));
  CHECK(g.nyquist() == doctest::Approx(4.0));
}

TEST_CASE("gaussian packets") {
  const PhysicalParams p;
  const Grid2D g(64, 64.0);
  const WaveField s = build_gaussian(g, {32, 32, {0, 0}, 5.0}, 1, p);
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const Momentum m = mean_momentum(s);
  CHECK(std::abs(m.kx) < 1e-12);
  CHECK(std::abs(m.ky) < 1e-12);

  const WaveField moving = build_gaussian(g, {32, 32, {0.5, -0.25}, 5.0}, 1, p);
  CHECK(mean_momentum(moving).kx == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(mean_momentum(moving).ky == doctest::Approx(-0.25).epsilon(1e-6));
  // Spatial variance of |psi|^2 is sigma^2 once the periodic images are negligible.
  const WaveField wide = build_gaussian(Grid2D(128, 128.0), {64, 64, {0, 0}, 5.0}, 1, p);
  CHECK(position_variance_x(wide) == doctest::Approx(25.0).epsilon(1e-10));

  const WaveField spinor = build_gaussian(g, {32, 32, {0.5, 0.0}, 5.0}, 2, p);
  CHECK(spinor.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const BranchWeights w = branch_weights(spinor, p);
  CHECK(w.negative < 1e-12);
  CHECK(w.positive == doctest::Approx(1.0));

  CHECK_THROWS_AS(build_gaussian(g, {32, 32, {0, 0}, 3.9}, 1, p), GridError);
  CHECK_THROWS_AS(build_gaussian(g, {32, 32, {3.0, 0}, 5.0}, 1, p), GridError);
}

TEST_CASE("Dirac evolution of rest-frame spinors") {
  const PhysicalParams p{1.0, 1.0, 1.0, 1.0};
  const Grid2D g(8, 1.0);
  const double t = 0.73;
  const WaveField up = plane_wave_field(g, 0, 0, {1.0, 0.0});
  const WaveField upt = evolve_dirac(up, t, p);
  CHECK(std::abs(upt.component(0)[5] - std::polar(1.0, -t)) < 1e-14);
  CHECK(upt.component(1).abs().maxCoeff() < 1e-15);
  const WaveField lo = plane_wave_field(g, 0, 0, {0.0, 1.0});
  const WaveField lot = evolve_dirac(lo, t, p);
  CHECK(std::abs(lot.component(1)[3] - std::polar(1.0, t)) < 1e-14);

  // Rest frequency m c^2 / hbar in other units.
  const PhysicalParams q{2.0, 1.5, 0.5, 1.0};
  const WaveField qt = evolve_dirac(up, t, q);
  CHECK(std::abs(qt.component(0)[0] - std::polar(1.0, -q.rest_frequency() * t)) < 1e-13);
}

TEST_CASE("Dirac evolution is unitary and a one-parameter group") {
  gen::Source src(31);
  for (int n = 0; n < 10; ++n) {
    const PhysicalParams p = src.params();
    const Grid2D g(16, src.uniform(1.0, 20.0));
    const WaveField f = random_field(g, 2, src);
    const double t1 = src.uniform(-5, 5), t2 = src.uniform(-5, 5);
    const WaveField a = evolve_dirac(evolve_dirac(f, t1, p), t2, p);
    const WaveField b = evolve_dirac(f, t1 + t2, p);
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
    CHECK(distance(a, b) < 1e-12);
    CHECK(distance(evolve_dirac(f, 0.0, p), f) < 1e-14);
  }
}

TEST_CASE("single positive-branch mode acquires exactly e^{-i w t}") {
  gen::Source src(32);
  for (int n = 0; n < 20; ++n) {
    const PhysicalParams p;
    const Grid2D g(16, src.uniform(2.0, 30.0));
    const int nx = src.integer(-7, 7), ny = src.integer(-7, 7);
    const Momentum k{2 * kPi * nx / g.length(), 2 * kPi * ny / g.length()};
    const WaveField f = plane_wave_field(g, nx, ny, normalized_spinor(Branch::Positive, k, p));
    const double t = src.uniform(0.0, 50.0);
    const WaveField ft = evolve_dirac(f, t, p);
    const cplx overlap = inner_product(f, ft) / inner_product(f, f);
    const double want = std::remainder(-dispersion_omega(k, p) * t, 2 * kPi);
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(std::remainder(std::arg(overlap) - want, 2 * kPi)) < 1e-10);
  }
}

TEST_CASE("time second differences satisfy Klein-Gordon at second order") {
  const PhysicalParams p;
  const Grid2D g(16, 10.0);
  const Momentum k{2 * kPi * 2 / 10.0, 2 * kPi * -1 / 10.0};
  WaveField f = plane_wave_field(g, 2, -1, {0.3, cplx(0.2, 0.9)});
  f = evolve_dirac(f, 0.4, p);
  auto residual = [&](double dt) {
    const WaveField plus = evolve_dirac(f, dt, p);
    const WaveField minus = evolve_dirac(f, -dt, p);
    const double kk = k.norm_sq() + p.inverse_compton() * p.inverse_compton();
    double worst = 0.0;
    for (int c = 0; c < 2; ++c) {
      const Eigen::ArrayXcd d2 =
          (plus.component(c) - 2.0 * f.component(c) + minus.component(c)) / (dt * dt);
      worst = std::max(worst, (d2 / (p.c * p.c) + kk * f.component(c)).abs().maxCoeff());
    }
    return worst;
  };
  const double order = std::log2(residual(0.1) / residual(0.05));
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("rest phase removal") {
  const PhysicalParams p;
  const Grid2D g(8, 1.0);
  const WaveField up = plane_wave_field(g, 0, 0, {1.0, 0.0});
  const WaveField same = remove_rest_phase(up, 0.0, p);
  CHECK(same.gauge_frame());
  CHECK(distance(same, up) == 0.0);
  CHECK_THROWS_AS(remove_rest_phase(same, 1.0, p), StateError);

  for (const double t : {0.5, 3.0, 17.0}) {
    const WaveField frame = remove_rest_phase(evolve_dirac(up, t, p), t, p);
    CHECK(distance(frame, up) < 1e-13);
  }
  gen::Source src(33);
  const WaveField r = random_field(g, 2, src);
  CHECK(remove_rest_phase(r, 2.5, p).norm() == doctest::Approx(1.0).epsilon(1e-14));
  // Gauge-frame evolution commutes with the frame change.
  const WaveField a = remove_rest_phase(evolve_dirac(r, 1.7, p), 1.7, p);
  const WaveField b = evolve_dirac(remove_rest_phase(r, 0.0, p), 1.7, p);
  CHECK(distance(a, b) < 1e-13);
}

TEST_CASE("small component closure on single modes") {
  const PhysicalParams p;
  auto deviation = [&](double kappa) {
    WaveField f = remove_rest_phase(single_mode(kappa, p), 0.0, p);
    const WaveField closure = small_component(f, p);
    const cplx ratio = closure.component(0)[0] / f.component(0)[0];
    // Exact lower / upper amplitude: G1 = -i (sqrt(1 + kappa^2) - 1) / kappa.
    const cplx exact{0.0, -(std::sqrt(1.0 + kappa * kappa) - 1.0) / kappa};
    CHECK(std::abs(f.component(1)[0] / f.component(0)[0] - exact) < 1e-14);
    CHECK(std::abs(ratio - cplx(0.0, -kappa / 2.0)) < 1e-14);
    return std::abs(ratio - exact) / std::abs(exact);
  };
  for (const double kappa : {0.1, 0.05, 0.01}) CHECK(deviation(kappa) < kappa * kappa);
  const double ratio = deviation(0.1) / deviation(0.05);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);

  // Gaussian upper component: ||closure|| = hbar sqrt(<k^2>) / (2 m c) with
  // <k^2> = 1 / (2 sigma^2).
  const Grid2D g(128, 128.0);
  const double sigma = 6.0;
  const WaveField gauss = build_gaussian(g, {64, 64, {0, 0}, sigma}, 1, p);
  const WaveField still = remove_rest_phase(embed_upper(gauss), 0, p);
  const double want = 1.0 / (2.0 * std::sqrt(2.0) * sigma);
  CHECK(small_component(still, p).norm() == doctest::Approx(want).epsilon(1e-8));
  CHECK_THROWS_AS(small_component(embed_upper(gauss), p), StateError);
}

TEST_CASE("free Schrodinger packet spreads as the closed form") {
  const PhysicalParams p;
  const Grid2D g(256, 200.0);
  const double sigma = 4.0;
  const WaveField f = build_gaussian(g, {100, 100, {0, 0}, sigma}, 1, p);
  CHECK(distance(evolve_schrodinger(f, 0.0, p), f) < 1e-15);
  for (const double t : {5.0, 20.0, 40.0}) {
    const WaveField ft = evolve_schrodinger(f, t, p);
    const double s = p.hbar * t / (2.0 * p.m * sigma * sigma);
    const double want = sigma * sigma * (1.0 + s * s);
    CHECK(std::abs(position_variance_x(ft) / want - 1.0) < 1e-6);
    CHECK(std::abs(ft.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("constant scalar potential is a global phase") {
  const PhysicalParams p{1.0, 2.0, 1.0, 0.7};
  const Grid2D g(64, 64.0);
  const WaveField f = build_gaussian(g, {32, 32, {0.3, 0.1}, 5.0}, 1, p);
  const double a0 = 0.05, t = 7.0;
  const WaveField free = evolve_schrodinger(f, t, p);
  const WaveField coupled =
      evolve_schrodinger(f, t, p, PotentialConfig::constant_scalar(g, a0, p.e), 10);
  const cplx overlap = inner_product(free, coupled);
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-10);
  CHECK(std::abs(overlap - std::polar(1.0, -p.e * p.c * a0 * t / p.hbar)) < 1e-10);
  // Zero potential reduces to the exact propagator.
  CHECK(distance(evolve_schrodinger(f, t, p, PotentialConfig::zero(g), 3), free) < 1e-12);
}

TEST_CASE("uniform magnetic field returns a packet after one cyclotron period") {
  const PhysicalParams p;
  const Grid2D g(128, 40.0);
  const double b = 1.0;
  const WaveField f = build_gaussian(g, {20, 20, {1.0, 0.0}, 1.5}, 1, p);
  const double period = 2.0 * kPi * p.m / (p.e * b);
  const auto pot = PotentialConfig::uniform_field(g, b, p.e);
  const WaveField half = evolve_schrodinger(f, period / 2.0, p, pot, 200);
  const WaveField full = evolve_schrodinger(f, period, p, pot, 400);
  CHECK(std::abs(full.norm() - 1.0) < 1e-10);
  // Landau spectrum hbar w_c (n + 1/2): every state picks up -1 per period.
  CHECK(std::abs(inner_product(f, full) + 1.0) < 1e-3);
  // Half way round the packet has moved to the far side of its orbit.
  CHECK(std::abs(inner_product(f, half)) < 0.5);
}

TEST_CASE("Strang splitting is second order") {
  const PhysicalParams p;
  const Grid2D g(64, 32.0);
  PotentialConfig pot = PotentialConfig::uniform_field(g, 0.5, p.e);
  for (std::size_t iy = 0; iy < g.n(); ++iy)
    for (std::size_t ix = 0; ix < g.n(); ++ix)
      pot.a0[static_cast<Eigen::Index>(iy * g.n() + ix)] =
          0.4 * std::cos(2 * kPi * g.coordinate(ix) / g.length()) *
          std::cos(2 * kPi * g.coordinate(iy) / g.length());
  const WaveField f = build_gaussian(g, {16, 16, {0.5, 0.2}, 2.0}, 1, p);
  const double t = 2.0;
  const int n = 16;
  const WaveField ref = evolve_schrodinger(f, t, p, pot, 8 * n);
  const double e1 = distance(evolve_schrodinger(f, t, p, pot, n), ref);
  const double e2 = distance(evolve_schrodinger(f, t, p, pot, 2 * n), ref);
  // Against a dt/8 reference the ideal ratio is (1 - 1/64) / (1/4 - 1/64) = 4.2.
  CHECK(e1 / e2 > 3.5);
  CHECK(e1 / e2 < 4.5);
  CHECK(std::abs(evolve_schrodinger(f, t, p, pot, n).norm() - 1.0) < 1e-10);
}

TEST_CASE("coupled evolution preconditions") {
  const PhysicalParams p;
  const Grid2D g(16, 16.0);
  const WaveField f = build_gaussian(g, {8, 8, {0, 0}, 4.0}, 1, p);
  const auto zero = PotentialConfig::zero(g);
  CHECK_THROWS_AS(evolve_schrodinger(f, 1.0, p, zero, 0), DiagnosticsError);
  CHECK_THROWS_AS(evolve_schrodinger(f, 100.0, p, PotentialConfig::constant_scalar(g, 1.0), 10),
                  DiagnosticsError);
  PotentialConfig bad = zero;
  bad.ax[3] = 0.2;
  CHECK_THROWS_AS(evolve_schrodinger(f, 1.0, p, bad, 4), DiagnosticsError);
  PotentialConfig short_pot = zero;
  short_pot.a0.resize(5);
  CHECK_THROWS_AS(short_pot.validate(), InvalidArgument);
  PotentialConfig spiky = zero;
  spiky.a0[40] = 1.0;
  CHECK_FALSE(spiky.diagnostics().empty());
  CHECK_THROWS_AS(evolve_schrodinger(embed_upper(f), 1.0, p), InvalidArgument);
}

TEST_CASE("Dirac upper component approaches Schrodinger as (v/c)^2") {
  const PhysicalParams p;
  const LimitSetup setup;
  const ScalingStudy s = scaling_study(setup, {0.1, 0.025, 0.05}, p);
  REQUIRE(s.runs.size() == 3);
  CHECK(s.runs[0].k0 == 0.025);
  CHECK(s.runs[1].report.relative_distance < 1e-2);
  CHECK(s.runs[1].report.velocity_scale == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(s.slope == doctest::Approx(2.0).epsilon(0.15));
  for (const double r : s.halving_ratios) {
    CHECK(r > 3.0);
    CHECK(r < 5.0);
  }
  for (const auto& run : s.runs) CHECK(run.report.boundary_density < 1e-8);
}

TEST_CASE("compare_limit edge cases") {
  const PhysicalParams p;
  const Grid2D g(16, 10.0);
  const WaveField uniform = plane_wave_field(g, 0, 0, {}, 1);
  const WaveField d =
      remove_rest_phase(evolve_dirac(embed_upper(uniform), 5.0, p), 5.0, p);
  const LimitReport r = compare_limit(d, evolve_schrodinger(uniform, 5.0, p), p);
  CHECK(r.relative_distance < 1e-10);
  CHECK(r.velocity_scale == 0.0);

  CHECK_THROWS_AS(compare_limit(evolve_dirac(embed_upper(uniform), 1.0, p), uniform, p),
                  StateError);
  const WaveField other = plane_wave_field(Grid2D(16, 11.0), 0, 0, {}, 1);
  CHECK_THROWS_AS(compare_limit(d, other, p), InvalidArgument);
  CHECK(log_log_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
}

TEST_CASE("Landau operator against dense diagonalization") {
  const PhysicalParams p;
  const Grid2D g(32, 32.0);
  const double b = quantized_field(1.0 / 16.0, g, p);
  const auto h = landau_operator(b, g, p);
  const Eigen::MatrixXcd dense(h);
  CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();

  const long quanta = std::lround(b * 32.0 * 32.0 / (2 * kPi));
  CHECK(quanta == 10);
  const auto count = static_cast<std::size_t>(3 * quanta);
  const auto fast = lowest_eigenvalues(h, count);
  for (std::size_t i = 0; i < count; ++i)
    CHECK(std::abs(fast[i] - ev[static_cast<Eigen::Index>(i)]) < 1e-10 * ev[0]);

  // Torus levels are flux_quanta-fold degenerate up to lattice splitting.
  std::vector<double> sorted(ev.data(), ev.data() + 4 * quanta);
  const auto levels = cluster_levels(sorted);
  REQUIRE(levels.size() >= 3);
  for (int n = 0; n < 3; ++n) CHECK(levels[static_cast<std::size_t>(n)].degeneracy == 10u);

  CHECK_THROWS_AS(landau_operator(0.05, g, p), InvalidArgument);
}

TEST_CASE("Landau levels and their preconditions") {
  const PhysicalParams p;
  CHECK_THROWS_AS(landau_levels(1.0, Grid2D(16, 10.0), p, 3), GridError);  // l = 1 < 3 dx
  CHECK_THROWS_AS(landau_levels(0.1, Grid2D(64, 10.0), p, 3), GridError);  // l > L/6

  const LandauResult r = landau_levels(1.0, Grid2D(64, 10.0), p, 2);
  CHECK(r.flux_quanta == 16);
  CHECK(r.levels.size() == 2);
  for (std::size_t n = 0; n < 2; ++n)
    CHECK(std::abs(r.levels[n].energy / r.expected[n] - 1.0) < 0.02);
}

TEST_CASE("clustering") {
  const auto lv = cluster_levels({1.0, 1.0000001, 1.0002, 2.0, 2.0, 3.5});
  REQUIRE(lv.size() == 3);
  CHECK(lv[0].degeneracy == 3u);
  CHECK(lv[1].energy == 2.0);
  CHECK(lv[2].degeneracy == 1u);
  CHECK(cluster_levels({}).empty());
}

TEST_CASE("snapshots round-trip") {
  gen::Source src(34);
  const Grid2D g(8, 3.0);
  WaveField f = random_field(g, 2, src);
  f.set_time(1.25);
  f.set_gauge_frame(true);
  const auto dir = std::filesystem::temp_directory_path() / "so21_snapshot_test";
  std::filesystem::create_directories(dir);
  write_raw(f, dir / "field");
  const WaveField back = read_raw(dir / "field");
  CHECK(back.grid() == g);
  CHECK(back.components() == 2);
  CHECK(back.time() == 1.25);
  CHECK(back.gauge_frame());
  CHECK(distance(back, f) == 0.0);
  CHECK(std::filesystem::file_size(dir / "field.bin") == 2 * 64 * 16);

  std::ifstream js(dir / "field.json");
  const auto meta = nlohmann::json::parse(js);
  CHECK(meta.at("N") == 8);
  CHECK(meta.at("components") == 2);

  write_csv(extract_component(f, 0), dir / "scalar.csv");
  std::ifstream csv(dir / "scalar.csv");
  std::string header, line;
  std::getline(csv, header);
  CHECK(header == "x,y,re_psi1,im_psi1,re_psi2,im_psi2");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    if (rows == 1) CHECK(line.substr(line.size() - 4) == ",0,0");
  }
  CHECK(rows == 64);
  std::filesystem::remove_all(dir);
}
