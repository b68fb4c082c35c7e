#include <doctest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "so21/errors.hpp"
#include "so21/planewave.hpp"

using namespace so21;

namespace {

constexpr cplx I{0.0, 1.0};

std::vector<SpacetimePoint> sample_points(gen::Source& src) {
  std::vector<SpacetimePoint> pts;
  for (int i = 0; i < 4; ++i)
    pts.push_back({src.uniform(-3, 3), src.uniform(-3, 3), src.uniform(-3, 3)});
  return pts;
}

// Dirac operator applied by central finite differences, independent of the
// closed-form derivative factors used by dirac_residual.
double finite_difference_residual(const PlaneWaveSolution& sol, const PhysicalParams& p,
                                  SpacetimePoint at, double h) {
  auto f = [&](double x, double y, double t) { return evaluate(sol, {x, y, t}); };
  auto diff = [&](const Spinor2& a, const Spinor2& b) {
    return (1.0 / (2.0 * h)) * (a + cplx(-1.0) * b);
  };
  const Spinor2 dt = diff(f(at.x, at.y, at.t + h), f(at.x, at.y, at.t - h));
  const Spinor2 dx = diff(f(at.x + h, at.y, at.t), f(at.x - h, at.y, at.t));
  const Spinor2 dy = diff(f(at.x, at.y + h, at.t), f(at.x, at.y - h, at.t));
  const Spinor2 r = (-I / p.c) * (pauli(3) * dt) + pauli(1) * dx + pauli(2) * dy +
                    p.inverse_compton() * f(at.x, at.y, at.t);
  return r.norm();
}

}  // namespace

TEST_CASE("rest frame values") {
  const PhysicalParams p;
  CHECK(dispersion_omega({0, 0}, p) == 1.0);
  CHECK(g1({0, 0}, p) == cplx(0.0));
  const Spinor2 u = normalized_spinor(Branch::Positive, {0, 0}, p);
  CHECK(u.upper == cplx(1.0));
  CHECK(u.lower == cplx(0.0));
  const Spinor2 v = normalized_spinor(Branch::Negative, {0, 0}, p);
  CHECK(v.upper == cplx(0.0));
  CHECK(v.lower == cplx(1.0));
}

TEST_CASE("G1 at unit momentum") {
  // w = sqrt(2), G1 = -i / (sqrt(2) + 1) = -i (sqrt(2) - 1).
  const cplx g = g1({1.0, 0.0}, {});
  CHECK(std::abs(g - cplx(0.0, -(std::sqrt(2.0) - 1.0))) < 1e-15);
  CHECK(std::abs(g.imag() + 0.4142136) < 1e-7);
}

TEST_CASE("plane waves solve the field equations for random momenta and units") {
  gen::Source src(21);
  for (int n = 0; n < 1000; ++n) {
    const PhysicalParams p = src.params();
    const Momentum k = src.momentum(0.0, 10.0, p);
    const double w = dispersion_omega(k, p);
    const double w0 = p.rest_frequency();
    CHECK(std::abs(w * w - p.c * p.c * k.norm_sq() - w0 * w0) <= 1e-13 * w * w);
    CHECK(std::abs(g2(k, p) - std::conj(g1(k, p))) < 1e-14);
    const auto pts = sample_points(src);
    for (const Branch b : {Branch::Positive, Branch::Negative}) {
      const auto sol = make_solution(b, k, p);
      CHECK(dirac_residual(sol, p, pts) < 1e-12 * (1.0 + w / p.c));
      CHECK(klein_gordon_residual(sol, p) < 1e-12 * (1.0 + w * w / (p.c * p.c)));
      CHECK(amplitude_consistency_residual(b, k, p) < 1e-12 * (1.0 + w));
    }
  }
}

TEST_CASE("finite-difference oracle agrees with the closed-form residual") {
  gen::Source src(22);
  const PhysicalParams p;
  for (int n = 0; n < 50; ++n) {
    const Momentum k = src.momentum(0.0, 3.0);
    for (const Branch b : {Branch::Positive, Branch::Negative}) {
      const auto sol = make_solution(b, k, p);
      const SpacetimePoint at{src.uniform(-1, 1), src.uniform(-1, 1), src.uniform(-1, 1)};
      // Central differences are second order; h = 1e-4 leaves ~1e-7.
      CHECK(finite_difference_residual(sol, p, at, 1e-4) < 1e-6);
      // A wrong frequency is caught.
      auto wrong = sol;
      wrong.omega *= 1.01;
      CHECK(finite_difference_residual(wrong, p, at, 1e-4) > 1e-4);
    }
  }
}

TEST_CASE("metric orthonormalization") {
  gen::Source src(23);
  for (int n = 0; n < 1000; ++n) {
    const PhysicalParams p = src.params();
    const Momentum k = src.momentum(0.0, 10.0, p);
    const Spinor2 u = normalized_spinor(Branch::Positive, k, p);
    const Spinor2 v = normalized_spinor(Branch::Negative, k, p);
    CHECK(std::abs(metric_inner(u, u) - 1.0) < 1e-12);
    CHECK(std::abs(metric_inner(v, v) + 1.0) < 1e-12);
    CHECK(std::abs(metric_inner(u, v)) < 1e-12);
    CHECK(std::abs(metric_inner(v, u)) < 1e-12);
    // Normalization divides by sqrt(1 - |G|^2).
    const double g = std::norm(g1(k, p));
    CHECK(std::abs(u.upper - 1.0 / std::sqrt(1.0 - g)) < 1e-12 / (1.0 - g));
  }
}

TEST_CASE("coefficient determinant vanishes exactly on shell") {
  gen::Source src(24);
  const PhysicalParams p;
  for (int n = 0; n < 100; ++n) {
    const Momentum k = src.momentum(0.0, 10.0);
    const double w = dispersion_omega(k, p);
    for (const Branch b : {Branch::Positive, Branch::Negative}) {
      CHECK(std::abs(coefficient_matrix(b, k, w, p).det()) < 1e-12);
      CHECK(std::abs(coefficient_matrix(b, k, 1.01 * w, p).det()) > 1e-3);
      CHECK(std::abs(coefficient_matrix(b, k, 0.99 * w, p).det()) > 1e-3);
    }
  }
}

TEST_CASE("normalization errors") {
  CHECK_THROWS_AS(normalize({1.0, 1.0}, Branch::Positive), DegenerateNormalization);
  CHECK_THROWS_AS(normalize({1.0, I}, Branch::Negative), DegenerateNormalization);
  CHECK_THROWS_AS(normalize({1.0, 0.5}, Branch::Negative), InvalidArgument);
  CHECK_THROWS_AS(normalize({0.5, 1.0}, Branch::Positive), InvalidArgument);
  CHECK_NOTHROW(normalize({1.0, 1.0 - 1e-3}, Branch::Positive));
  CHECK_THROWS_AS(dispersion_omega({1, 0}, {0.0, 1.0, 1.0, 1.0}), InvalidArgument);
}

TEST_CASE("classical energy has opposite signs on the two branches") {
  gen::Source src(25);
  for (int n = 0; n < 50; ++n) {
    const PhysicalParams p = src.params();
    const Momentum k = src.momentum(0.0, 5.0, p);
    const double hw = p.hbar * dispersion_omega(k, p);
    const double box = src.uniform(0.5, 5.0);
    CHECK(classical_energy(make_solution(Branch::Positive, k, p), box, p) ==
          doctest::Approx(hw).epsilon(1e-12));
    CHECK(classical_energy(make_solution(Branch::Negative, k, p), box, p) ==
          doctest::Approx(-hw).epsilon(1e-12));
  }
}

TEST_CASE("evaluate carries the branch phase convention") {
  const PhysicalParams p;
  const Momentum k{0.3, -0.4};
  const auto pos = make_solution(Branch::Positive, k, p);
  const auto neg = make_solution(Branch::Negative, k, p);
  const SpacetimePoint at{1.0, 2.0, 0.5};
  const double phase = 0.3 * 1.0 - 0.4 * 2.0 - pos.omega * 0.5;
  CHECK(std::abs(evaluate(pos, at).upper - std::polar(1.0, phase) * pos.spinor.upper) < 1e-15);
  CHECK(std::abs(evaluate(neg, at).lower - std::polar(1.0, -phase) * neg.spinor.lower) < 1e-15);
}
