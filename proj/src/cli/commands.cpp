#include "so21/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "so21/algebra.hpp"
#include "so21/errors.hpp"
#include "so21/fock.hpp"
#include "so21/nonrel/evolution.hpp"
#include "so21/nonrel/landau.hpp"
#include "so21/nonrel/snapshot.hpp"
#include "so21/planewave.hpp"

namespace so21::cli {

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr cplx kI{0.0, 1.0};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ordered_json to_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }
ordered_json to_json(const Spinor2& s) {
  return ordered_json::array({to_json(s.upper), to_json(s.lower)});
}

std::string idx_name(const char* op, int i, int j) {
  return std::string(op) + std::to_string(i) + "," + std::to_string(j);
}

// [K1,K2] = -i K3, [K2,K3] = i K1, [K3,K1] = i K2; reversed order flips the sign.
Matrix2c expected_k_commutator(int i, int j) {
  if (i == j) return Matrix2c::zero();
  const int k = 6 - i - j;
  const bool forward = (i == 1 && j == 2) || (i == 2 && j == 3) || (i == 3 && j == 1);
  const cplx f = k == 3 ? -kI : kI;
  return k_generator(k) * (forward ? f : -f);
}

Matrix2c random_hermitian(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double a = u(rng), d = u(rng);
  const cplx off(u(rng), u(rng));
  return {a, off, std::conj(off), d};
}

}  // namespace

int exit_code(const RunReport& r) { return r.all_passed() ? 0 : 1; }

RunReport cmd_algebra(const GlobalOptions& g) {
  const auto start = Clock::now();
  RunReport r;
  r.command = "algebra";
  r.parameters = {{"seed", g.seed}, {"tol_scale", g.tol_scale}};
  const double tol = 1e-14 * g.tol_scale;

  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      r.add(Check::below(idx_name("[K", i, j) + "]",
                         max_deviation(commutator(k_generator(i), k_generator(j)),
                                       expected_k_commutator(i, j)),
                         tol));
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      r.add(Check::below(idx_name("{sigma", i, j) + "}=2delta",
                         max_deviation(anticommutator(pauli(i), pauli(j)),
                                       Matrix2c::identity() * (i == j ? 2.0 : 0.0)),
                         tol));

  r.add(Check::below("gamma0 = -i sigma3", max_deviation(gamma(0), -kI * pauli(3)), tol));
  r.add(Check::below("gamma1 = sigma1", max_deviation(gamma(1), pauli(1)), tol));
  r.add(Check::below("gamma2 = sigma2", max_deviation(gamma(2), pauli(2)), tol));
  r.add(Check::below("K1 = -i gamma2 / 2", max_deviation(k_generator(1), -0.5 * kI * gamma(2)),
                     tol));
  r.add(Check::below("K2 = i gamma1 / 2", max_deviation(k_generator(2), 0.5 * kI * gamma(1)),
                     tol));
  r.add(Check::below("K3 = i gamma0 / 2", max_deviation(k_generator(3), 0.5 * kI * gamma(0)),
                     tol));
  for (const double c : {1.0, 2.5}) {
    const double mass = 0.7;
    const auto sp = dirac_symbol_pauli(c, mass);
    r.add(Check::below("dirac operator gamma form (c=" + std::to_string(c) + ")",
                       max_deviation(sp, dirac_symbol_gamma(c, mass)), tol));
    r.add(Check::below("dirac operator generator form (c=" + std::to_string(c) + ")",
                       max_deviation(sp, dirac_symbol_generators(c, mass)), tol));
  }

  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  double unitarity = 0.0, group = 0.0, det = 0.0;
  for (int n = 0; n < 200; ++n) {
    const Matrix2c h = random_hermitian(rng);
    const double a = phase(rng), b = phase(rng);
    const Matrix2c ua = matrix_exponential(h, a);
    unitarity = std::max(unitarity, max_deviation(ua * ua.adjoint(), Matrix2c::identity()));
    group = std::max(group, max_deviation(ua * matrix_exponential(h, b),
                                          matrix_exponential(h, a + b)));
    det = std::max(det, std::abs(ua.det() - std::exp(-kI * a * h.trace())));
  }
  // Products of O(1) matrices accumulate a few ulps.
  r.add(Check::below("exp(-i a h) unitary (200 seeded h)", unitarity, 1e-13 * g.tol_scale));
  r.add(Check::below("exp group property (200 seeded h)", group, 1e-13 * g.tol_scale));
  r.add(Check::below("det exp = exp(-i a tr h) (200 seeded h)", det, 1e-13 * g.tol_scale));
  r.wall_seconds = seconds_since(start);
  return r;
}

RunReport cmd_spinor(const SpinorOptions& o, const GlobalOptions& g) {
  const auto start = Clock::now();
  RunReport r;
  r.command = "spinor";
  r.parameters = {{"kx", o.kx}, {"ky", o.ky}, {"m", o.m},
                  {"c", o.c},   {"hbar", o.hbar}, {"tol_scale", g.tol_scale}};
  const PhysicalParams p{o.m, o.c, o.hbar, 1.0};
  p.validate();
  const Momentum k{o.kx, o.ky};
  const double tol = 1e-12 * g.tol_scale;

  const double w = dispersion_omega(k, p);
  const double w0 = p.rest_frequency();
  const cplx G1 = g1(k, p), G2 = g2(k, p);
  r.results["omega"] = w;
  r.results["G1"] = to_json(G1);
  r.results["G2"] = to_json(G2);

  const double scale = w * w;
  r.add(Check::below("dispersion residual",
                     std::abs(w * w - k.norm_sq() * p.c * p.c - w0 * w0) / scale, tol));
  r.add(Check::below("G2 = conj(G1)", std::abs(G2 - std::conj(G1)), 1e-14 * g.tol_scale));
  // |G1|^2 = (w - w0) / (w + w0) follows from the dispersion relation.
  r.add(Check::below("|G1|^2 = (w - w0)/(w + w0)",
                     std::abs(std::norm(G1) - (w - w0) / (w + w0)), tol));

  std::vector<SpacetimePoint> samples;
  for (int i = 0; i < 5; ++i) samples.push_back({0.37 * i, -0.21 * i, 0.13 * i});

  for (const Branch b : {Branch::Positive, Branch::Negative}) {
    const char* tag = b == Branch::Positive ? "u" : "v";
    try {
      const PlaneWaveSolution sol = make_solution(b, k, p);
      r.results[std::string(tag) + "_N"] = to_json(sol.spinor);
      r.add(Check::below(std::string("dirac residual ") + tag, dirac_residual(sol, p, samples),
                         tol));
      r.add(Check::below(std::string("klein-gordon residual ") + tag,
                         klein_gordon_residual(sol, p) / (w0 * w0 / (p.c * p.c)), tol));
      r.add(Check::below(std::string("amplitude consistency ") + tag,
                         amplitude_consistency_residual(b, k, p) / w, tol));
      r.add(Check::below(std::string("det coefficient matrix ") + tag,
                         std::abs(coefficient_matrix(b, k, w, p).det()) / (scale * p.c * p.c),
                         tol));
    } catch (const DegenerateNormalization& e) {
      r.add(Check::holds(std::string("normalization ") + tag + ": " + e.what(), false));
    }
  }

  try {
    const Spinor2 u = normalized_spinor(Branch::Positive, k, p);
    const Spinor2 v = normalized_spinor(Branch::Negative, k, p);
    const cplx uu = metric_inner(u, u), vv = metric_inner(v, v);
    const cplx uv = metric_inner(u, v), vu = metric_inner(v, u);
    r.results["metric"] = {{"uu", to_json(uu)}, {"vv", to_json(vv)},
                           {"uv", to_json(uv)}, {"vu", to_json(vu)}};
    r.add(Check::below("u.sigma0.u = 1", std::abs(uu - 1.0), tol));
    r.add(Check::below("v.sigma0.v = -1", std::abs(vv + 1.0), tol));
    r.add(Check::below("u.sigma0.v = 0", std::abs(uv), tol));
    r.add(Check::below("v.sigma0.u = 0", std::abs(vu), tol));
    const PlaneWaveSolution pos = make_solution(Branch::Positive, k, p);
    const PlaneWaveSolution neg = make_solution(Branch::Negative, k, p);
    const double hw = p.hbar * w;
    r.add(Check::near("classical energy u = +hbar w", classical_energy(pos, 1.0, p), hw,
                      tol * hw));
    r.add(Check::near("classical energy v = -hbar w", classical_energy(neg, 1.0, p), -hw,
                      tol * hw));
  } catch (const DegenerateNormalization& e) {
    r.add(Check::holds(std::string("normalization: ") + e.what(), false));
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

RunReport cmd_fock(const FockOptions& o, const GlobalOptions& g) {
  const auto start = Clock::now();
  RunReport r;
  r.command = "fock";
  r.parameters = {{"modes", o.modes},
                  {"box", o.box},
                  {"literal_68", o.literal_68},
                  {"tol_scale", g.tol_scale}};
  if (o.modes == 0) throw InvalidArgument("fock: need at least one mode");
  if (o.modes > kMaxModes)
    throw CapacityError("fock: " + std::to_string(o.modes) + " modes exceed the limit of " +
                        std::to_string(kMaxModes));
  const PhysicalParams p;
  const FockSpace space(ModeSet::symmetric(o.modes, o.box), p);
  const std::size_t dim = space.dimension();
  const double exact = 1e-14 * g.tol_scale;
  const double tol = 1e-12 * g.tol_scale;

  ordered_json momenta = ordered_json::array();
  for (const auto& k : space.modes().momenta) momenta.push_back({k.kx, k.ky});
  r.results["momenta"] = momenta;
  r.results["dimension"] = dim;

  for (const auto& c : verify_ccr(space, exact)) r.add(c.as_check());

  const FockOperator h = hamiltonian(space);
  const FockOperator hn = normal_ordered_hamiltonian(space);
  double zero_point = 0.0;
  for (std::size_t i = 0; i < space.mode_count(); ++i) zero_point += p.hbar * space.omega(i);
  r.add(Check::below("H - H' = -sum hbar w",
                     max_deviation(h, hn - space.identity() * zero_point), tol)
            .with_dimension(dim));

  const auto spec = eigenvalues(hn);
  auto occ = occupation_energies(space);
  std::sort(occ.begin(), occ.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) worst = std::max(worst, std::abs(spec[i] - occ[i]));
  r.add(Check::near("min eigenvalue of H'", spec.front(), 0.0, tol).with_dimension(dim));
  r.add(Check::below("H' spectrum = occupation sums", worst, tol).with_dimension(dim));
  r.add(Check::near("vacuum energy of H", h.expectation(space.vacuum()).real(), -zero_point, tol));
  if (o.modes == 1) {
    const double hw = p.hbar * space.omega(0);
    const double want[] = {0.0, hw, hw, 2.0 * hw};
    double dev = 0.0;
    for (int i = 0; i < 4; ++i) dev = std::max(dev, std::abs(spec[static_cast<std::size_t>(i)] - want[i]));
    r.add(Check::below("M=1 spectrum {0,1,1,2} hbar w", dev, tol));
    r.results["spectrum"] = spec;
  }

  const FockOperator q = charge_operator(space);
  const auto pm = momentum_operators(space);
  r.add(Check::below("[H', Q] = 0", commutator(hn, q).max_abs(), tol).with_dimension(dim));
  r.add(Check::below("[H', Px] = 0", commutator(hn, pm[0]).max_abs(), tol).with_dimension(dim));
  r.add(Check::below("[H', Py] = 0", commutator(hn, pm[1]).max_abs(), tol).with_dimension(dim));

  r.add(Check::below("box integral of field energy = H",
                     max_deviation(field_hamiltonian(space), h), tol)
            .with_dimension(dim));

  const double pts[][4] = {{0.3, -0.2, 1.1, 0.4}, {0.5, 0.5, 0.5, 0.5}};
  for (const auto& pt : pts) {
    const auto fa = field_anticommutator(space, pt[0], pt[1], pt[2], pt[3], 0.7);
    const Matrix2c want = field_kernel_mode_sum(space, pt[0], pt[1], pt[2], pt[3]);
    const std::string at = "(" + std::to_string(pt[0]) + "," + std::to_string(pt[1]) + ")-(" +
                           std::to_string(pt[2]) + "," + std::to_string(pt[3]) + ")";
    r.add(Check::below("{Psi, Psi+ sigma0} kernel " + at, max_deviation(fa.kernel, want), tol));
    r.add(Check::below("{Psi, Psi+ sigma0} proportional to I " + at, fa.identity_deviation, tol));
    r.add(Check::below("{Psi, Psi} = 0 " + at, fa.same_field_deviation, tol));
  }

  // Pair sector.
  const FockState vac = space.vacuum();
  const PairOrdering ordering = o.literal_68 ? PairOrdering::Literal : PairOrdering::Counting;
  std::vector<std::size_t> paired;
  for (std::size_t k = 0; k < space.mode_count(); ++k)
    if (space.modes().find(-space.modes().momenta[k])) paired.push_back(k);

  double herm = 0.0, lit_anti = 0.0, single = 0.0, square = 0.0;
  for (const std::size_t k : paired) {
    const FockOperator ohat = pair_operator(space, k);
    const FockOperator lit = pair_operator_literal(space, k);
    const FockOperator create = space.creation(Species::Electron, k) *
                                space.creation(Species::Positron, space.partner(k));
    herm = std::max(herm, max_deviation(ohat, ohat.adjoint()));
    lit_anti = std::max(lit_anti, (lit + lit.adjoint()).max_abs());
    single = std::max(single, (ohat.apply(vac) - create.apply(vac)).cwiseAbs().maxCoeff());
    square = std::max(square, (ohat.apply(ohat.apply(vac)) - vac).cwiseAbs().maxCoeff());
  }
  r.add(Check::below("pair operator Hermitian", herm, exact));
  r.add(Check::below("printed pair ordering anti-Hermitian", lit_anti, exact));
  r.add(Check::below("O|vac> = b+ d+ |vac>", single, exact));
  r.add(Check::below("O^2 |vac> = |vac>", square, exact));

  double ident = 0.0, delta = 0.0, off = 0.0;
  ordered_json vac_matrix = ordered_json::array();
  for (const std::size_t k : paired) {
    ordered_json row = ordered_json::array();
    for (const std::size_t kp : paired) {
      const auto rep = pair_commutator_check(space, k, kp);
      ident = std::max(ident, rep.exact_identity_deviation);
      off = std::max(off, rep.off_diagonal_max);
      delta = std::max(delta, std::abs(rep.vacuum_expectation - (k == kp ? 1.0 : 0.0)));
      row.push_back(rep.vacuum_expectation.real());
    }
    vac_matrix.push_back(row);
  }
  r.results["vacuum_pair_commutator"] = vac_matrix;
  r.add(Check::below("[P, P+] = I - n_b - n_d", ident, exact).with_dimension(dim));
  r.add(Check::below("<vac|[P(k), P+(k')]|vac> = delta", delta, exact));
  r.add(Check::below("[P(k), P+(k')] = 0 for k != k'", off, exact).with_dimension(dim));

  const FockOperator npair = total_pair_number(space, ordering);
  r.add(Check::below("[H', N_pair] = 0", commutator(hn, npair).max_abs(), tol)
            .with_dimension(dim));
  const std::size_t k0 = paired.front();
  const FockState one = pair_annihilation(space, k0).adjoint().apply(vac);
  r.add(Check::near("N_pair on one pair", npair.expectation(one).real(), 1.0, exact));
  if (paired.size() >= 2) {
    const std::size_t k1 = paired[1];
    const FockState two = pair_annihilation(space, k1).adjoint().apply(one);
    const double nrm = two.norm();
    r.add(Check::near("two-pair state norm (no exclusion)", nrm, 1.0, exact));
    r.add(Check::near("N_pair on two pairs", npair.expectation(two).real(), 2.0, exact));
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

RunReport cmd_evolve(const EvolveOptions& o, const GlobalOptions& g) {
  using namespace nonrel;
  const auto start = Clock::now();
  RunReport r;
  r.command = "evolve";
  r.parameters = {{"grid", o.grid},   {"box", o.box},     {"sigma", o.sigma},
                  {"k0x", o.k0x},     {"k0y", o.k0y},     {"time", o.time},
                  {"steps", o.steps}, {"out", o.out ? *o.out : ""},
                  {"tol_scale", g.tol_scale}};
  const PhysicalParams p;
  const Grid2D grid(o.grid, o.box);
  const double mid = o.box / 2.0;
  const Momentum k0{o.k0x, o.k0y};
  const LimitSetup setup{grid, o.sigma, o.time};

  const WaveField initial = build_gaussian(grid, {mid, mid, k0, o.sigma}, 1, p);
  const WaveField dirac0 = embed_upper(initial);
  const WaveField dirac = remove_rest_phase(evolve_dirac(dirac0, o.time, p), o.time, p);
  const WaveField schrod = evolve_schrodinger(initial, o.time, p);
  const LimitReport lim = compare_limit(dirac, schrod, p);
  r.results["velocity_scale"] = lim.velocity_scale;
  r.results["relative_distance"] = lim.relative_distance;

  const bool trivial = o.time == 0.0;
  r.add(Check::below("Dirac upper vs Schrodinger distance", lim.relative_distance,
                     (trivial ? 1e-12 : 1e-2) * g.tol_scale));
  r.add(Check::below("boundary density", lim.boundary_density, 1e-8 * g.tol_scale));
  r.add(Check::near("Dirac norm conserved", dirac.norm(), 1.0, 1e-12 * g.tol_scale));
  r.add(Check::near("Schrodinger norm conserved", schrod.norm(), 1.0, 1e-12 * g.tol_scale));

  // Pure positive-branch packet: exact mode content, closure of the lower component.
  const WaveField pure0 = build_gaussian(grid, {mid, mid, k0, o.sigma}, 2, p);
  r.add(Check::below("negative-branch weight of u_N packet", branch_weights(pure0, p).negative,
                     1e-12 * g.tol_scale));
  const WaveField pure = remove_rest_phase(evolve_dirac(pure0, o.time, p), o.time, p);
  const WaveField closure = small_component(pure, p);
  const double lower_norm = extract_component(pure, 1).norm();
  const double closure_err =
      (closure.component(0) - pure.component(1)).matrix().norm() * grid.spacing() / lower_norm;
  const double kmax = std::sqrt(k0.norm_sq()) + 4.0 / o.sigma;
  const double vmax = p.hbar * kmax / (p.m * p.c);
  r.results["closure_relative_error"] = closure_err;
  r.add(Check::below("small-component closure error < (v/c)^2", closure_err,
                     vmax * vmax * g.tol_scale));

  // Constant scalar potential only adds a global phase.
  const double a0 = 0.01;
  const WaveField coupled = evolve_schrodinger(initial, o.time, p,
                                               PotentialConfig::constant_scalar(grid, a0, p.e),
                                               std::max(o.steps, 1));
  const cplx overlap = inner_product(schrod, coupled);
  const cplx phase = std::polar(1.0, -p.e * p.c * a0 * o.time / p.hbar);
  r.add(Check::near("|<free|A0>| = 1", std::abs(overlap), 1.0, 1e-10 * g.tol_scale));
  r.add(Check::below("<free|A0> phase = e^{-i e c A0 t / hbar}", std::abs(overlap - phase),
                     1e-10 * g.tol_scale));

  const double k0n = std::sqrt(k0.norm_sq());
  if (trivial || k0n == 0.0) {
    r.results["scaling_study"] = "skipped (time or k0 is zero)";
  } else {
    const ScalingStudy s = scaling_study(setup, {k0n / 2.0, k0n, 2.0 * k0n}, p);
    ordered_json runs = ordered_json::array();
    for (const auto& run : s.runs)
      runs.push_back({{"k0", run.k0}, {"relative_distance", run.report.relative_distance}});
    r.results["scaling_study"] = runs;
    r.add(Check::within("log-log slope of distance vs v/c", s.slope, 2.0 - 0.3 * g.tol_scale,
                        2.0 + 0.3 * g.tol_scale));
    for (std::size_t i = 0; i < s.halving_ratios.size(); ++i)
      r.add(Check::within("distance ratio k0 " + std::to_string(s.runs[i + 1].k0) + " / " +
                              std::to_string(s.runs[i].k0),
                          s.halving_ratios[i], 3.0, 5.0));
  }

  if (o.out) {
    const std::filesystem::path dir(*o.out);
    std::filesystem::create_directories(dir);
    write_csv(dirac0, dir / "dirac_initial.csv");
    write_csv(dirac, dir / "dirac_final.csv");
    write_csv(schrod, dir / "schrodinger_final.csv");
    write_raw(dirac, dir / "dirac_final");
    write_raw(schrod, dir / "schrodinger_final");
    r.results["snapshots"] = dir.string();
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

RunReport cmd_landau(const LandauOptions& o, const GlobalOptions& g) {
  using namespace nonrel;
  const auto start = Clock::now();
  const PhysicalParams p;
  const Grid2D grid(o.grid, o.box);
  const double ell = o.box / 10.0;
  const double b = o.b ? *o.b : p.hbar / (p.e * ell * ell);
  RunReport r;
  r.command = "landau";
  r.parameters = {{"B", b},
                  {"grid", o.grid},
                  {"box", o.box},
                  {"levels", o.levels},
                  {"tol_scale", g.tol_scale}};
  const double rel = 0.02 * g.tol_scale;

  const LandauResult res = landau_levels(b, grid, p, o.levels);
  ordered_json lv = ordered_json::array();
  for (const auto& l : res.levels) lv.push_back({{"energy", l.energy}, {"degeneracy", l.degeneracy}});
  r.results["field_used"] = res.field_used;
  r.results["flux_quanta"] = res.flux_quanta;
  r.results["magnetic_length"] = res.magnetic_length;
  r.results["levels"] = lv;
  r.results["expected"] = res.expected;

  r.add(Check::holds("found " + std::to_string(o.levels) + " levels", res.levels.size() == o.levels));
  for (std::size_t n = 0; n < res.levels.size(); ++n) {
    r.add(Check::near("E" + std::to_string(n) + " / (hbar wc (n+1/2))",
                      res.levels[n].energy / res.expected[n], 1.0, rel));
    r.add(Check::near("degeneracy of level " + std::to_string(n) + " = flux quanta",
                      static_cast<double>(res.levels[n].degeneracy),
                      static_cast<double>(res.flux_quanta), 0.0));
  }
  double spacing = 0.0;
  for (std::size_t n = 1; n < res.levels.size(); ++n) {
    const double s = res.levels[n].energy - res.levels[n - 1].energy;
    if (n == 1) spacing = s;
    r.add(Check::near("spacing " + std::to_string(n) + " / (hbar e B / m)",
                      s / res.cyclotron_energy, 1.0, rel));
  }

  if (res.levels.size() >= 2) {
    try {
      const LandauResult dbl = landau_levels(2.0 * res.field_used, grid, p, 2);
      const double s2 = dbl.levels.at(1).energy - dbl.levels.at(0).energy;
      r.results["doubled_field_spacing"] = s2;
      r.add(Check::near("spacing(2B) / spacing(B)", s2 / spacing, 2.0, 2.0 * 2.0 * rel));
    } catch (const GridError& e) {
      r.results["doubled_field"] = std::string("skipped: ") + e.what();
    }
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

}  // namespace so21::cli
