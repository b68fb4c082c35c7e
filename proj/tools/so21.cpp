// Command-line front end. Exit status: 0 all checks passed, 1 a check
// failed, 2 usage or precondition error.

#include <exception>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "so21/cli/commands.hpp"

namespace {

int emit(const so21::RunReport& r, bool json) {
  if (json) {
    std::cout << nlohmann::ordered_json(r).dump(2) << '\n';
    std::cerr << so21::format_table(r);
  } else {
    std::cout << so21::format_table(r);
  }
  return so21::cli::exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar Dirac field verification suites"};
  app.require_subcommand(1);

  bool json = false;
  so21::cli::GlobalOptions global;
  app.add_flag("--json", json, "Emit the report as JSON on stdout, table on stderr");
  app.add_option("--seed", global.seed, "Seed for randomized sweeps");
  app.add_option("--tol-scale", global.tol_scale, "Multiplier applied to every tolerance")
      ->check(CLI::PositiveNumber);

  auto* algebra = app.add_subcommand("algebra", "Pauli, gamma and SO(2,1) identities");

  so21::cli::SpinorOptions spinor;
  auto* sp = app.add_subcommand("spinor", "Plane-wave solution at one momentum");
  sp->add_option("--kx", spinor.kx);
  sp->add_option("--ky", spinor.ky);
  sp->add_option("--m", spinor.m);
  sp->add_option("--c", spinor.c);
  sp->add_option("--hbar", spinor.hbar);

  so21::cli::FockOptions fock;
  auto* fk = app.add_subcommand("fock", "Finite-mode Fock space suites");
  fk->add_option("--modes", fock.modes, "Number of momenta M (dimension 4^M)");
  fk->add_option("--box", fock.box, "Box side L");
  fk->add_flag("--literal-68", fock.literal_68, "Use the printed pair-number ordering");

  so21::cli::EvolveOptions evolve;
  std::string out;
  auto* ev = app.add_subcommand("evolve", "Dirac versus Schrodinger evolution");
  ev->add_option("--grid", evolve.grid, "Points per side N");
  ev->add_option("--box", evolve.box, "Box side L");
  ev->add_option("--sigma", evolve.sigma, "Packet width");
  ev->add_option("--k0x", evolve.k0x);
  ev->add_option("--k0y", evolve.k0y);
  ev->add_option("--time", evolve.time, "Evolution time T");
  ev->add_option("--steps", evolve.steps, "Split steps for the coupled run");
  auto* out_opt = ev->add_option("--out", out, "Directory for field snapshots");

  so21::cli::LandauOptions landau;
  double b = 0.0;
  auto* ld = app.add_subcommand("landau", "Landau levels of the coupled Hamiltonian");
  auto* b_opt = ld->add_option("--B", b, "Field strength (default: magnetic length L/10)");
  ld->add_option("--grid", landau.grid, "Points per side N");
  ld->add_option("--box", landau.box, "Box side L");
  ld->add_option("--levels", landau.levels, "Number of levels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*algebra) return emit(so21::cli::cmd_algebra(global), json);
    if (*sp) return emit(so21::cli::cmd_spinor(spinor, global), json);
    if (*fk) return emit(so21::cli::cmd_fock(fock, global), json);
    if (*ev) {
      if (*out_opt) evolve.out = out;
      return emit(so21::cli::cmd_evolve(evolve, global), json);
    }
    if (*ld) {
      if (*b_opt) landau.b = b;
      return emit(so21::cli::cmd_landau(landau, global), json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
