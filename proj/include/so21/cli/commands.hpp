#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "so21/report.hpp"

namespace so21::cli {

struct GlobalOptions {
  std::uint64_t seed = 20240611;
  /// Multiplies every numeric tolerance; 1 keeps the defaults.
  double tol_scale = 1.0;
};

struct SpinorOptions {
  double kx = 0.0;
  double ky = 0.0;
  double m = 1.0;
  double c = 1.0;
  double hbar = 1.0;
};

struct FockOptions {
  std::size_t modes = 1;
  double box = 6.283185307179586;
  bool literal_68 = false;
};

struct EvolveOptions {
  std::size_t grid = 128;
  double box = 1280.0;
  double sigma = 100.0;
  double k0x = 0.05;
  double k0y = 0.0;
  double time = 10.0;
  int steps = 100;
  std::optional<std::string> out;
};

struct LandauOptions {
  /// Unset: B such that the magnetic length is box / 10.
  std::optional<double> b;
  std::size_t grid = 64;
  double box = 10.0;
  std::size_t levels = 3;
};

RunReport cmd_algebra(const GlobalOptions& g);
RunReport cmd_spinor(const SpinorOptions& o, const GlobalOptions& g);
/// Throws CapacityError above the mode limit.
RunReport cmd_fock(const FockOptions& o, const GlobalOptions& g);
/// Throws GridError when the packet is not resolved.
RunReport cmd_evolve(const EvolveOptions& o, const GlobalOptions& g);
/// Throws GridError when the magnetic length is not resolved.
RunReport cmd_landau(const LandauOptions& o, const GlobalOptions& g);

/// 0 when every check passed, 1 otherwise.
int exit_code(const RunReport& r);

}  // namespace so21::cli
