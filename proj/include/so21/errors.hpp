#pragma once

#include <stdexcept>
#include <string>

namespace so21 {

// Every error the library raises derives from one of these. The CLI maps
// DegenerateNormalization to a failed check and the rest to a usage error.

/// Out-of-range index, malformed input, mismatched operands.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Indefinite-metric norm too close to zero to normalize.
struct DegenerateNormalization : std::domain_error {
  using std::domain_error::domain_error;
};

/// Requested Fock space exceeds the configured mode limit.
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

/// Grid cannot resolve the requested packet or magnetic length.
struct GridError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Operation applied to a field in the wrong frame.
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Time step or potential outside the range the integrator supports.
struct DiagnosticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace so21
