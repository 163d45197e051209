#pragma once

#include <stdexcept>
#include <string>

namespace rotor {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The truncated basis |m| <= M is too small for the requested state.
struct TruncationError : Error {
  using Error::Error;
};

/// Grid too coarse to resolve every angular harmonic.
struct AliasingError : Error {
  using Error::Error;
};

/// Generator applied to a state in the other representation.
struct RepresentationError : Error {
  using Error::Error;
};

/// Positivity or leakage threshold crossed during time evolution.
struct NumericalAbort : Error {
  using Error::Error;
};

/// Steady-state search exhausted its time budget.
struct ConvergenceError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rotor
