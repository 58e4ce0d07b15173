#pragma once

#include <stdexcept>
#include <string>

namespace solvq {

/// Base class for all solvq failures that are conditions of the inputs
/// rather than programming errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Adaptive quadrature ran out of its panel budget before reaching tol.
struct MaxSubdivisions : Error {
  using Error::Error;
};

/// The integrand returned NaN or +-inf.
struct NonFinite : Error {
  using Error::Error;
};

/// Window mass never reached 2 within the bracket limit (S-divergence
/// failure, or q vanishing on a huge set).
struct BracketExhausted : Error {
  using Error::Error;
};

/// A certified truncation bound failed to fall below the tolerance.
struct TailNotDecaying : Error {
  using Error::Error;
};

/// The covering construction could not bracket the next segment center.
struct RootNotBracketed : Error {
  using Error::Error;
};

/// Per-segment bounds grow faster than the geometric damping.
struct Unbounded : Error {
  using Error::Error;
};

/// No canonical q = q1 + q2 split exists and none was supplied.
struct Unsplittable : Error {
  using Error::Error;
};

/// A supplied local-regularity certificate failed its spot check.
struct HypothesisViolated : Error {
  using Error::Error;
};

/// Central differencing error dominates the residual on this grid.
struct GridTooCoarse : Error {
  using Error::Error;
};

/// Malformed configuration file or CLI arguments.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace solvq
