#pragma once

#include <stdexcept>
#include <string>

namespace smartflow {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An exponent discontinuity lies strictly inside a mesh element.
class BreakpointMisalignment : public Error {
public:
  using Error::Error;
};

/// An iterative procedure (bisection, inner nonlinear solve) did not converge.
class ConvergenceFailure : public Error {
public:
  using Error::Error;
};

/// The lifted flux function could not be normalized, (Pi_h chi, 1) <= 0.
class NormalizationError : public Error {
public:
  using Error::Error;
};

/// No sign change found while bracketing a scalar root.
class BracketFailure : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace smartflow
