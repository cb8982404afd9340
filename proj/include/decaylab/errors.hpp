#pragma once

#include <stdexcept>
#include <string>

namespace decaylab {

// Error taxonomy. Everything derives from Error -> std::runtime_error so
// callers can catch coarsely; the CLI maps Error subclasses to exit codes.

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// argument outside the function's declared u-range
struct RangeError : Error {
  using Error::Error;
};

// structurally invalid object (unsorted breakpoints, size mismatch, ...)
struct ShapeError : Error {
  using Error::Error;
};

// a documented precondition was violated by the caller
struct ContractError : Error {
  using Error::Error;
};

// operation not meaningful on this domain (window too wide, wrong dimension)
struct DomainError : Error {
  using Error::Error;
};

// grid and lattice are not commensurate
struct CommensurabilityError : Error {
  using Error::Error;
};

// data reaches the edge of the box that was supposed to contain it
struct CoverageError : Error {
  using Error::Error;
};

// near-singular basis or otherwise ill-conditioned input
struct DegeneracyError : Error {
  using Error::Error;
};

// time step violates the stability bound
struct CflError : Error {
  using Error::Error;
};

// the scheme produced values outside the initial range: should never happen
struct MonotonicityAlarm : Error {
  using Error::Error;
};

// malformed configuration / file input
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace decaylab
