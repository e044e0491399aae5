#pragma once

#include <stdexcept>
#include <string>

namespace dumenu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Survival function vanishes where a hazard rate was requested.
class DegenerateSurvival : public Error {
 public:
  using Error::Error;
};

/// A density that must be positive is not.
class DegenerateDensity : public Error {
 public:
  using Error::Error;
};

/// A marginal retention lies outside [0, 1].
class InvalidSlope : public Error {
 public:
  using Error::Error;
};

/// A menu was built on grids that differ from the scenario's.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A modelling assumption required by an operation does not hold.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

/// Brute-force enumeration would exceed the configured cap.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (menus, reports).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dumenu
