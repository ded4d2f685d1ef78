#pragma once

#include <stdexcept>
#include <string>

namespace vpg {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad calibration constants, out-of-range arguments, violated preconditions.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// A state object fails its own invariants (e.g. non-orthonormal rotation).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Campaign configuration problems: parse failures, unknown keys, missing keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A sub-model produced a non-finite force/torque during integration.
class SimulationDivergedError : public Error {
 public:
  explicit SimulationDivergedError(const std::string& submodel)
      : Error("simulation diverged: non-finite value in " + submodel),
        submodel_(submodel) {}

  const std::string& submodel() const { return submodel_; }

 private:
  std::string submodel_;
};

}  // namespace vpg
