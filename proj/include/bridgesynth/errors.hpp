#pragma once

#include <stdexcept>
#include <string>

namespace bridgesynth {

/// Invalid user-supplied parameters (bad dimensions, unknown ids, malformed files).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The instance has no solution under the current configuration.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver ran out of time before producing any usable answer.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedGateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant, e.g. a solver model that violates its own encoding.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bridgesynth
