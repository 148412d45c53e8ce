#pragma once

#include <stdexcept>
#include <string>

namespace sumoss {

/// Malformed or inconsistent configuration (strict schema violations included).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A covariance that should be positive definite is not (coincident points at
/// zero jitter, Cholesky breakdown, singular deviation covariance).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Planning was requested past the |V|/2 bound or with no free candidate left.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stored artifact (mission log, state file) failed a consistency check.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sumoss
