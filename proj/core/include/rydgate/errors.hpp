#pragma once

#include <stdexcept>
#include <string>

namespace rydgate {

// Invalid input: unknown setting, malformed override file, violated invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integration or quadrature failed to reach the requested tolerance, or a
// computed state lost a physical invariant (trace, hermiticity).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rydgate
