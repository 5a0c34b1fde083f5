#pragma once

#include <stdexcept>
#include <string>

namespace pulsedg {

// Invalid user input: bad configuration, parameters outside a model's domain.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed: singular system, residual too large, non-finite state.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pulsedg
