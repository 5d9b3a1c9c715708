#pragma once

#include <stdexcept>
#include <string>

namespace fdte {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or unparseable run configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Parameters or inputs outside a function's stated domain.
struct DomainError : Error {
  using Error::Error;
};

// Grid cannot represent the requested object (too narrow, bad decay).
struct GridError : DomainError {
  using DomainError::DomainError;
};

// Non-convergence, instability, singular evaluation.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace fdte
