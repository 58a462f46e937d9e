#pragma once

#include <stdexcept>
#include <string>

namespace ramsey {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input: bad configuration values, malformed files, wrong
// envelope kind for an operation. The CLI maps these to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical-domain failures. The CLI maps these to exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

class StepInvalid : public DomainError {
 public:
  using DomainError::DomainError;
};

class DefectExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoZeroFound : public DomainError {
 public:
  using DomainError::DomainError;
};

class HalfMaxNotBracketed : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace ramsey
