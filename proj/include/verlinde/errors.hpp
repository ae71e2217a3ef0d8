#pragma once

#include <stdexcept>
#include <string>

namespace verlinde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LevelMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// The input does not satisfy the level-k pre-quantization conditions.
class NotAdmissible : public Error {
 public:
  using Error::Error;
};

class GroupTooLarge : public Error {
 public:
  using Error::Error;
};

/// Raised when an exact identity that is a theorem fails to hold numerically
/// or arithmetically. Signals a bug or an inconsistent phase assignment,
/// never bad user input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class NonIntegralCoefficient : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

class NonIntegralValue : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

class InexactDivision : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

}  // namespace verlinde
