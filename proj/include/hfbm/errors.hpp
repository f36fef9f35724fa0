#pragma once

#include <stdexcept>
#include <string>

namespace hfbm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class RegimeError : public Error {
 public:
  using Error::Error;
};

// Grid does not satisfy the shape an operation requires (uniformity, coverage).
class GridError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace hfbm
