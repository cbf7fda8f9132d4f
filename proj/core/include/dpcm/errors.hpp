#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpcm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSquare : public Error {
 public:
  using Error::Error;
};

/// An entry (1-based row/col in the message) that is not a positive finite number.
class NonPositiveEntry : public Error {
 public:
  NonPositiveEntry(std::size_t row, std::size_t col, double value);
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class ReciprocityViolation : public Error {
 public:
  ReciprocityViolation(std::size_t row, std::size_t col, double product);
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class InvalidCase : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(int max_iter);
};

class RootNotBracketed : public Error {
 public:
  using Error::Error;
};

class DegenerateParameters : public Error {
 public:
  using Error::Error;
};

class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class IncompatibleOrder : public Error {
 public:
  using Error::Error;
};

/// Raised when an inefficiency certificate fails to produce a dominating
/// vector. Indicates a bug, never a property of the input.
class ImprovementFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace dpcm
