#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sislab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different discretized spaces (grid, window or weight differ).
class IncompatibleSpaceError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain of a function (e.g. tabulated lookup range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The tail of the weighted fiber series is not summable for this generator and weight.
class UnsoundTruncationError : public Error {
 public:
  UnsoundTruncationError(const std::string& what, double criterion)
      : Error(what), criterion_(criterion) {}
  /// Value of 2d - 2s - n that failed to be positive.
  double criterion() const noexcept { return criterion_; }

 private:
  double criterion_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Every generator fiber vanishes on the whole grid.
class DegenerateSystemError : public Error {
 public:
  using Error::Error;
};

class NotAFrameError : public Error {
 public:
  using Error::Error;
};

class NotRieszError : public Error {
 public:
  using Error::Error;
};

/// A fiber field is not contained in the range function it is applied on.
class DomainViolationError : public Error {
 public:
  DomainViolationError(const std::string& what, double residual, std::size_t grid_index)
      : Error(what), residual_(residual), grid_index_(grid_index) {}
  double residual() const noexcept { return residual_; }
  std::size_t grid_index() const noexcept { return grid_index_; }

 private:
  double residual_;
  std::size_t grid_index_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace sislab
