#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace compmap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A denominator vanished (|d| < 1e-12) while evaluating a map or expression.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A point was outside the rectangular domain of a map.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter referenced by an expression has no binding.
class UnboundParameterError : public Error {
 public:
  explicit UnboundParameterError(std::string name)
      : Error("unbound parameter '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Syntax error in the map DSL. Carries the byte offset and the tokens that
/// would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Newton (or another iterative solve) failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Newton converged, but to a root excluded by the request (e.g. a fixed
/// point when a minimal period-two point was asked for).
class DegenerateRootError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Example-system parameters violate a required relation.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis needed by an algorithm is not satisfied.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string verdict, const std::string& what)
      : Error(what), verdict_(std::move(verdict)) {}
  const std::string& verdict() const noexcept { return verdict_; }

 private:
  std::string verdict_;
};

}  // namespace compmap
