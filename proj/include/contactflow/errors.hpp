#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contactflow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, bad parameters or configuration. Maps to CLI exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Failure during numerical evaluation or integration. Maps to CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(std::size_t position, std::string token, const std::string& what)
      : InputError("syntax error at position " + std::to_string(position) + " near '" + token +
                   "': " + what),
        position_(position),
        token_(std::move(token)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t position_;
  std::string token_;
};

class UnknownIdentifier : public InputError {
 public:
  explicit UnknownIdentifier(std::string name)
      : InputError("unknown identifier '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Division by zero, log of a non-positive number, or a non-real power.
class DomainError : public NumericalError {
 public:
  DomainError(std::string node, const std::string& what)
      : NumericalError(what + " in '" + node + "'"), node_(std::move(node)) {}

  /// Printed form of the offending sub-expression.
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

class SingularChartPoint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MidpointDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvalidStep : public InputError {
 public:
  using InputError::InputError;
};

class IndivisibleFactor : public InputError {
 public:
  using InputError::InputError;
};

class WrongIntegralCount : public InputError {
 public:
  using InputError::InputError;
};

class MissingTangentData : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace contactflow
