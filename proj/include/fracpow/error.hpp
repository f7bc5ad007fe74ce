#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracpow {

// Input outside the mathematical domain of an operation (M = 0, exponent <= -1, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures of an iterative or constructive numerical procedure.
// Carries the best residual reached before giving up.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SolverError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConstructionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RootSearchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// State became NaN/Inf while time stepping.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : NumericalError(what, 0.0), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense oracle asked to handle more unknowns than it is meant for.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracpow
