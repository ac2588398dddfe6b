#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proxkkt {

/// Base class for every recoverable error raised by the solver stack.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The shifted matrix H + K*I is numerically singular.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// The symmetric eigenvalue iteration did not converge (pathological input).
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A function oracle produced a non-finite value or was queried outside
/// its domain. Carries the label of the offending function.
class EvaluationFailure : public Error {
 public:
  EvaluationFailure(std::string label, const std::string& detail)
      : Error("evaluation of '" + label + "' failed: " + detail),
        label_(std::move(label)) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

/// Inconsistent dimensions between a problem and its inputs.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an expression or problem file. `offset` is the 0-based
/// character position within the expression; `line` is set when the error
/// comes from a problem file (0 when not applicable).
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& expected)
      : Error("parse error at offset " + std::to_string(offset) + ": " +
              expected),
        offset_(offset) {}
  ParseError(std::size_t offset, const std::string& expected, int line)
      : Error("parse error at line " + std::to_string(line) + ", offset " +
              std::to_string(offset) + ": " + expected),
        offset_(offset),
        line_(line) {}
  std::size_t offset() const { return offset_; }
  int line() const { return line_; }

 private:
  std::size_t offset_ = 0;
  int line_ = 0;
};

/// A variable reference x<i> with i outside 1..n.
class UnknownVariable : public ParseError {
 public:
  UnknownVariable(std::size_t offset, int index, int dim)
      : ParseError(offset, "variable x" + std::to_string(index) +
                               " exceeds declared dimension " +
                               std::to_string(dim)),
        index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

/// A call to a function name outside the supported set.
class UnknownFunction : public ParseError {
 public:
  UnknownFunction(std::size_t offset, const std::string& name)
      : ParseError(offset, "unknown function '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// File could not be read or written.
class IoFailure : public Error {
 public:
  using Error::Error;
};

/// The inequality multiplier formula divides by [(f''+K I)^{-1} g'] . g',
/// which vanished (constraint gradient numerically zero).
class DegenerateConstraintGradient : public Error {
 public:
  using Error::Error;
};

/// The active-set loop exceeded its pass cap. The loop only removes
/// indices, so this signals an internal inconsistency.
class ActiveSetCycle : public Error {
 public:
  using Error::Error;
};

/// More than half of the diagnostics samples hit a degenerate constraint
/// gradient, so the Lipschitz estimate is meaningless.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// Requested registry entry does not exist.
class UnknownProblem : public Error {
 public:
  using Error::Error;
};

/// Brute-force grid search found no feasible point.
class NoFeasiblePoint : public Error {
 public:
  using Error::Error;
};

}  // namespace proxkkt
