#pragma once

#include <stdexcept>
#include <string>

namespace kinkcheck {

/// Syntax or semantic error while reading a problem file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

/// Expression hit a singularity (division by zero, log of a nonpositive
/// argument, zero raised to a negative power).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point handed to an analysis routine violates feasibility beyond the
/// active tolerance. Verdicts at infeasible points are errors, not "false".
class InfeasiblePointError : public std::runtime_error {
 public:
  InfeasiblePointError(std::string msg, double residual)
      : std::runtime_error(std::move(msg)), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

/// Numeric machinery failed (simplex iteration guard, non-finite input, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinkcheck
