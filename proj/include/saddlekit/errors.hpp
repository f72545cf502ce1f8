#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace saddlekit {

// Base of everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset, int line,
             int column, std::string expected)
      : Error(what),
        byte_offset(byte_offset),
        line(line),
        column(column),
        expected(std::move(expected)) {}

  std::size_t byte_offset;
  int line;    // 1-based
  int column;  // 1-based
  std::string expected;
};

enum class EvalErrorKind {
  DivisionByZero,
  LogNonPositive,
  SqrtNegative,
  PowDomain,
  Overflow,
  UnboundVariable,
};

class EvalError : public Error {
 public:
  EvalError(EvalErrorKind kind, const std::string& what, int overflow_sign = 0)
      : Error(what), kind(kind), overflow_sign(overflow_sign) {}

  bool is_domain_error() const {
    return kind == EvalErrorKind::DivisionByZero ||
           kind == EvalErrorKind::LogNonPositive ||
           kind == EvalErrorKind::SqrtNegative ||
           kind == EvalErrorKind::PowDomain;
  }

  EvalErrorKind kind;
  // For Overflow: +1 / -1 when the sign of the oversized value is known.
  int overflow_sign;
};

class NonNormalized : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double best_residual)
      : Error(what), best_residual(best_residual) {}
  double best_residual;
};

// A bounded search ended before divergence vs. convergence was settled.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, double best_so_far)
      : Error(what), best_so_far(best_so_far) {}
  double best_so_far;
};

class LambdaTooSmall : public Error {
 public:
  using Error::Error;
};

class CoercivityUnavailable : public Error {
 public:
  using Error::Error;
};

class OutOfConstraint : public Error {
 public:
  using Error::Error;
};

class EmptyCluster : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace saddlekit
