#pragma once

#include <cmath>
#include <string>

#include "saddlekit/errors.hpp"

namespace saddlekit {

// Value of an expected payoff over the extended reals. Undefined marks the
// (+inf) + (-inf) case and is a first-class outcome: consumers must branch
// on it, never fold it into a number.
struct ExtendedPayoff {
  enum class Tag { Finite, PlusInfinity, MinusInfinity, Undefined };

  Tag tag = Tag::Finite;
  double value = 0.0;

  static ExtendedPayoff finite(double v) { return {Tag::Finite, v}; }
  static ExtendedPayoff plus_infinity() { return {Tag::PlusInfinity, 0.0}; }
  static ExtendedPayoff minus_infinity() { return {Tag::MinusInfinity, 0.0}; }
  static ExtendedPayoff undefined() { return {Tag::Undefined, 0.0}; }

  bool is_finite() const { return tag == Tag::Finite; }
  bool is_plus_infinity() const { return tag == Tag::PlusInfinity; }
  bool is_minus_infinity() const { return tag == Tag::MinusInfinity; }
  bool is_undefined() const { return tag == Tag::Undefined; }

  double finite_value() const {
    if (!is_finite()) throw Error("extended payoff is not finite: " + describe());
    return value;
  }

  ExtendedPayoff negated() const {
    switch (tag) {
      case Tag::Finite: return finite(-value);
      case Tag::PlusInfinity: return minus_infinity();
      case Tag::MinusInfinity: return plus_infinity();
      case Tag::Undefined: return undefined();
    }
    return undefined();
  }

  std::string describe() const {
    switch (tag) {
      case Tag::Finite: return std::to_string(value);
      case Tag::PlusInfinity: return "+inf";
      case Tag::MinusInfinity: return "-inf";
      case Tag::Undefined: return "undefined";
    }
    return "?";
  }
};

// Sum of a (+)-part and a (-)-part, each possibly infinite.
inline ExtendedPayoff combine_halves(const ExtendedPayoff& plus_part,
                                     const ExtendedPayoff& minus_part) {
  bool p_inf = plus_part.is_plus_infinity();
  bool m_inf = minus_part.is_minus_infinity();
  if (p_inf && m_inf) return ExtendedPayoff::undefined();
  if (p_inf) return ExtendedPayoff::plus_infinity();
  if (m_inf) return ExtendedPayoff::minus_infinity();
  return ExtendedPayoff::finite(plus_part.finite_value() + minus_part.finite_value());
}

}  // namespace saddlekit
