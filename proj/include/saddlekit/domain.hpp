#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "saddlekit/errors.hpp"

namespace saddlekit {

enum class PlayerTag { A, B };

// One player's action set on the real line.
struct DomainDecl {
  enum class Kind { RealLine, Interval, IntegerRange, FiniteSet };

  Kind kind = Kind::RealLine;
  // Interval / IntegerRange bounds; +-infinity allowed where stated.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> points;  // FiniteSet only: sorted, duplicate-free

  static DomainDecl reals() { return DomainDecl{}; }

  static DomainDecl interval(double lo, double hi) {
    if (!(lo < hi) && !(lo == hi))
      throw Error("interval requires lo < hi (or a degenerate single point)");
    if (lo > hi) throw Error("interval requires lo < hi");
    DomainDecl d;
    d.kind = Kind::Interval;
    d.lo = lo;
    d.hi = hi;
    return d;
  }

  static DomainDecl integer_range(double lo, double hi) {
    if (std::isfinite(lo) && std::rint(lo) != lo)
      throw Error("integer range lower bound must be an integer");
    if (std::isfinite(hi) && std::rint(hi) != hi)
      throw Error("integer range upper bound must be an integer");
    if (!std::isfinite(lo)) throw Error("integer range needs a finite lower bound");
    if (lo > hi) throw Error("integer range requires lo <= hi");
    DomainDecl d;
    d.kind = Kind::IntegerRange;
    d.lo = lo;
    d.hi = hi;
    return d;
  }

  static DomainDecl finite_set(std::vector<double> values) {
    if (values.empty()) throw Error("finite set must be nonempty");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    DomainDecl d;
    d.kind = Kind::FiniteSet;
    d.points = std::move(values);
    d.lo = d.points.front();
    d.hi = d.points.back();
    return d;
  }

  bool contains(double v) const {
    switch (kind) {
      case Kind::RealLine:
        return std::isfinite(v);
      case Kind::Interval:
        return v >= lo && v <= hi;
      case Kind::IntegerRange:
        return std::rint(v) == v && v >= lo && v <= hi;
      case Kind::FiniteSet:
        return std::binary_search(points.begin(), points.end(), v);
    }
    return false;
  }

  bool bounded_below() const { return kind == Kind::FiniteSet || std::isfinite(lo); }
  bool bounded_above() const { return kind == Kind::FiniteSet || std::isfinite(hi); }
  bool compact() const { return bounded_below() && bounded_above(); }
  bool discrete() const {
    return kind == Kind::IntegerRange || kind == Kind::FiniteSet;
  }

  // Reference point for search anchors and level seeds: the midpoint of
  // the finite part, a lone finite end, or 0 on the whole line.
  double reference_point() const {
    switch (kind) {
      case Kind::RealLine:
        return 0.0;
      case Kind::Interval:
      case Kind::IntegerRange: {
        bool lo_fin = std::isfinite(lo), hi_fin = std::isfinite(hi);
        if (lo_fin && hi_fin) {
          double mid = 0.5 * (lo + hi);
          if (kind == Kind::IntegerRange) mid = std::rint(mid);
          return mid;
        }
        if (lo_fin) return lo;
        if (hi_fin) return hi;
        return 0.0;
      }
      case Kind::FiniteSet:
        return points[points.size() / 2];
    }
    return 0.0;
  }

  std::string describe() const {
    auto bound = [](double v) {
      if (v == std::numeric_limits<double>::infinity()) return std::string("inf");
      if (v == -std::numeric_limits<double>::infinity()) return std::string("-inf");
      return std::to_string(v);
    };
    switch (kind) {
      case Kind::RealLine:
        return "reals";
      case Kind::Interval:
        return "interval(" + bound(lo) + "," + bound(hi) + ")";
      case Kind::IntegerRange:
        return "integers(" + bound(lo) + "," + bound(hi) + ")";
      case Kind::FiniteSet: {
        std::string out = "set(";
        for (std::size_t i = 0; i < points.size(); ++i) {
          if (i) out += ",";
          out += std::to_string(points[i]);
        }
        return out + ")";
      }
    }
    return "?";
  }
};

}  // namespace saddlekit
