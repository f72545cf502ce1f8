#pragma once

#include <functional>
#include <vector>

#include "saddlekit/domain.hpp"
#include "saddlekit/extended.hpp"

namespace saddlekit {

// Deterministic budgets for all one-dimensional searches and series sums.
struct SearchBudget {
  int grid_points = 257;          // core grid density on intervals
  long integer_scan_limit = 4096; // enumerated integers per unbounded end
  int doubling_steps = 46;        // outward probes per unbounded interval end
  int golden_iters = 40;
  int refine_cells = 3;           // best grid cells refined by golden section
  double series_tol = 1e-10;
  long max_series_terms = 100000;
  int probes = 64;                // safety-classification probe budget

  SearchBudget scaled_grid(int points) const {
    SearchBudget b = *this;
    b.grid_points = points;
    return b;
  }
};

// Objective for the scalar searches. May return any extended value; domain
// errors thrown by the underlying expression are treated as holes unless the
// whole domain is a hole.
using ScalarObjective = std::function<ExtendedPayoff(double)>;

struct SupResult {
  ExtendedPayoff sup = ExtendedPayoff::minus_infinity();
  double arg = 0.0;                 // maximizer when sup is finite
  std::vector<double> near_optimal; // evaluated points within the tie window
  bool exhausted = false;           // scan cap hit while still improving
  long evaluations = 0;
};

// Supremum of f over the domain: exact enumeration on finite/integer sets
// (with growth detection on unbounded integer ranges), grid plus
// golden-section refinement on intervals, and doubling probes with a
// confirmed-growth rule on unbounded interval ends. `extra_points` seeds the
// grid with indicator breakpoints and strategy atoms.
SupResult scalar_sup(const ScalarObjective& f, const DomainDecl& domain,
                     const std::vector<double>& extra_points,
                     const SearchBudget& budget);

// Infimum via the mirrored search.
SupResult scalar_inf(const ScalarObjective& f, const DomainDecl& domain,
                     const std::vector<double>& extra_points,
                     const SearchBudget& budget);

// Golden-section maximization of a real-valued slice on [lo, hi]; returns the
// best (arg, value) pair seen. `f` returning a non-finite sample aborts the
// refinement and the incoming best stands.
std::pair<double, double> golden_section_max(
    const std::function<ExtendedPayoff(double)>& f, double lo, double hi,
    int iters);

}  // namespace saddlekit
