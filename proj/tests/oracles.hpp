#pragma once

// Test-only oracles, independent of the library's solver paths.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "saddlekit/matrix_game.hpp"

namespace saddlekit::testing {

// Exact value of a 2x2 zero-sum game by support enumeration: every pure
// saddle first, then the mixed equalization formula.
inline double solve_2x2_oracle(const Eigen::MatrixXd& a) {
  if (a.rows() != 2 || a.cols() != 2) throw std::runtime_error("need 2x2");
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // row player minimizes over rows, column player maximizes over columns
      bool row_ok = a(i, j) <= a(1 - i, j);
      bool col_ok = a(i, j) >= a(i, 1 - j);
      if (row_ok && col_ok) return a(i, j);
    }
  }
  double den = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
  return (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / den;
}

inline saddlekit::MatrixGame random_game(std::mt19937_64& rng, long m, long n,
                                         double lo = -10.0, double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  saddlekit::MatrixGame g;
  g.payoff.resize(m, n);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < n; ++j) g.payoff(i, j) = u(rng);
  return g;
}

// Dense-grid reduction of a continuous payoff on boxes, solved by the LP.
// Used as an independent cross-check of the adaptive solver.
inline double dense_grid_value(const std::function<double(double, double)>& c,
                               double a_lo, double a_hi, double b_lo, double b_hi,
                               int n) {
  saddlekit::MatrixGame g;
  g.payoff.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double a = a_lo + (a_hi - a_lo) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      double b = b_lo + (b_hi - b_lo) * j / (n - 1);
      g.payoff(i, j) = c(a, b);
    }
  }
  return saddlekit::solve_lp(g, 1e-8).value;
}

}  // namespace saddlekit::testing
