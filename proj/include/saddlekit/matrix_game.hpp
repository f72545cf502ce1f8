#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "saddlekit/domain.hpp"
#include "saddlekit/errors.hpp"

namespace saddlekit {

// Finite zero-sum game. Entry (i, j) is the amount Player I (rows,
// minimizer) pays Player II (columns, maximizer).
struct MatrixGame {
  Eigen::MatrixXd payoff;
  std::vector<double> row_points;  // a-values behind the rows (optional)
  std::vector<double> col_points;  // b-values behind the columns (optional)

  static MatrixGame from_rows(const std::vector<std::vector<double>>& rows);

  long rows() const { return payoff.rows(); }
  long cols() const { return payoff.cols(); }
  void validate() const;
};

struct MatrixSolution {
  double value = 0.0;
  Eigen::VectorXd row_strategy;
  Eigen::VectorXd col_strategy;
  double gap = 0.0;  // sharp(row_strategy) - flat(col_strategy), always >= -eps
};

// Dense-tableau simplex on the classic positivity-shifted reduction, Bland's
// entering rule and lowest-basis-index ratio ties; fully deterministic.
// Throws NumericalFailure when the residual cannot be driven below tol.
MatrixSolution solve_lp(const MatrixGame& g, double tol = 1e-9);

// Simultaneous-update fictitious play. Strategies are empirical frequencies;
// value is the midpoint of the best running upper/lower response bounds; gap
// reports the exact duality gap of the averaged strategies.
MatrixSolution solve_fictitious_play(const MatrixGame& g, long iters);

// Best pure reply against a fixed mixed strategy. side names the REPLYING
// player: PlayerTag::B maximizes over columns against a row mix, PlayerTag::A
// minimizes over rows against a column mix. Ties break to the lowest index.
std::pair<long, double> best_pure_response(const MatrixGame& g,
                                           const Eigen::VectorXd& strategy,
                                           PlayerTag side);

// sharp(p) - flat(q) for a candidate strategy pair.
double duality_gap(const MatrixGame& g, const Eigen::VectorXd& row_strategy,
                   const Eigen::VectorXd& col_strategy);

}  // namespace saddlekit
