#include "saddlekit/matrix_game.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace saddlekit {

MatrixGame MatrixGame::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows[0].empty()) throw Error("matrix must be at least 1x1");
  MatrixGame g;
  g.payoff.resize(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw Error("matrix rows must have equal length");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      g.payoff(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
  }
  g.validate();
  return g;
}

void MatrixGame::validate() const {
  if (payoff.rows() < 1 || payoff.cols() < 1)
    throw Error("matrix must be at least 1x1");
  if (!payoff.allFinite()) throw Error("matrix entries must be finite");
  if (!row_points.empty() && static_cast<long>(row_points.size()) != payoff.rows())
    throw DimensionMismatch("row point labels do not match the row count");
  if (!col_points.empty() && static_cast<long>(col_points.size()) != payoff.cols())
    throw DimensionMismatch("column point labels do not match the column count");
}

namespace {

Eigen::VectorXd normalized_probability(Eigen::VectorXd v) {
  for (long i = 0; i < v.size(); ++i)
    if (v(i) < 0) v(i) = 0;
  double total = v.sum();
  if (total <= 0) throw NumericalFailure("degenerate probability vector", 1.0);
  return v / total;
}

}  // namespace

double duality_gap(const MatrixGame& g, const Eigen::VectorXd& row_strategy,
                   const Eigen::VectorXd& col_strategy) {
  double sharp = (row_strategy.transpose() * g.payoff).maxCoeff();
  double flat = (g.payoff * col_strategy).minCoeff();
  return sharp - flat;
}

MatrixSolution solve_lp(const MatrixGame& g, double tol) {
  g.validate();
  const long m = g.rows();
  const long n = g.cols();

  // shift entries positive so the 1/value reduction is valid
  double shift = 0.0;
  double lowest = g.payoff.minCoeff();
  if (lowest < 1.0) shift = 1.0 - lowest;

  // The row player's guarantee: minimize max_j (p'A')_j over row mixes p.
  // With x = p / v this is  maximize 1'x  st  A''x <= 1, x >= 0  on the
  // transposed shifted matrix, and the slack basis starts feasible.
  const long cols = m + n + 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n + 1, cols);
  t.block(0, 0, n, m) = (g.payoff.array() + shift).matrix().transpose();
  t.block(0, m, n, n) = Eigen::MatrixXd::Identity(n, n);
  t.block(0, cols - 1, n, 1).setOnes();
  t.block(n, 0, 1, m).setOnes();

  std::vector<long> basis(n);
  for (long j = 0; j < n; ++j) basis[j] = m + j;

  const double eps = 1e-12;
  const long pivot_cap = 50 * (m + n) + 1000;
  for (long pivots = 0;; ++pivots) {
    if (pivots > pivot_cap)
      throw NumericalFailure("simplex pivot cap reached", t(n, cols - 1));

    // Bland: entering column is the lowest index with positive reduced cost
    long q = -1;
    for (long j = 0; j < m + n; ++j) {
      if (t(n, j) > eps) {
        q = j;
        break;
      }
    }
    if (q < 0) break;  // optimal

    // ratio test; ties go to the smallest basis variable
    long p = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i) {
      if (t(i, q) > eps) {
        double ratio = t(i, cols - 1) / t(i, q);
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             (p < 0 || basis[i] < basis[p]))) {
          best_ratio = ratio;
          p = i;
        }
      }
    }
    if (p < 0) throw NumericalFailure("simplex detected an unbounded program", 0.0);

    t.row(p) /= t(p, q);
    for (long i = 0; i <= n; ++i) {
      if (i == p) continue;
      double factor = t(i, q);
      if (factor != 0.0) t.row(i) -= factor * t.row(p);
    }
    basis[p] = q;
  }

  double objective = -t(n, cols - 1);
  if (objective <= 0)
    throw NumericalFailure("shifted game produced a non-positive objective", objective);
  double shifted_value = 1.0 / objective;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  for (long i = 0; i < n; ++i)
    if (basis[i] < m) x(basis[i]) = t(i, cols - 1);
  Eigen::VectorXd u(n);
  for (long j = 0; j < n; ++j) u(j) = -t(n, m + j);

  MatrixSolution sol;
  sol.row_strategy = normalized_probability(x * shifted_value);
  sol.col_strategy = normalized_probability(u * shifted_value);
  sol.value = shifted_value - shift;
  sol.gap = duality_gap(g, sol.row_strategy, sol.col_strategy);
  if (!(sol.gap <= tol) || std::isnan(sol.gap)) {
    std::ostringstream msg;
    msg << "simplex residual " << sol.gap << " above tolerance " << tol;
    throw NumericalFailure(msg.str(), sol.gap);
  }
  return sol;
}

MatrixSolution solve_fictitious_play(const MatrixGame& g, long iters) {
  g.validate();
  if (iters < 1) throw Error("fictitious play needs at least one iteration");
  const long m = g.rows();
  const long n = g.cols();

  Eigen::VectorXd row_counts = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd col_counts = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd row_payoff = Eigen::VectorXd::Zero(m);  // sum_t A(:, j_t)
  Eigen::VectorXd col_payoff = Eigen::VectorXd::Zero(n);  // sum_t A(i_t, :)

  double best_upper = std::numeric_limits<double>::infinity();
  double best_lower = -std::numeric_limits<double>::infinity();

  for (long t = 1; t <= iters; ++t) {
    long i_t = 0, j_t = 0;
    if (t > 1) {
      for (long i = 1; i < m; ++i)
        if (row_payoff(i) < row_payoff(i_t)) i_t = i;
      for (long j = 1; j < n; ++j)
        if (col_payoff(j) > col_payoff(j_t)) j_t = j;
    }
    row_counts(i_t) += 1;
    col_counts(j_t) += 1;
    row_payoff += g.payoff.col(j_t);
    col_payoff += g.payoff.row(i_t).transpose();

    best_upper = std::min(best_upper, col_payoff.maxCoeff() / t);
    best_lower = std::max(best_lower, row_payoff.minCoeff() / t);
  }

  MatrixSolution sol;
  sol.row_strategy = row_counts / static_cast<double>(iters);
  sol.col_strategy = col_counts / static_cast<double>(iters);
  sol.value = 0.5 * (best_upper + best_lower);
  sol.gap = duality_gap(g, sol.row_strategy, sol.col_strategy);
  return sol;
}

std::pair<long, double> best_pure_response(const MatrixGame& g,
                                           const Eigen::VectorXd& strategy,
                                           PlayerTag side) {
  g.validate();
  if (side == PlayerTag::B) {
    if (strategy.size() != g.rows())
      throw DimensionMismatch("row strategy length does not match the matrix");
    Eigen::VectorXd induced = g.payoff.transpose() * strategy;
    long arg = 0;
    for (long j = 1; j < induced.size(); ++j)
      if (induced(j) > induced(arg)) arg = j;
    return {arg, induced(arg)};
  }
  if (strategy.size() != g.cols())
    throw DimensionMismatch("column strategy length does not match the matrix");
  Eigen::VectorXd induced = g.payoff * strategy;
  long arg = 0;
  for (long i = 1; i < induced.size(); ++i)
    if (induced(i) < induced(arg)) arg = i;
  return {arg, induced(arg)};
}

}  // namespace saddlekit
