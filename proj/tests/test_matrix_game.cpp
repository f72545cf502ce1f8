#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "saddlekit/matrix_game.hpp"

using namespace saddlekit;

TEST_CASE("matching pennies") {
  MatrixGame g = MatrixGame::from_rows({{1, -1}, {-1, 1}});
  MatrixSolution sol = solve_lp(g);
  CHECK(sol.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.row_strategy(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.row_strategy(1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.col_strategy(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.col_strategy(1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.gap <= 1e-10);
}

TEST_CASE("2x2 with mixed equalization") {
  // oracle by support enumeration: equalize 3p = 2 - p and 1 + 2q = 3 - 2q...
  MatrixGame g = MatrixGame::from_rows({{3, 1}, {0, 2}});
  CHECK(testing::solve_2x2_oracle(g.payoff) == doctest::Approx(1.5));
  MatrixSolution sol = solve_lp(g);
  CHECK(sol.value == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(sol.row_strategy(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.row_strategy(1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.col_strategy(0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(sol.col_strategy(1) == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("rock paper scissors") {
  MatrixGame g = MatrixGame::from_rows({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}});
  MatrixSolution sol = solve_lp(g);
  CHECK(sol.value == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(sol.row_strategy(i) == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(sol.col_strategy(i) == doctest::Approx(1.0 / 3).epsilon(1e-10));
  }
}

TEST_CASE("support enumeration oracle agrees with the LP on 200 seeded games") {
  std::mt19937_64 rng(123456);
  for (int trial = 0; trial < 200; ++trial) {
    MatrixGame g = testing::random_game(rng, 2, 2);
    double oracle = testing::solve_2x2_oracle(g.payoff);
    MatrixSolution sol = solve_lp(g);
    CHECK(std::abs(sol.value - oracle) <= 1e-9);
  }
}

TEST_CASE("fictitious play: pennies and the 2x2 benchmark") {
  MatrixGame pennies = MatrixGame::from_rows({{1, -1}, {-1, 1}});
  MatrixSolution fp = solve_fictitious_play(pennies, 10000);
  CHECK(std::abs(fp.value - 0.0) <= 0.01);

  MatrixGame bench = MatrixGame::from_rows({{3, 1}, {0, 2}});
  MatrixSolution fp2 = solve_fictitious_play(bench, 100000);
  CHECK(std::abs(fp2.value - 1.5) <= 0.005);
}

TEST_CASE("degenerate one-by-one game is exact") {
  MatrixGame g = MatrixGame::from_rows({{7}});
  MatrixSolution fp = solve_fictitious_play(g, 3);
  CHECK(fp.value == 7.0);
  CHECK(fp.row_strategy(0) == 1.0);
  CHECK(fp.col_strategy(0) == 1.0);
  CHECK(fp.gap == 0.0);
  MatrixSolution lp = solve_lp(g);
  CHECK(lp.value == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("oracle agreement: LP vs fictitious play on 50 seeded 5x5 games") {
  std::mt19937_64 rng(987654321);
  for (int trial = 0; trial < 50; ++trial) {
    MatrixGame g = testing::random_game(rng, 5, 5);
    MatrixSolution lp = solve_lp(g);
    CHECK(lp.gap <= 1e-8);
    MatrixSolution fp = solve_fictitious_play(g, 200000);
    CHECK(std::abs(lp.value - fp.value) <= 1e-2);
  }
}

TEST_CASE("best pure response") {
  MatrixGame pennies = MatrixGame::from_rows({{1, -1}, {-1, 1}});
  Eigen::VectorXd row(2);
  row << 1, 0;
  auto [j, v] = best_pure_response(pennies, row, PlayerTag::B);
  CHECK(j == 0);
  CHECK(v == 1.0);

  MatrixGame bench = MatrixGame::from_rows({{3, 1}, {0, 2}});
  Eigen::VectorXd col(2);
  col << 0.25, 0.75;
  auto [i, w] = best_pure_response(bench, col, PlayerTag::A);
  CHECK(i == 0);  // both rows tie at 1.5; lowest index wins
  CHECK(w == doctest::Approx(1.5));

  Eigen::VectorXd row2(2);
  row2 << 1, 0;
  auto [j2, v2] = best_pure_response(bench, row2, PlayerTag::B);
  CHECK(j2 == 0);
  CHECK(v2 == 3.0);

  Eigen::VectorXd bad(3);
  bad << 1, 0, 0;
  CHECK_THROWS_AS(best_pure_response(bench, bad, PlayerTag::B), DimensionMismatch);
}

TEST_CASE("swap antisymmetry: value(-transpose) = -value") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 40; ++trial) {
    MatrixGame g = testing::random_game(rng, 4, 6);
    MatrixGame swapped;
    swapped.payoff = -g.payoff.transpose();
    double v = solve_lp(g).value;
    double w = solve_lp(swapped).value;
    CHECK(std::abs(w + v) <= 1e-9);
  }
}

TEST_CASE("LP saddle verified through best pure responses") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 40; ++trial) {
    MatrixGame g = testing::random_game(rng, 5, 5);
    MatrixSolution sol = solve_lp(g, 1e-9);
    auto [jb, sharp] = best_pure_response(g, sol.row_strategy, PlayerTag::B);
    auto [ia, flat] = best_pure_response(g, sol.col_strategy, PlayerTag::A);
    CHECK(sharp - flat <= 2e-9);
    CHECK(flat <= sol.value + 1e-9);
    CHECK(sharp >= sol.value - 1e-9);
  }
}

TEST_CASE("shift and scale equivariance") {
  std::mt19937_64 rng(2718281);
  std::uniform_real_distribution<double> alpha_dist(0.25, 4.0);
  std::uniform_real_distribution<double> beta_dist(-5.0, 5.0);
  for (int trial = 0; trial < 25; ++trial) {
    MatrixGame g = testing::random_game(rng, 4, 4);
    double alpha = alpha_dist(rng);
    double beta = beta_dist(rng);
    MatrixGame scaled;
    scaled.payoff = alpha * g.payoff.array() + beta;
    MatrixSolution base = solve_lp(g);
    MatrixSolution trans = solve_lp(scaled);
    CHECK(std::abs(trans.value - (alpha * base.value + beta)) <= 1e-8);
    // the original optimal strategies stay optimal on the transformed game
    CHECK(duality_gap(scaled, base.row_strategy, base.col_strategy) <= 1e-7);
  }
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(MatrixGame::from_rows({}), Error);
  CHECK_THROWS_AS(MatrixGame::from_rows({{1, 2}, {3}}), Error);
  MatrixGame g;
  g.payoff.resize(1, 1);
  g.payoff(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(g.validate(), Error);
}
