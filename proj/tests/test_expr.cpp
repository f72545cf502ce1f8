#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "saddlekit/expr.hpp"

using namespace saddlekit;

TEST_CASE("precedence and basic shapes") {
  Expr e = parse_expression("a^2 - b^2");
  REQUIRE(e->kind == ExprNode::Kind::Binary);
  CHECK(e->bop == BinaryOp::Sub);
  CHECK(e->lhs->bop == BinaryOp::Pow);
  CHECK(e->rhs->bop == BinaryOp::Pow);

  CHECK(evaluate(parse_expression("2-3-4"), Env{}) == doctest::Approx(-5));
  CHECK(evaluate(parse_expression("2^3^2"), Env{}) == doctest::Approx(512));
  CHECK(evaluate(parse_expression("-2^2"), Env{}) == doctest::Approx(-4));
  CHECK(evaluate(parse_expression("a^-1"), Env::ab(2, 0)) == doctest::Approx(0.5));
  CHECK(evaluate(parse_expression("2*3^2"), Env{}) == doctest::Approx(18));
  CHECK(evaluate(parse_expression("min(3, max(1, 2))"), Env{}) == doctest::Approx(2));
}

TEST_CASE("indicator payoff from the running example") {
  Expr e = parse_expression("6^a*4^b*[b<a] - 6^b*4^a*[a<b]");
  REQUIRE(e->kind == ExprNode::Kind::Binary);
  CHECK(e->bop == BinaryOp::Sub);
  CHECK(evaluate(e, Env::ab(2, 1)) == doctest::Approx(144).epsilon(1e-15));
  CHECK(evaluate(e, Env::ab(1, 2)) == doctest::Approx(-144).epsilon(1e-15));
  CHECK(evaluate(e, Env::ab(3, 3)) == 0.0);
}

TEST_CASE("evaluation examples") {
  CHECK(evaluate(parse_expression("a^2-b^2"), Env::ab(3, 2)) == doctest::Approx(5));
  CHECK(evaluate(parse_expression("[a<b]"), Env::ab(1, 1)) == 0.0);
  CHECK(evaluate(parse_expression("[a<=b]"), Env::ab(1, 1)) == 1.0);
  CHECK(evaluate(parse_expression("[a==b]"), Env::ab(1, 1)) == 1.0);
}

TEST_CASE("division by zero parses but signals on evaluation") {
  Expr e = parse_expression("1/(a-a)");
  for (double a : {-3.0, 0.0, 17.5}) {
    CHECK_THROWS_AS(evaluate(e, Env::ab(a, 0)), EvalError);
    try {
      evaluate(e, Env::ab(a, 0));
    } catch (const EvalError& err) {
      CHECK(err.kind == EvalErrorKind::DivisionByZero);
      CHECK(err.is_domain_error());
    }
  }
}

TEST_CASE("domain errors and overflow are signaled, never silent") {
  CHECK_THROWS_AS(evaluate(parse_expression("log(a)"), Env::ab(0, 0)), EvalError);
  CHECK_THROWS_AS(evaluate(parse_expression("log(a)"), Env::ab(-1, 0)), EvalError);
  CHECK_THROWS_AS(evaluate(parse_expression("sqrt(a)"), Env::ab(-1, 0)), EvalError);
  CHECK_THROWS_AS(evaluate(parse_expression("(0-2)^(1/2)"), Env{}), EvalError);

  try {
    evaluate(parse_expression("exp(a)"), Env::ab(1e9, 0));
    FAIL("expected overflow");
  } catch (const EvalError& err) {
    CHECK(err.kind == EvalErrorKind::Overflow);
    CHECK(err.overflow_sign == 1);
  }
  try {
    evaluate(parse_expression("10^400"), Env{});
    FAIL("expected overflow");
  } catch (const EvalError& err) {
    CHECK(err.kind == EvalErrorKind::Overflow);
  }
}

TEST_CASE("unbound variables are reported") {
  Expr e = parse_expression("x + a");
  try {
    evaluate(e, Env::ab(1, 2));
    FAIL("expected unbound variable");
  } catch (const EvalError& err) {
    CHECK(err.kind == EvalErrorKind::UnboundVariable);
  }
}

TEST_CASE("parse errors carry position and expectation") {
  try {
    parse_expression("a + q");
    FAIL("expected parse error");
  } catch (const ParseError& err) {
    CHECK(err.byte_offset == 4);
    CHECK(err.line == 1);
    CHECK(err.column == 5);
    CHECK(err.expected.find("x, a, b") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expression("a +"), ParseError);
  CHECK_THROWS_AS(parse_expression("(a"), ParseError);
  CHECK_THROWS_AS(parse_expression("[a ! b]"), ParseError);
  CHECK_THROWS_AS(parse_expression(""), ParseError);

  try {
    parse_expression("a +\n b *");
    FAIL("expected parse error");
  } catch (const ParseError& err) {
    CHECK(err.line == 2);
    CHECK(err.column == 5);
  }
}

namespace {

Expr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_real_distribution<double> num(0.0, 8.0);
  switch (pick(rng)) {
    case 0:
      return make_number(std::round(num(rng) * 16.0) / 16.0);
    case 1: {
      std::uniform_int_distribution<int> v(0, 2);
      return make_variable(static_cast<Var>(v(rng)));
    }
    case 2:
    case 3: {
      std::uniform_int_distribution<int> op(0, 4);
      return make_binary(static_cast<BinaryOp>(op(rng)), random_tree(rng, depth - 1),
                         random_tree(rng, depth - 1));
    }
    case 4: {
      std::uniform_int_distribution<int> fn(0, 4);
      return make_unary(static_cast<UnaryFn>(fn(rng)), random_tree(rng, depth - 1));
    }
    case 5: {
      std::uniform_int_distribution<int> fn(0, 1);
      return make_fn2(static_cast<BinaryFn>(fn(rng)), random_tree(rng, depth - 1),
                      random_tree(rng, depth - 1));
    }
    default: {
      std::uniform_int_distribution<int> rel(0, 4);
      return make_indicator(static_cast<RelOp>(rel(rng)), random_tree(rng, depth - 1),
                            random_tree(rng, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("pretty-print round-trips to a structurally identical tree") {
  std::mt19937_64 rng(20240817);
  for (int i = 0; i < 500; ++i) {
    Expr tree = random_tree(rng, 4);
    std::string text = to_string(tree);
    Expr back = parse_expression(text);
    if (!structurally_equal(tree, back)) {
      CAPTURE(text);
      CHECK(structurally_equal(tree, back));
      break;
    }
  }
}

TEST_CASE("evaluation is pure: identical inputs give bit-identical outputs") {
  Expr e = parse_expression("exp(a/7) * log(b + 3) - sqrt(abs(a*b)) + [a<b]");
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = std::abs(u(rng));
    double first = evaluate(e, Env::ab(a, b));
    for (int rep = 0; rep < 3; ++rep) {
      double again = evaluate(e, Env::ab(a, b));
      CHECK(std::memcmp(&first, &again, sizeof(double)) == 0);
    }
  }
}

TEST_CASE("indicators always evaluate to exactly 0 or 1") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-9.0, 9.0);
  std::uniform_int_distribution<int> rel(0, 4);
  for (int i = 0; i < 500; ++i) {
    Expr lhs = make_number(std::round(u(rng) * 4) / 4);
    Expr rhs = make_variable(Var::A);
    Expr ind = make_indicator(static_cast<RelOp>(rel(rng)), lhs, rhs);
    double v = evaluate(ind, Env::ab(std::round(u(rng) * 4) / 4, 0));
    CHECK((v == 0.0 || v == 1.0));
  }
}

TEST_CASE("helpers: swap, substitute, mentions, literals") {
  Expr e = parse_expression("x + a^2 - b^3");
  CHECK(mentions(e, Var::X));
  CHECK(mentions(e, Var::A));
  CHECK(mentions(e, Var::B));

  Expr swapped = swap_ab(e);
  CHECK(evaluate(swapped, Env::xab(0, 2, 3)) ==
        doctest::Approx(evaluate(e, Env::xab(0, 3, 2))));

  Expr bound = substitute(e, Var::X, 5.0);
  CHECK(!mentions(bound, Var::X));
  CHECK(evaluate(bound, Env::ab(1, 1)) == doctest::Approx(5.0));

  auto lits = literal_constants(parse_expression("2*a + [b < 3.5]"));
  REQUIRE(lits.size() == 2);
  CHECK(lits[0] == 2.0);
  CHECK(lits[1] == 3.5);
}
