#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "saddlekit/errors.hpp"

namespace saddlekit {

// Payoff/constraint expressions over the variables x, a, b.
//
// Grammar (full EBNF in docs/grammar.md):
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' signed)?          -- right associative
//   signed  := '-' signed | power
//   atom    := number | ident | ident '(' expr (',' expr)* ')'
//            | '(' expr ')' | '[' expr rel expr ']'
//   rel     := '<' | '<=' | '>' | '>=' | '=='
//
// Precedence: ^  >  unary -  >  * /  >  + -.  Indicators evaluate to 0 or 1.

enum class Var { X, A, B };

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class UnaryFn { Neg, Abs, Exp, Log, Sqrt };
enum class BinaryFn { Min, Max };
enum class RelOp { Lt, Le, Gt, Ge, Eq };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Number, Variable, Binary, Unary, Fn2, Indicator };

  Kind kind;
  double number = 0.0;
  Var var = Var::X;
  BinaryOp bop = BinaryOp::Add;
  UnaryFn ufn = UnaryFn::Neg;
  BinaryFn bfn = BinaryFn::Min;
  RelOp rel = RelOp::Lt;
  Expr lhs;  // also the single child of Unary
  Expr rhs;
};

Expr make_number(double v);
Expr make_variable(Var v);
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);
Expr make_unary(UnaryFn fn, Expr child);
Expr make_fn2(BinaryFn fn, Expr lhs, Expr rhs);
Expr make_indicator(RelOp rel, Expr lhs, Expr rhs);

// Variable bindings for evaluation. Unbound lookups raise UnboundVariable.
struct Env {
  std::optional<double> x;
  std::optional<double> a;
  std::optional<double> b;

  static Env ab(double a, double b) { return Env{std::nullopt, a, b}; }
  static Env xab(double x, double a, double b) { return Env{x, a, b}; }
};

// Parses `text`; throws ParseError (with byte offset, 1-based line/column and
// the expected-token set) on malformed input or identifiers other than
// x, a, b and the built-in function names.
Expr parse_expression(const std::string& text);

// Evaluates to a finite double or throws EvalError. Never returns NaN/inf:
// domain violations and out-of-range magnitudes are signaled, not saturated.
double evaluate(const Expr& e, const Env& env);

// Canonical text form; reparses to a structurally identical tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& lhs, const Expr& rhs);

// True if the variable occurs anywhere in the tree.
bool mentions(const Expr& e, Var v);

// Returns a tree with the roles of a and b exchanged (payoff of the swapped
// game reads swap_ab on the original arguments).
Expr swap_ab(const Expr& e);

// Returns a tree with every occurrence of `v` replaced by the literal value.
Expr substitute(const Expr& e, Var v, double value);

// Numeric literals appearing in the tree, in evaluation order. Used by the
// searches to seed grid breakpoints for indicator edges.
std::vector<double> literal_constants(const Expr& e);

}  // namespace saddlekit
