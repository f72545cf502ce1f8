#include "saddlekit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace saddlekit {

Expr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Number;
  n->number = v;
  return n;
}

Expr make_variable(Var v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Variable;
  n->var = v;
  return n;
}

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->bop = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Expr make_unary(UnaryFn fn, Expr child) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Unary;
  n->ufn = fn;
  n->lhs = std::move(child);
  return n;
}

Expr make_fn2(BinaryFn fn, Expr lhs, Expr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Fn2;
  n->bfn = fn;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Expr make_indicator(RelOp rel, Expr lhs, Expr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Indicator;
  n->rel = rel;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

namespace {

enum class Tok {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  End,
};

struct Token {
  Tok kind;
  double number = 0.0;
  std::string text;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail(pos_, "number");
      pos_ += static_cast<std::size_t>(end - begin);
      t.kind = Tok::Number;
      t.number = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      t.kind = Tok::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    ++pos_;
    switch (c) {
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '^': t.kind = Tok::Caret; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '<':
        if (pos_ < src_.size() && src_[pos_] == '=') { ++pos_; t.kind = Tok::Le; }
        else t.kind = Tok::Lt;
        return t;
      case '>':
        if (pos_ < src_.size() && src_[pos_] == '=') { ++pos_; t.kind = Tok::Ge; }
        else t.kind = Tok::Gt;
        return t;
      case '=':
        if (pos_ < src_.size() && src_[pos_] == '=') { ++pos_; t.kind = Tok::Eq; return t; }
        fail(t.offset, "'=='");
      default: break;
    }
    fail(t.offset, "expression token");
  }

  [[noreturn]] void fail(std::size_t offset, const std::string& expected) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') { ++line; col = 1; } else ++col;
    }
    std::ostringstream msg;
    msg << "syntax error at " << line << ":" << col << " (byte " << offset
        << "): expected " << expected;
    throw ParseError(msg.str(), offset, line, col, expected);
  }

  const std::string& source() const { return src_; }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lexer_(src) { advance(); }

  Expr parse() {
    Expr e = parse_expr();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  void expect(Tok kind, const std::string& what) {
    if (current_.kind != kind) lexer_.fail(current_.offset, what);
    advance();
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (current_.kind == Tok::Plus || current_.kind == Tok::Minus) {
      BinaryOp op = current_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      lhs = make_binary(op, lhs, parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    while (current_.kind == Tok::Star || current_.kind == Tok::Slash) {
      BinaryOp op = current_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      lhs = make_binary(op, lhs, parse_factor());
    }
    return lhs;
  }

  Expr parse_factor() {
    if (current_.kind == Tok::Minus) {
      advance();
      return make_unary(UnaryFn::Neg, parse_factor());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (current_.kind == Tok::Caret) {
      advance();
      return make_binary(BinaryOp::Pow, base, parse_signed_power());
    }
    return base;
  }

  // Right operand of '^': allows a leading minus so a^-2 reads as a^(-2),
  // and chains right-associatively (2^3^2 == 2^(3^2)).
  Expr parse_signed_power() {
    if (current_.kind == Tok::Minus) {
      advance();
      return make_unary(UnaryFn::Neg, parse_signed_power());
    }
    return parse_power();
  }

  Expr parse_atom() {
    switch (current_.kind) {
      case Tok::Number: {
        double v = current_.number;
        advance();
        return make_number(v);
      }
      case Tok::Ident: {
        std::string name = current_.text;
        std::size_t off = current_.offset;
        advance();
        if (name == "x") return make_variable(Var::X);
        if (name == "a") return make_variable(Var::A);
        if (name == "b") return make_variable(Var::B);
        if (name == "abs" || name == "exp" || name == "log" || name == "sqrt") {
          expect(Tok::LParen, "'('");
          Expr arg = parse_expr();
          expect(Tok::RParen, "')'");
          UnaryFn fn = name == "abs"   ? UnaryFn::Abs
                       : name == "exp" ? UnaryFn::Exp
                       : name == "log" ? UnaryFn::Log
                                       : UnaryFn::Sqrt;
          return make_unary(fn, arg);
        }
        if (name == "min" || name == "max") {
          expect(Tok::LParen, "'('");
          Expr first = parse_expr();
          expect(Tok::Comma, "','");
          Expr second = parse_expr();
          expect(Tok::RParen, "')'");
          return make_fn2(name == "min" ? BinaryFn::Min : BinaryFn::Max, first, second);
        }
        lexer_.fail(off, "one of x, a, b, abs, exp, log, sqrt, min, max");
      }
      case Tok::LParen: {
        advance();
        Expr inner = parse_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LBracket: {
        advance();
        Expr lhs = parse_expr();
        RelOp rel;
        switch (current_.kind) {
          case Tok::Lt: rel = RelOp::Lt; break;
          case Tok::Le: rel = RelOp::Le; break;
          case Tok::Gt: rel = RelOp::Gt; break;
          case Tok::Ge: rel = RelOp::Ge; break;
          case Tok::Eq: rel = RelOp::Eq; break;
          default: lexer_.fail(current_.offset, "relation (<, <=, >, >=, ==)");
        }
        advance();
        Expr rhs = parse_expr();
        expect(Tok::RBracket, "']'");
        return make_indicator(rel, lhs, rhs);
      }
      default:
        lexer_.fail(current_.offset, "number, variable, function, '(' or '['");
    }
  }

  Lexer lexer_;
  Token current_;
};

double lookup(const Env& env, Var v) {
  const std::optional<double>* slot = nullptr;
  const char* name = "";
  switch (v) {
    case Var::X: slot = &env.x; name = "x"; break;
    case Var::A: slot = &env.a; name = "a"; break;
    case Var::B: slot = &env.b; name = "b"; break;
  }
  if (!slot->has_value())
    throw EvalError(EvalErrorKind::UnboundVariable,
                    std::string("unbound variable ") + name);
  return **slot;
}

double eval_pow(double base, double exponent) {
  if (base == 0.0 && exponent < 0.0)
    throw EvalError(EvalErrorKind::DivisionByZero, "0 raised to a negative power");
  if (base < 0.0) {
    // keep evaluation real-valued: negative base demands an integer exponent
    if (std::rint(exponent) != exponent || std::abs(exponent) >= 9.007199254740992e15)
      throw EvalError(EvalErrorKind::PowDomain,
                      "negative base with non-integer exponent");
  }
  return checked(std::pow(base, exponent));
}

}  // namespace

Expr parse_expression(const std::string& text) {
  if (text.empty()) {
    throw ParseError("syntax error at 1:1 (byte 0): expected expression", 0, 1, 1,
                     "expression");
  }
  Parser parser(text);
  return parser.parse();
}

double evaluate(const Expr& e, const Env& env) {
  switch (e->kind) {
    case ExprNode::Kind::Number:
      return e->number;
    case ExprNode::Kind::Variable:
      return lookup(env, e->var);
    case ExprNode::Kind::Binary: {
      double l = evaluate(e->lhs, env);
      double r = evaluate(e->rhs, env);
      switch (e->bop) {
        case BinaryOp::Add: return checked(l + r);
        case BinaryOp::Sub: return checked(l - r);
        case BinaryOp::Mul: return checked(l * r);
        case BinaryOp::Div:
          if (r == 0.0)
            throw EvalError(EvalErrorKind::DivisionByZero, "division by zero");
          return checked(l / r);
        case BinaryOp::Pow: return eval_pow(l, r);
      }
      break;
    }
    case ExprNode::Kind::Unary: {
      double v = evaluate(e->lhs, env);
      switch (e->ufn) {
        case UnaryFn::Neg: return -v;
        case UnaryFn::Abs: return std::abs(v);
        case UnaryFn::Exp: return checked(std::exp(v));
        case UnaryFn::Log:
          if (v <= 0.0)
            throw EvalError(EvalErrorKind::LogNonPositive, "log of non-positive value");
          return checked(std::log(v));
        case UnaryFn::Sqrt:
          if (v < 0.0)
            throw EvalError(EvalErrorKind::SqrtNegative, "sqrt of negative value");
          return std::sqrt(v);
      }
      break;
    }
    case ExprNode::Kind::Fn2: {
      double l = evaluate(e->lhs, env);
      double r = evaluate(e->rhs, env);
      return e->bfn == BinaryFn::Min ? std::min(l, r) : std::max(l, r);
    }
    case ExprNode::Kind::Indicator: {
      double l = evaluate(e->lhs, env);
      double r = evaluate(e->rhs, env);
      bool hold = false;
      switch (e->rel) {
        case RelOp::Lt: hold = l < r; break;
        case RelOp::Le: hold = l <= r; break;
        case RelOp::Gt: hold = l > r; break;
        case RelOp::Ge: hold = l >= r; break;
        case RelOp::Eq: hold = l == r; break;
      }
      return hold ? 1.0 : 0.0;
    }
  }
  throw Error("corrupt expression node");
}

namespace {

const char* rel_text(RelOp r) {
  switch (r) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Eq: return "==";
  }
  return "?";
}

std::string number_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int precedence_of(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Binary:
      switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 0;
    case ExprNode::Kind::Unary:
      return n.ufn == UnaryFn::Neg ? 3 : 5;
    default:
      return 5;
  }
}

void print(const Expr& e, std::ostream& out, int parent_prec, bool right_side) {
  int prec = precedence_of(*e);
  bool parens = prec < parent_prec ||
                (prec == parent_prec && right_side && prec != 4);
  // '^' is right associative, everything else left; a right child at equal
  // precedence needs parentheses except under '^'.
  if (e->kind == ExprNode::Kind::Binary && e->bop == BinaryOp::Pow && parent_prec == 4 &&
      !right_side)
    parens = true;
  if (parens) out << '(';
  switch (e->kind) {
    case ExprNode::Kind::Number: {
      if (e->number < 0) {
        out << '(' << number_text(e->number) << ')';
      } else {
        out << number_text(e->number);
      }
      break;
    }
    case ExprNode::Kind::Variable:
      out << (e->var == Var::X ? 'x' : e->var == Var::A ? 'a' : 'b');
      break;
    case ExprNode::Kind::Binary: {
      const char* op = e->bop == BinaryOp::Add   ? " + "
                       : e->bop == BinaryOp::Sub ? " - "
                       : e->bop == BinaryOp::Mul ? "*"
                       : e->bop == BinaryOp::Div ? "/"
                                                 : "^";
      print(e->lhs, out, prec, false);
      out << op;
      print(e->rhs, out, prec, true);
      break;
    }
    case ExprNode::Kind::Unary:
      if (e->ufn == UnaryFn::Neg) {
        out << '-';
        print(e->lhs, out, prec, true);
      } else {
        out << (e->ufn == UnaryFn::Abs   ? "abs"
                : e->ufn == UnaryFn::Exp ? "exp"
                : e->ufn == UnaryFn::Log ? "log"
                                         : "sqrt")
            << '(';
        print(e->lhs, out, 0, false);
        out << ')';
      }
      break;
    case ExprNode::Kind::Fn2:
      out << (e->bfn == BinaryFn::Min ? "min(" : "max(");
      print(e->lhs, out, 0, false);
      out << ", ";
      print(e->rhs, out, 0, false);
      out << ')';
      break;
    case ExprNode::Kind::Indicator:
      out << '[';
      print(e->lhs, out, 0, false);
      out << ' ' << rel_text(e->rel) << ' ';
      print(e->rhs, out, 0, false);
      out << ']';
      break;
  }
  if (parens) out << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream out;
  print(e, out, 0, false);
  return out.str();
}

bool structurally_equal(const Expr& lhs, const Expr& rhs) {
  if (lhs == rhs) return true;
  if (!lhs || !rhs) return false;
  if (lhs->kind != rhs->kind) return false;
  switch (lhs->kind) {
    case ExprNode::Kind::Number:
      return lhs->number == rhs->number;
    case ExprNode::Kind::Variable:
      return lhs->var == rhs->var;
    case ExprNode::Kind::Binary:
      return lhs->bop == rhs->bop && structurally_equal(lhs->lhs, rhs->lhs) &&
             structurally_equal(lhs->rhs, rhs->rhs);
    case ExprNode::Kind::Unary:
      return lhs->ufn == rhs->ufn && structurally_equal(lhs->lhs, rhs->lhs);
    case ExprNode::Kind::Fn2:
      return lhs->bfn == rhs->bfn && structurally_equal(lhs->lhs, rhs->lhs) &&
             structurally_equal(lhs->rhs, rhs->rhs);
    case ExprNode::Kind::Indicator:
      return lhs->rel == rhs->rel && structurally_equal(lhs->lhs, rhs->lhs) &&
             structurally_equal(lhs->rhs, rhs->rhs);
  }
  return false;
}

bool mentions(const Expr& e, Var v) {
  if (!e) return false;
  if (e->kind == ExprNode::Kind::Variable) return e->var == v;
  return (e->lhs && mentions(e->lhs, v)) || (e->rhs && mentions(e->rhs, v));
}

Expr swap_ab(const Expr& e) {
  if (!e) return e;
  auto n = std::make_shared<ExprNode>(*e);
  if (n->kind == ExprNode::Kind::Variable) {
    if (n->var == Var::A) n->var = Var::B;
    else if (n->var == Var::B) n->var = Var::A;
  }
  if (e->lhs) n->lhs = swap_ab(e->lhs);
  if (e->rhs) n->rhs = swap_ab(e->rhs);
  return n;
}

Expr substitute(const Expr& e, Var v, double value) {
  if (!e) return e;
  if (e->kind == ExprNode::Kind::Variable)
    return e->var == v ? make_number(value) : e;
  auto n = std::make_shared<ExprNode>(*e);
  if (e->lhs) n->lhs = substitute(e->lhs, v, value);
  if (e->rhs) n->rhs = substitute(e->rhs, v, value);
  return n;
}

namespace {
void collect_literals(const Expr& e, std::vector<double>& out) {
  if (!e) return;
  if (e->kind == ExprNode::Kind::Number) out.push_back(e->number);
  collect_literals(e->lhs, out);
  collect_literals(e->rhs, out);
}
}  // namespace

std::vector<double> literal_constants(const Expr& e) {
  std::vector<double> out;
  collect_literals(e, out);
  return out;
}

}  // namespace saddlekit
