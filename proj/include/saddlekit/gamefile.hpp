#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saddlekit/paramlab.hpp"
#include "saddlekit/turnbased.hpp"

namespace saddlekit {

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  std::vector<double> points() const {
    std::vector<double> pts;
    if (n == 1) return {lo};
    for (int i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * i / (n - 1));
    return pts;
  }
};

// lo:hi:n
GridSpec parse_grid_spec(const std::string& text);

// "reals" | "interval(lo,hi)" | "integers(lo,hi)" | "set(v1,v2,...)", with
// inf/-inf accepted where the domain allows them.
DomainDecl parse_domain(const std::string& text);

// Declarative game description. Exactly one shape applies: plain game,
// parametric family, or sequential (perfect-information) game.
struct GameFile {
  enum class Shape { GameOnly, Family, Sequential };

  Shape shape = Shape::GameOnly;
  Expr payoff;
  DomainDecl a_domain = DomainDecl::reals();
  DomainDecl b_domain = DomainDecl::reals();

  // [family] / [sequential] constraint endpoints (exprs in x, resp. x and a)
  Expr a_lo, a_hi, b_lo, b_hi;
  Expr a_point1, a_point2;  // optional two-branch A(x)
  std::optional<GridSpec> x_grid;

  GameFamily::Flags flags;

  GameFamily to_family() const;
  SequentialGame to_sequential() const;
};

GameFile parse_game_file(const std::string& text, const std::string& origin = "");
GameFile load_game_file(const std::string& path);

}  // namespace saddlekit
