#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saddlekit/domain.hpp"
#include "saddlekit/expr.hpp"
#include "saddlekit/extended.hpp"
#include "saddlekit/search.hpp"

namespace saddlekit {

// A state-dependent action set: an interval with expression-valued endpoints
// intersected with an ambient base domain, or a two-branch point set (a
// branch whose expression fails to evaluate at the given state is dropped).
struct ConstraintMapping {
  enum class Form { Interval, TwoPoint };

  Form form = Form::Interval;
  DomainDecl ambient = DomainDecl::reals();
  Expr lo, hi;      // Interval endpoints; null keeps the ambient end
  Expr p1, p2;      // TwoPoint branches

  static ConstraintMapping whole(DomainDecl base) {
    ConstraintMapping m;
    m.ambient = std::move(base);
    return m;
  }

  static ConstraintMapping interval(DomainDecl base, Expr lo, Expr hi) {
    ConstraintMapping m;
    m.ambient = std::move(base);
    m.lo = std::move(lo);
    m.hi = std::move(hi);
    return m;
  }

  static ConstraintMapping two_point(Expr p1, Expr p2) {
    ConstraintMapping m;
    m.form = Form::TwoPoint;
    m.p1 = std::move(p1);
    m.p2 = std::move(p2);
    return m;
  }

  // Instantiates the action set at the given bindings; throws Error when the
  // realized set comes out empty.
  DomainDecl instantiate(const Env& env) const;
};

// One-step game where Player II moves after seeing Player I's action.
struct SequentialGame {
  DomainDecl x_domain = DomainDecl::reals();
  ConstraintMapping phi_a;  // endpoints in x
  ConstraintMapping phi_b;  // endpoints in (x, a)
  Expr payoff;              // f(x, a, b), the amount Player I pays

  DomainDecl a_set(double x) const { return phi_a.instantiate(Env{x, {}, {}}); }
  DomainDecl b_set(double x, double a) const {
    return phi_b.instantiate(Env{x, a, {}});
  }
};

// sup over b in B(x,a) of f(x,a,b); throws OutOfConstraint if a lies outside
// A(x).
ExtendedPayoff worst_loss(const SequentialGame& g, double x, double a,
                          const SearchBudget& budget = SearchBudget{});

struct MinimaxRecord {
  double x = 0.0;
  ExtendedPayoff v_sharp;
  std::vector<double> argmin_a;  // tie-tolerance clusters
  std::vector<std::pair<double, double>> worst_loss_samples;  // (a, f#(x,a))
  std::vector<double> argmax_b;  // maximizer cluster at the best a
};

// inf over a in A(x) of the worst loss, with solution-set clusters.
MinimaxRecord minimax(const SequentialGame& g, double x,
                      const SearchBudget& budget = SearchBudget{});

struct PureSufficiencyReport {
  double max_b_violation = 0.0;  // best mixed gain of II over the pure sup
  double max_a_violation = 0.0;  // best mixed gain of I below the pure inf
  int samples = 0;
};

// Samples seeded random finite-support mixed strategies for both movers on
// discretized constraint sets; violations beyond ~1e-7 would contradict the
// pure-strategy sufficiency of the sequential game.
PureSufficiencyReport check_pure_sufficiency(const SequentialGame& g, double x,
                                             int n_mixed_samples,
                                             unsigned long long seed = 1,
                                             const SearchBudget& budget = SearchBudget{});

// Merges sorted points into clusters with the given gap; representatives are
// cluster means.
std::vector<double> cluster_points(std::vector<double> points, double gap);

}  // namespace saddlekit
