#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "saddlekit/domain.hpp"
#include "saddlekit/expr.hpp"
#include "saddlekit/extended.hpp"
#include "saddlekit/search.hpp"

namespace saddlekit {

// A mixed strategy: a finite list of weighted atoms, or the geometric-tail
// family on the integers {1,2,...} with weight(k) = (1-r)/r * r^k.
struct MixedStrategy {
  enum class Kind { FiniteSupport, GeometricTail };

  Kind kind = Kind::FiniteSupport;
  std::vector<std::pair<double, double>> atoms;  // (point, weight)
  double ratio = 0.0;

  static MixedStrategy delta(double point) {
    MixedStrategy s;
    s.atoms = {{point, 1.0}};
    return s;
  }

  static MixedStrategy finite(std::vector<std::pair<double, double>> atoms) {
    MixedStrategy s;
    s.atoms = std::move(atoms);
    return s;
  }

  static MixedStrategy geometric(double ratio) {
    MixedStrategy s;
    s.kind = Kind::GeometricTail;
    s.ratio = ratio;
    return s;
  }

  // weight of the integer point k >= 1
  double geometric_weight(long k) const;

  // Throws NonNormalized on weight or support violations; when a domain is
  // given, every finite atom must lie in it and GeometricTail requires the
  // integer range {1,2,...}.
  void validate(const DomainDecl* domain = nullptr) const;

  // Atom points (finite support only).
  std::vector<double> support_points() const;
};

// Convex combination of finite-support strategies.
MixedStrategy mix(const MixedStrategy& p, const MixedStrategy& q, double alpha);

// Realized status of a one-signed infinite series.
struct SeriesVerdict {
  enum class Status { ConvergedTo, DivergesPlus, DivergesMinus };
  Status status = Status::ConvergedTo;
  double value = 0.0;
  double tail_bound = 0.0;
  long terms_used = 0;
};

// Sums t(1) + t(2) + ... where every term has the given sign (or is zero).
// Convergence is declared once a geometric majorant built from stabilized
// term ratios bounds the tail below tol * max(1, |partial|); divergence once
// term magnitudes stop shrinking for 10 consecutive k past k = 50. Throws
// BudgetExhausted when max_terms elapse undecided.
SeriesVerdict sum_one_signed_series(const std::function<double(long)>& term,
                                    bool positive, double tol, long max_terms);

// Expected payoff split into (+)/(-) parts; Undefined when both diverge.
ExtendedPayoff expected_payoff(const Expr& c, const MixedStrategy& pi_a,
                               const MixedStrategy& pi_b,
                               const SearchBudget& budget = SearchBudget{});

// One half of the split against a pure opposing action: sign > 0 gives the
// integral of max(c,0), sign < 0 the integral of min(c,0).
ExtendedPayoff half_payoff_vs_pure(const Expr& c, const MixedStrategy& pi,
                                   PlayerTag pi_side, double opponent_point,
                                   int sign, const SearchBudget& budget);

// sup over pure b of c^(pi_a, b); pure search suffices for the mixed sup.
ExtendedPayoff c_sharp(const Expr& c, const MixedStrategy& pi_a,
                       const DomainDecl& b_domain,
                       const SearchBudget& budget = SearchBudget{});

// inf over pure a of c^(a, pi_b).
ExtendedPayoff c_flat(const Expr& c, const MixedStrategy& pi_b,
                      const DomainDecl& a_domain,
                      const SearchBudget& budget = SearchBudget{});

// Search-detail variants for callers that need optimizer locations.
SupResult c_sharp_search(const Expr& c, const MixedStrategy& pi_a,
                         const DomainDecl& b_domain, const SearchBudget& budget);
SupResult c_flat_search(const Expr& c, const MixedStrategy& pi_b,
                        const DomainDecl& a_domain, const SearchBudget& budget);

struct SafetyReport {
  enum class Verdict { Safe, UnsafeWitness, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::optional<MixedStrategy> witness;
  ExtendedPayoff witness_plus;   // c-plus against the witness
  ExtendedPayoff witness_minus;  // c-minus against the witness
  std::string reason;
  int probes_used = 0;
};

// Decides membership of pi in the safe class when a checkable sufficient
// condition holds, produces a concrete opposing strategy when both payoff
// halves provably diverge, and says Inconclusive otherwise.
SafetyReport classify_safety(const Expr& c, const MixedStrategy& pi,
                             PlayerTag side, const DomainDecl& opponent_domain,
                             int probes, const SearchBudget& budget = SearchBudget{});

}  // namespace saddlekit
