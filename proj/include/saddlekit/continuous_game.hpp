#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saddlekit/expr.hpp"
#include "saddlekit/matrix_game.hpp"
#include "saddlekit/measures.hpp"

namespace saddlekit {

// Evidence that a payoff slice grows without bound along the open ends of an
// axis, gathered from doubling probes against an anchor opposing action.
struct CoercivityCertificate {
  enum class EndStatus { GrowthConfirmed, GrowthRefuted, Inconclusive };

  struct EndReport {
    int direction = +1;  // -1: toward -infinity, +1: toward +infinity
    EndStatus status = EndStatus::Inconclusive;
    std::vector<std::pair<double, double>> samples;  // (point, value)
    double counter_point = 0.0;  // witness sample when refuted
  };

  DomainDecl axis_domain;  // the axis the certificate speaks about
  double anchor_b0 = 0.0;  // opposing action the slice was probed at
  std::vector<EndReport> ends;
  std::vector<double> radii;

  bool all_confirmed() const {
    for (const auto& e : ends)
      if (e.status != EndStatus::GrowthConfirmed) return false;
    return true;
  }
};

// Default doubling radii 1, 2, 4, ... 2^40.
std::vector<double> default_radii();

// Probes c(., b0) for growth along every unbounded end of `axis`, trying the
// b0 candidates in order and keeping the first that confirms all ends.
// Compact axes come back trivially confirmed with no end reports.
CoercivityCertificate probe_coercivity(const Expr& c, const DomainDecl& axis,
                                       const DomainDecl& opponent,
                                       const std::vector<double>& candidates_b0,
                                       const std::vector<double>& radii = default_radii());

struct Box {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct LevelTruncation {
  double lambda = 0.0;
  Box a_box;
  // Filled by the solver from the swapped-game certificate when the b axis
  // is noncompact; defaults to the axis box of the opposing domain.
  Box b_box;
};

// Intersects {t : c(t, b0) <= lambda} with the certified axis via 64-step
// bisection along each confirmed unbounded end; finite ends stay as-is.
// Throws LambdaTooSmall when the level set misses the probed range.
LevelTruncation truncate(const Expr& c, const CoercivityCertificate& cert,
                         double lambda);

struct SaddleCertificate {
  MixedStrategy pi_a;
  MixedStrategy pi_b;
  double value = 0.0;
  double eps = 0.0;
  double sharp_minus_value = 0.0;
  double value_minus_flat = 0.0;
  bool converged = false;
  double lambda = 0.0;
  Box a_box, b_box;
  int refinements = 0;
  long grid_rows = 0, grid_cols = 0;
};

struct RefinementBudget {
  int max_refine = 12;
  std::optional<double> lambda0;  // overrides the seeded level
  int max_grid_points = 1025;     // per-axis cap for the induced LP
};

// Level-set truncation + nested-grid LP refinement. The duality gap is
// always measured against the full continuous domains. When the budget runs
// out the best certificate comes back with converged=false; coercivity
// failures throw CoercivityUnavailable.
SaddleCertificate solve_zero_sum(const Expr& c, const DomainDecl& a_domain,
                                 const DomainDecl& b_domain, double tol,
                                 const RefinementBudget& budget = RefinementBudget{},
                                 const SearchBudget& search = SearchBudget{});

// Recomputes both sides of the gap with a denser fresh search.
bool verify_saddle(const Expr& c, const SaddleCertificate& cert,
                   const DomainDecl& a_domain, const DomainDecl& b_domain,
                   double tol, const SearchBudget& search = SearchBudget{});

}  // namespace saddlekit
