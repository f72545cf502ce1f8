#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "saddlekit/continuous_game.hpp"
#include "saddlekit/turnbased.hpp"

namespace saddlekit {

// A parametric family {A(x), B(x), c(x,.,.)} on an x grid. B is
// state-dependent but action-independent (the simultaneous-move shape).
struct GameFamily {
  struct Flags {
    bool c_lsc = false;
    bool c_usc = false;
    bool a_lsc_mapping = false;
    bool b_lsc_mapping = false;
    bool b_compact = false;
    bool c_bounded_below = false;
    bool a_coercive_in_a = false;
  };

  std::vector<double> x_grid;  // strictly increasing
  ConstraintMapping a_map;     // endpoints in x
  ConstraintMapping b_map;     // endpoints in x
  Expr payoff;                 // c(x, a, b)
  Flags flags;

  void validate() const;
  DomainDecl a_set(double x) const { return a_map.instantiate(Env{x, {}, {}}); }
  DomainDecl b_set(double x) const { return b_map.instantiate(Env{x, {}, {}}); }
};

enum class AssumptionStatus {
  DeclaredAndUnrefuted,
  Refuted,
  NotDeclared,
  StructurallySatisfied,
};

struct AssumptionFinding {
  AssumptionStatus status = AssumptionStatus::NotDeclared;
  std::string witness;  // set when refuted
};

struct AssumptionReport {
  AssumptionFinding a1;  // payoff K-inf-compact through the swapped graph
  AssumptionFinding a2;  // payoff K-sup-compact
  AssumptionFinding a3;  // A(.) lower semicontinuous
  AssumptionFinding a4;  // B(.) lower semicontinuous
  AssumptionFinding a_lsc_of_phi_b;  // structural in this family model
};

AssumptionReport classify_assumptions(const GameFamily& fam, int probes,
                                      const SearchBudget& budget = SearchBudget{});

enum class SweepProfile { Lsc, Continuity };

struct SweepRecord {
  double x = 0.0;
  double v = 0.0;
  double eps = 0.0;
  double gap_sharp = 0.0;  // sharp - value
  double gap_flat = 0.0;   // value - flat
  bool converged = false;
  std::string error;  // per-x solver failure, collected rather than fatal
  std::vector<std::pair<double, double>> a_atoms, b_atoms;
  double a_support_lo = 0.0, a_support_hi = 0.0;
  double a_box_lo = 0.0, a_box_hi = 0.0;
};

struct SweepViolation {
  double x = 0.0;
  double magnitude = 0.0;
  std::string detail;
};

struct SweepReport {
  SweepProfile profile = SweepProfile::Lsc;
  AssumptionReport assumptions;
  std::vector<SweepRecord> records;
  std::vector<SweepViolation> lsc_violations;
  std::vector<SweepViolation> usc_violations;
  std::vector<SweepViolation> multifunction_usc_violations;
  bool lsc_pass = true;
  bool continuity_pass = true;
};

struct SweepOptions {
  double tol = 1e-4;
  double diag_tol = 0.0;  // 0 -> 5 * tol
  double set_tol = 0.1;
  int jobs = 1;
  RefinementBudget refinement;
  SearchBudget search;
  int probes = 64;
};

// Per-x solves plus grid diagnostics: lsc/usc of v via shrinking one-sided
// neighborhoods, refinement-stable jump detection for continuity, and a
// set-distance check on the reported solution clusters.
SweepReport sweep(const GameFamily& fam, SweepProfile profile,
                  const SweepOptions& options = SweepOptions{});

// max over S1 atoms (minus up to 0.01 of the lightest mass) of the distance
// to the nearest S2 atom. Throws EmptyCluster on empty input.
double set_distance(const std::vector<std::pair<double, double>>& s1,
                    const std::vector<std::pair<double, double>>& s2);

}  // namespace saddlekit
