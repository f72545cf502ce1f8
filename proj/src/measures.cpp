#include "saddlekit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace saddlekit {

namespace {

// Majorant ratios at or above this are treated as "not shrinking". Kept a
// hair below 1 so inner-series truncation jitter on exactly-constant terms
// (ratios 1 +- 1e-10) still registers as flat.
constexpr double kFlatRatio = 1.0 - 1e-6;
constexpr long kZeroRunCutoff = 256;

struct InnerInfinite {
  int sign;
};

double clipped_eval(const Expr& c, double a, double b, int sign) {
  double v;
  try {
    v = evaluate(c, Env::ab(a, b));
  } catch (const EvalError& err) {
    if (err.kind == EvalErrorKind::Overflow && err.overflow_sign != 0) {
      // a value too large to represent lies on one side of zero; the other
      // half of the split sees it as 0
      if (err.overflow_sign == sign) throw InnerInfinite{sign};
      return 0.0;
    }
    throw;
  }
  return sign > 0 ? std::max(v, 0.0) : std::min(v, 0.0);
}

}  // namespace

double MixedStrategy::geometric_weight(long k) const {
  if (kind != Kind::GeometricTail) throw Error("not a geometric-tail strategy");
  // (1-r)/r * r^k, accumulated multiplicatively for determinism
  double w = 1.0 - ratio;
  for (long i = 1; i < k; ++i) w *= ratio;
  return w;
}

void MixedStrategy::validate(const DomainDecl* domain) const {
  if (kind == Kind::GeometricTail) {
    if (!(ratio > 0.0 && ratio < 1.0))
      throw NonNormalized("geometric ratio must lie in (0,1)");
    if (domain) {
      if (domain->kind != DomainDecl::Kind::IntegerRange || domain->lo != 1.0 ||
          std::isfinite(domain->hi))
        throw NonNormalized(
            "geometric-tail strategies live on the integer range {1,2,...}");
    }
    return;
  }
  if (atoms.empty()) throw NonNormalized("finite-support strategy has no atoms");
  double total = 0.0;
  for (const auto& [point, weight] : atoms) {
    if (!(weight > 0.0)) throw NonNormalized("atom weights must be positive");
    if (!std::isfinite(point)) throw NonNormalized("atom points must be finite");
    if (domain && !domain->contains(point)) {
      std::ostringstream msg;
      msg << "atom " << point << " lies outside the action domain";
      throw NonNormalized(msg.str());
    }
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw NonNormalized("finite-support weights must sum to 1 within 1e-12");
}

std::vector<double> MixedStrategy::support_points() const {
  if (kind != Kind::FiniteSupport)
    throw Error("support_points requires a finite-support strategy");
  std::vector<double> pts;
  pts.reserve(atoms.size());
  for (const auto& [point, weight] : atoms) pts.push_back(point);
  return pts;
}

MixedStrategy mix(const MixedStrategy& p, const MixedStrategy& q, double alpha) {
  if (p.kind != MixedStrategy::Kind::FiniteSupport ||
      q.kind != MixedStrategy::Kind::FiniteSupport)
    throw Error("mix is defined for finite-support strategies");
  std::map<double, double> merged;
  for (const auto& [point, weight] : p.atoms) merged[point] += alpha * weight;
  for (const auto& [point, weight] : q.atoms) merged[point] += (1.0 - alpha) * weight;
  MixedStrategy out;
  out.atoms.assign(merged.begin(), merged.end());
  return out;
}

SeriesVerdict sum_one_signed_series(const std::function<double(long)>& term,
                                    bool positive, double tol, long max_terms) {
  double partial = 0.0;
  double prev_abs = -1.0;
  int ratio_streak = 0;
  int flat_streak = 0;
  long zero_run = 0;
  double window[5] = {0, 0, 0, 0, 0};
  int window_n = 0;

  for (long k = 1; k <= max_terms; ++k) {
    double t = term(k);
    if (positive ? t < 0.0 : t > 0.0)
      throw Error("series term crossed the declared sign");
    partial += t;
    double at = std::abs(t);

    if (at == 0.0) {
      ++zero_run;
      ratio_streak = 0;
      flat_streak = 0;
      window_n = 0;
      if (zero_run >= kZeroRunCutoff)
        return {SeriesVerdict::Status::ConvergedTo, partial, 0.0, k};
      continue;
    }
    zero_run = 0;

    if (prev_abs > 0.0) {
      double rho = at / prev_abs;
      if (rho < 1.0) {
        window[window_n % 5] = rho;
        ++window_n;
        ++ratio_streak;
      } else {
        ratio_streak = 0;
        window_n = 0;
      }
      flat_streak = rho >= kFlatRatio ? flat_streak + 1 : 0;
    }
    prev_abs = at;

    if (ratio_streak >= 5) {
      double rho_max = 0.0;
      for (int i = 0; i < std::min(window_n, 5); ++i)
        rho_max = std::max(rho_max, window[i]);
      double tail = at * rho_max / (1.0 - rho_max);
      if (tail <= tol * std::max(1.0, std::abs(partial)))
        return {SeriesVerdict::Status::ConvergedTo, partial, tail, k};
    }
    if (k >= 50 && flat_streak >= 10 && at > tol * std::max(1.0, std::abs(partial))) {
      return {positive ? SeriesVerdict::Status::DivergesPlus
                       : SeriesVerdict::Status::DivergesMinus,
              partial, 0.0, k};
    }
  }
  throw BudgetExhausted("series undecided within the term budget", partial);
}

namespace {

// One half of the inner integral over pi against a fixed opposing point.
// pi_side says which variable pi ranges over.
ExtendedPayoff inner_half(const Expr& c, const MixedStrategy& pi, PlayerTag pi_side,
                          double opponent_point, int sign,
                          const SearchBudget& budget) {
  auto payoff = [&](double own_point) {
    double a = pi_side == PlayerTag::A ? own_point : opponent_point;
    double b = pi_side == PlayerTag::A ? opponent_point : own_point;
    return clipped_eval(c, a, b, sign);
  };

  if (pi.kind == MixedStrategy::Kind::FiniteSupport) {
    double total = 0.0;
    try {
      for (const auto& [point, weight] : pi.atoms) total += weight * payoff(point);
    } catch (const InnerInfinite& inf) {
      return inf.sign > 0 ? ExtendedPayoff::plus_infinity()
                          : ExtendedPayoff::minus_infinity();
    }
    return ExtendedPayoff::finite(total);
  }

  double w = 1.0 - pi.ratio;
  auto term = [&, w](long k) mutable -> double {
    // weight (1-r) r^(k-1), advanced multiplicatively
    double weight = w;
    w *= pi.ratio;
    return weight * payoff(static_cast<double>(k));
  };
  try {
    SeriesVerdict v =
        sum_one_signed_series(term, sign > 0, budget.series_tol, budget.max_series_terms);
    switch (v.status) {
      case SeriesVerdict::Status::ConvergedTo:
        return ExtendedPayoff::finite(v.value);
      case SeriesVerdict::Status::DivergesPlus:
        return ExtendedPayoff::plus_infinity();
      case SeriesVerdict::Status::DivergesMinus:
        return ExtendedPayoff::minus_infinity();
    }
  } catch (const InnerInfinite& inf) {
    return inf.sign > 0 ? ExtendedPayoff::plus_infinity()
                        : ExtendedPayoff::minus_infinity();
  }
  return ExtendedPayoff::undefined();
}

// One half of the double integral.
ExtendedPayoff half_expected(const Expr& c, const MixedStrategy& pi_a,
                             const MixedStrategy& pi_b, int sign,
                             const SearchBudget& budget) {
  auto inner_over_b = [&](double a_point) {
    return inner_half(c, pi_b, PlayerTag::B, a_point, sign, budget);
  };

  if (pi_a.kind == MixedStrategy::Kind::FiniteSupport) {
    double total = 0.0;
    for (const auto& [point, weight] : pi_a.atoms) {
      ExtendedPayoff inner = inner_over_b(point);
      if (!inner.is_finite()) return inner;  // positive weight spreads infinity
      total += weight * inner.finite_value();
    }
    return ExtendedPayoff::finite(total);
  }

  double w = 1.0 - pi_a.ratio;
  auto term = [&, w](long k) mutable -> double {
    double weight = w;
    w *= pi_a.ratio;
    ExtendedPayoff inner = inner_over_b(static_cast<double>(k));
    if (!inner.is_finite())
      throw InnerInfinite{inner.is_plus_infinity() ? +1 : -1};
    return weight * inner.finite_value();
  };
  try {
    SeriesVerdict v =
        sum_one_signed_series(term, sign > 0, budget.series_tol, budget.max_series_terms);
    switch (v.status) {
      case SeriesVerdict::Status::ConvergedTo:
        return ExtendedPayoff::finite(v.value);
      case SeriesVerdict::Status::DivergesPlus:
        return ExtendedPayoff::plus_infinity();
      case SeriesVerdict::Status::DivergesMinus:
        return ExtendedPayoff::minus_infinity();
    }
  } catch (const InnerInfinite& inf) {
    return inf.sign > 0 ? ExtendedPayoff::plus_infinity()
                        : ExtendedPayoff::minus_infinity();
  }
  return ExtendedPayoff::undefined();
}

}  // namespace

ExtendedPayoff expected_payoff(const Expr& c, const MixedStrategy& pi_a,
                               const MixedStrategy& pi_b, const SearchBudget& budget) {
  pi_a.validate();
  pi_b.validate();
  ExtendedPayoff plus = half_expected(c, pi_a, pi_b, +1, budget);
  ExtendedPayoff minus = half_expected(c, pi_a, pi_b, -1, budget);
  return combine_halves(plus, minus);
}

ExtendedPayoff half_payoff_vs_pure(const Expr& c, const MixedStrategy& pi,
                                   PlayerTag pi_side, double opponent_point,
                                   int sign, const SearchBudget& budget) {
  return inner_half(c, pi, pi_side, opponent_point, sign, budget);
}

namespace {

std::vector<double> search_seeds(const Expr& c, const MixedStrategy& pi) {
  std::vector<double> seeds = literal_constants(c);
  if (pi.kind == MixedStrategy::Kind::FiniteSupport) {
    for (const auto& [point, weight] : pi.atoms) seeds.push_back(point);
  }
  seeds.push_back(0.0);
  return seeds;
}

ExtendedPayoff payoff_vs_pure(const Expr& c, const MixedStrategy& pi,
                              PlayerTag pi_side, double opponent_point,
                              const SearchBudget& budget) {
  return combine_halves(inner_half(c, pi, pi_side, opponent_point, +1, budget),
                        inner_half(c, pi, pi_side, opponent_point, -1, budget));
}

}  // namespace

SupResult c_sharp_search(const Expr& c, const MixedStrategy& pi_a,
                         const DomainDecl& b_domain, const SearchBudget& budget) {
  pi_a.validate();
  ScalarObjective objective = [&](double b) {
    return payoff_vs_pure(c, pi_a, PlayerTag::A, b, budget);
  };
  return scalar_sup(objective, b_domain, search_seeds(c, pi_a), budget);
}

SupResult c_flat_search(const Expr& c, const MixedStrategy& pi_b,
                        const DomainDecl& a_domain, const SearchBudget& budget) {
  pi_b.validate();
  ScalarObjective objective = [&](double a) {
    return payoff_vs_pure(c, pi_b, PlayerTag::B, a, budget);
  };
  return scalar_inf(objective, a_domain, search_seeds(c, pi_b), budget);
}

ExtendedPayoff c_sharp(const Expr& c, const MixedStrategy& pi_a,
                       const DomainDecl& b_domain, const SearchBudget& budget) {
  SupResult r = c_sharp_search(c, pi_a, b_domain, budget);
  if (r.exhausted)
    throw BudgetExhausted("sup over pure actions undecided at scan cap",
                          r.sup.is_finite() ? r.sup.finite_value() : 0.0);
  return r.sup;
}

ExtendedPayoff c_flat(const Expr& c, const MixedStrategy& pi_b,
                      const DomainDecl& a_domain, const SearchBudget& budget) {
  SupResult r = c_flat_search(c, pi_b, a_domain, budget);
  if (r.exhausted)
    throw BudgetExhausted("inf over pure actions undecided at scan cap",
                          r.sup.is_finite() ? r.sup.finite_value() : 0.0);
  return r.sup;
}

namespace {

// Probe layout across the opponent's domain: enumeration when discrete, a
// core grid plus outward doublings when continuous. Points come back grouped
// by "end" so divergence trends can be read outward.
struct ProbeLayout {
  std::vector<double> interior;                 // ordered, full sweep
  std::vector<std::vector<double>> outward_runs; // one per unbounded end
};

ProbeLayout layout_probes(const DomainDecl& domain, int probes) {
  ProbeLayout out;
  switch (domain.kind) {
    case DomainDecl::Kind::FiniteSet:
      out.interior = domain.points;
      return out;
    case DomainDecl::Kind::IntegerRange: {
      std::vector<double> run;
      long count = 0;
      for (double t = domain.lo; t <= domain.hi && count < probes; t += 1.0, ++count)
        run.push_back(t);
      if (!std::isfinite(domain.hi)) {
        out.outward_runs.push_back(run);
      } else {
        out.interior = run;
      }
      return out;
    }
    case DomainDecl::Kind::RealLine:
    case DomainDecl::Kind::Interval: {
      double anchor = domain.reference_point();
      double core_lo = std::isfinite(domain.lo) ? domain.lo : anchor - 8.0;
      double core_hi = std::isfinite(domain.hi) ? domain.hi : anchor + 8.0;
      int core_n = std::max(probes / 2, 8);
      double step = (core_hi - core_lo) / std::max(core_n - 1, 1);
      for (int i = 0; i < core_n; ++i) out.interior.push_back(core_lo + i * step);
      int per_end = std::max(probes / 4, 8);
      if (!std::isfinite(domain.lo)) {
        std::vector<double> run;
        for (int j = 0; j < per_end; ++j)
          run.push_back(core_lo - std::ldexp(1.0, j));
        out.outward_runs.push_back(run);
      }
      if (!std::isfinite(domain.hi)) {
        std::vector<double> run;
        for (int j = 0; j < per_end; ++j)
          run.push_back(core_hi + std::ldexp(1.0, j));
        out.outward_runs.push_back(run);
      }
      return out;
    }
  }
  throw Error("corrupt domain declaration");
}

// Confirms an outward divergence trend: magnitudes rising with non-shrinking
// increments over at least 4 consecutive probes.
bool magnitude_divergence(const std::vector<double>& values) {
  int streak = 0;
  double prev = 0.0, prev_delta = 0.0;
  bool have_prev = false;
  for (double v : values) {
    double m = std::abs(v);
    if (have_prev) {
      double delta = m - prev;
      if (delta > 0 && (streak == 0 || delta >= 0.999 * prev_delta) && m > 1.0) {
        ++streak;
        prev_delta = delta;
      } else {
        streak = 0;
      }
    }
    prev = m;
    have_prev = true;
    if (streak >= 4) return true;
  }
  return false;
}

// Last-ratio growth factor of |values|, geometric-mean over the tail.
double tail_growth_factor(const std::vector<double>& values) {
  double log_sum = 0.0;
  int n = 0;
  for (std::size_t i = values.size() >= 6 ? values.size() - 5 : 1; i < values.size();
       ++i) {
    double prev = std::abs(values[i - 1]);
    double cur = std::abs(values[i]);
    if (prev > 0 && cur > 0) {
      log_sum += std::log(cur / prev);
      ++n;
    }
  }
  return n > 0 ? std::exp(log_sum / n) : 1.0;
}

double snap_ratio(double r) {
  for (int q = 2; q <= 12; ++q) {
    for (int p = 1; p < q; ++p) {
      double candidate = static_cast<double>(p) / q;
      if (std::abs(r - candidate) <= 1e-6 * std::max(1.0, std::abs(candidate)))
        return candidate;
    }
  }
  return r;
}

}  // namespace

SafetyReport classify_safety(const Expr& c, const MixedStrategy& pi, PlayerTag side,
                             const DomainDecl& opponent_domain, int probes,
                             const SearchBudget& budget) {
  pi.validate();
  SafetyReport report;

  if (pi.kind == MixedStrategy::Kind::FiniteSupport) {
    report.verdict = SafetyReport::Verdict::Safe;
    report.reason = "finite support";
    return report;
  }

  ProbeLayout layout = layout_probes(opponent_domain, probes);

  auto plus_at = [&](double t) {
    return inner_half(c, pi, side, t, +1, budget);
  };
  auto minus_at = [&](double t) {
    return inner_half(c, pi, side, t, -1, budget);
  };

  std::optional<double> plus_infinite_at, minus_infinite_at;
  bool plus_all_finite = true, minus_all_finite = true;

  struct Run {
    std::vector<double> points, plus, minus;
  };
  std::vector<Run> runs;
  {
    Run interior;
    for (double t : layout.interior) interior.points.push_back(t);
    runs.push_back(std::move(interior));
    for (const auto& outward : layout.outward_runs) {
      Run run;
      run.points = outward;
      runs.push_back(std::move(run));
    }
  }

  int probes_used = 0;
  for (Run& run : runs) {
    for (double t : run.points) {
      ++probes_used;
      ExtendedPayoff p, m;
      try {
        p = plus_at(t);
        m = minus_at(t);
      } catch (const BudgetExhausted&) {
        report.verdict = SafetyReport::Verdict::Inconclusive;
        report.reason = "inner series undecided at probe budget";
        report.probes_used = probes_used;
        return report;
      }
      if (p.is_plus_infinity()) {
        plus_all_finite = false;
        if (!plus_infinite_at) plus_infinite_at = t;
        run.plus.push_back(std::numeric_limits<double>::infinity());
      } else {
        run.plus.push_back(p.finite_value());
      }
      if (m.is_minus_infinity()) {
        minus_all_finite = false;
        if (!minus_infinite_at) minus_infinite_at = t;
        run.minus.push_back(-std::numeric_limits<double>::infinity());
      } else {
        run.minus.push_back(m.finite_value());
      }
    }
  }
  report.probes_used = probes_used;

  // Two probed points already diverging on opposite sides give a two-atom
  // witness outright.
  if (plus_infinite_at && minus_infinite_at) {
    MixedStrategy witness =
        *plus_infinite_at == *minus_infinite_at
            ? MixedStrategy::delta(*plus_infinite_at)
            : mix(MixedStrategy::delta(*plus_infinite_at),
                  MixedStrategy::delta(*minus_infinite_at), 0.5);
    ExtendedPayoff check = side == PlayerTag::B ? expected_payoff(c, witness, pi, budget)
                                                : expected_payoff(c, pi, witness, budget);
    if (check.is_undefined()) {
      report.verdict = SafetyReport::Verdict::UnsafeWitness;
      report.witness = witness;
      report.witness_plus = ExtendedPayoff::plus_infinity();
      report.witness_minus = ExtendedPayoff::minus_infinity();
      report.reason = "pure opposing actions with divergent halves";
      return report;
    }
  }

  // Outward divergence of both halves: try geometric-tail witnesses when the
  // opponent's domain admits them.
  bool plus_diverges = false, minus_diverges = false;
  double minus_rate = 1.0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const Run& run = runs[i];
    if (magnitude_divergence(run.plus)) plus_diverges = true;
    if (magnitude_divergence(run.minus)) {
      minus_diverges = true;
      minus_rate = std::max(minus_rate, tail_growth_factor(run.minus));
    }
  }
  if ((plus_diverges || !plus_all_finite) && (minus_diverges || !minus_all_finite)) {
    bool geometric_ok = opponent_domain.kind == DomainDecl::Kind::IntegerRange &&
                        opponent_domain.lo == 1.0 && !std::isfinite(opponent_domain.hi);
    if (geometric_ok && minus_rate > 1.0) {
      double base = snap_ratio(1.0 / minus_rate);
      double candidates[4] = {base, std::min(0.95, base * 1.15),
                              std::min(0.97, base * 1.4), 0.9};
      for (double r : candidates) {
        if (!(r > 0.0 && r < 1.0)) continue;
        MixedStrategy witness = MixedStrategy::geometric(r);
        ExtendedPayoff wp, wm;
        try {
          if (side == PlayerTag::B) {
            wp = half_expected(c, witness, pi, +1, budget);
            wm = half_expected(c, witness, pi, -1, budget);
          } else {
            wp = half_expected(c, pi, witness, +1, budget);
            wm = half_expected(c, pi, witness, -1, budget);
          }
        } catch (const BudgetExhausted&) {
          continue;
        }
        if (wp.is_plus_infinity() && wm.is_minus_infinity()) {
          report.verdict = SafetyReport::Verdict::UnsafeWitness;
          report.witness = witness;
          report.witness_plus = wp;
          report.witness_minus = wm;
          std::ostringstream msg;
          msg << "geometric tail witness, ratio " << r;
          report.reason = msg.str();
          return report;
        }
      }
    }
    report.verdict = SafetyReport::Verdict::Inconclusive;
    report.reason = "both halves diverge but no expressible witness verified";
    return report;
  }

  // Boundedness certificates: one finite half uniformly controlled makes
  // every pairing well-defined. Interior runs need finiteness only; outward
  // runs additionally must not trend to infinity and must not attain their
  // extreme at the probing frontier.
  auto tail_safe = [&](bool use_minus) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const std::vector<double>& h = use_minus ? runs[i].minus : runs[i].plus;
      if (h.empty()) continue;
      for (double v : h)
        if (!std::isfinite(v)) return false;
      if (i == 0) continue;
      if (magnitude_divergence(h)) return false;
      std::size_t arg_extreme = 0;
      for (std::size_t j = 1; j < h.size(); ++j) {
        bool better = use_minus ? h[j] < h[arg_extreme] : h[j] > h[arg_extreme];
        if (better) arg_extreme = j;
      }
      if (h.size() >= 8 && arg_extreme + 2 >= h.size()) return false;
    }
    return true;
  };

  if (minus_all_finite && tail_safe(true)) {
    report.verdict = SafetyReport::Verdict::Safe;
    report.reason = "negative half bounded below across probes";
    return report;
  }
  if (plus_all_finite && tail_safe(false)) {
    report.verdict = SafetyReport::Verdict::Safe;
    report.reason = "positive half bounded above across probes";
    return report;
  }

  report.verdict = SafetyReport::Verdict::Inconclusive;
  report.reason = "probe budget exhausted without a certificate";
  return report;
}

}  // namespace saddlekit
