#include "saddlekit/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

namespace saddlekit {

namespace {

constexpr double kTieTol = 1e-6;

struct Sample {
  double point;
  ExtendedPayoff value;
};

// Evaluates f, translating overflow into the matching infinity and domain
// errors into holes (nullopt).
std::optional<ExtendedPayoff> probe_value(const ScalarObjective& f, double t,
                                     long& evals, long& holes) {
  ++evals;
  try {
    return f(t);
  } catch (const EvalError& err) {
    if (err.kind == EvalErrorKind::Overflow && err.overflow_sign != 0) {
      return err.overflow_sign > 0 ? ExtendedPayoff::plus_infinity()
                                   : ExtendedPayoff::minus_infinity();
    }
    if (err.is_domain_error()) {
      ++holes;
      return std::nullopt;
    }
    throw;
  }
}

// Sustained-growth detector for outward probe sequences. Confirms +infinity
// when values rise strictly with non-shrinking increments over >= 4 steps.
class GrowthTracker {
 public:
  void feed(double v) {
    if (count_ > 0) {
      double delta = v - last_;
      if (delta > 0 && (streak_ == 0 || delta >= 0.999 * last_delta_)) {
        ++streak_;
        last_delta_ = delta;
      } else {
        streak_ = 0;
        last_delta_ = 0;
      }
    }
    last_ = v;
    ++count_;
  }

  void feed_infinite() { infinite_ = true; }

  bool confirmed(double reference_best) const {
    if (infinite_) return true;
    return streak_ >= 4 && last_ > reference_best;
  }

 private:
  double last_ = 0;
  double last_delta_ = 0;
  int streak_ = 0;
  int count_ = 0;
  bool infinite_ = false;
};

SupResult finish(std::vector<Sample>& finite_samples, bool undefined_seen,
                 bool plus_inf, bool exhausted, long evals, long holes) {
  SupResult r;
  r.evaluations = evals;
  r.exhausted = exhausted;
  if (undefined_seen) {
    r.sup = ExtendedPayoff::undefined();
    return r;
  }
  if (plus_inf) {
    r.sup = ExtendedPayoff::plus_infinity();
    return r;
  }
  if (finite_samples.empty()) {
    if (holes > 0)
      throw EvalError(EvalErrorKind::DivisionByZero,
                      "objective undefined on every probed point");
    r.sup = ExtendedPayoff::minus_infinity();
    return r;
  }
  auto best = std::max_element(
      finite_samples.begin(), finite_samples.end(),
      [](const Sample& p, const Sample& q) { return p.value.value < q.value.value; });
  r.sup = best->value;
  r.arg = best->point;
  double window = kTieTol * std::max(1.0, std::abs(best->value.value));
  for (const Sample& s : finite_samples) {
    if (best->value.value - s.value.value <= window) r.near_optimal.push_back(s.point);
  }
  std::sort(r.near_optimal.begin(), r.near_optimal.end());
  r.near_optimal.erase(std::unique(r.near_optimal.begin(), r.near_optimal.end()),
                       r.near_optimal.end());
  return r;
}

SupResult sup_on_integers(const ScalarObjective& f, const DomainDecl& domain,
                          const SearchBudget& budget) {
  std::vector<Sample> finite_samples;
  long evals = 0, holes = 0;
  bool undefined_seen = false;
  double best = -std::numeric_limits<double>::infinity();
  long best_index = -1;
  GrowthTracker growth;
  long limit = budget.integer_scan_limit;
  bool truncated = false;

  bool saw_plus_inf = false;
  long k = 0;
  for (double t = domain.lo; t <= domain.hi; t += 1.0, ++k) {
    if (k >= limit) {
      truncated = true;
      break;
    }
    auto v = probe_value(f, t, evals, holes);
    if (!v) continue;
    if (v->is_undefined()) {
      undefined_seen = true;
      break;
    }
    if (v->is_plus_infinity()) {
      saw_plus_inf = true;
      break;
    }
    if (v->is_minus_infinity()) continue;
    finite_samples.push_back({t, *v});
    growth.feed(v->finite_value());
    if (v->finite_value() > best) {
      best = v->finite_value();
      best_index = k;
    }
    // an unbounded scan can stop early once sustained growth is confirmed
    if (!std::isfinite(domain.hi) && k >= 50 && growth.confirmed(best - 1)) break;
  }

  bool plus_inf =
      saw_plus_inf || (growth.confirmed(best - 1) && !std::isfinite(domain.hi));
  // hitting the cap while the maximum still sits at the frontier means the
  // question is open, not answered
  bool exhausted =
      truncated && !plus_inf && best_index >= 0 && (limit - best_index) <= limit / 10;
  return finish(finite_samples, undefined_seen, plus_inf, exhausted, evals, holes);
}

void add_grid(std::vector<double>& pts, double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) {
    pts.push_back(lo);
    return;
  }
  double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) pts.push_back(lo + step * i);
  pts.back() = hi;
}

SupResult sup_on_interval(const ScalarObjective& f, const DomainDecl& domain,
                          const std::vector<double>& extra_points,
                          const SearchBudget& budget) {
  long evals = 0, holes = 0;
  bool undefined_seen = false;
  bool plus_inf = false;
  std::vector<Sample> finite_samples;

  bool lo_open = !std::isfinite(domain.lo);
  bool hi_open = !std::isfinite(domain.hi);
  double anchor = domain.reference_point();

  double core_lo = lo_open ? anchor - 1.0 : domain.lo;
  double core_hi = hi_open ? anchor + 1.0 : domain.hi;
  for (double p : extra_points) {
    if (!std::isfinite(p)) continue;
    if (p < domain.lo || p > domain.hi) continue;
    core_lo = std::min(core_lo, p);
    core_hi = std::max(core_hi, p);
  }
  if (core_lo > core_hi) std::swap(core_lo, core_hi);

  std::vector<double> pts;
  add_grid(pts, core_lo, core_hi, budget.grid_points);
  for (double p : extra_points) {
    if (std::isfinite(p) && p >= domain.lo && p <= domain.hi) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto eval_point = [&](double t) -> bool {
    auto v = probe_value(f, t, evals, holes);
    if (!v) return true;
    if (v->is_undefined()) {
      undefined_seen = true;
      return false;
    }
    if (v->is_plus_infinity()) {
      plus_inf = true;
      return false;
    }
    if (!v->is_minus_infinity()) finite_samples.push_back({t, *v});
    return true;
  };

  for (double t : pts) {
    if (!eval_point(t)) {
      return finish(finite_samples, undefined_seen, plus_inf, false, evals, holes);
    }
  }

  double core_best = -std::numeric_limits<double>::infinity();
  for (const Sample& s : finite_samples) core_best = std::max(core_best, s.value.value);

  // outward doubling probes on open ends
  double unit = std::max(1.0, core_hi - core_lo);
  for (int dir : {-1, +1}) {
    if (dir < 0 && !lo_open) continue;
    if (dir > 0 && !hi_open) continue;
    GrowthTracker growth;
    double edge = dir < 0 ? core_lo : core_hi;
    for (int j = 0; j < budget.doubling_steps; ++j) {
      double t = edge + dir * unit * std::ldexp(1.0, j);
      auto v = probe_value(f, t, evals, holes);
      if (!v) continue;
      if (v->is_undefined()) {
        undefined_seen = true;
        break;
      }
      if (v->is_plus_infinity()) {
        growth.feed_infinite();
        break;
      }
      if (v->is_minus_infinity()) {
        growth = GrowthTracker();
        continue;
      }
      finite_samples.push_back({t, *v});
      growth.feed(v->finite_value());
    }
    if (undefined_seen) break;
    if (growth.confirmed(core_best)) {
      plus_inf = true;
      break;
    }
  }

  if (!undefined_seen && !plus_inf && !finite_samples.empty()) {
    // golden refinement around the strongest grid cells
    std::vector<Sample> sorted = finite_samples;
    std::sort(sorted.begin(), sorted.end(), [](const Sample& p, const Sample& q) {
      return p.value.value > q.value.value;
    });
    std::vector<double> ordered;
    for (const Sample& s : finite_samples) ordered.push_back(s.point);
    std::sort(ordered.begin(), ordered.end());
    int refined = 0;
    std::set<double> seen;
    for (const Sample& s : sorted) {
      if (refined >= budget.refine_cells) break;
      if (!seen.insert(s.point).second) continue;
      ++refined;
      auto it = std::lower_bound(ordered.begin(), ordered.end(), s.point);
      double lo = it == ordered.begin() ? s.point : *(it - 1);
      double hi = (it + 1) == ordered.end() ? s.point : *(it + 1);
      if (!(hi > lo)) continue;
      auto wrapped = [&](double t) -> ExtendedPayoff {
        auto v = probe_value(f, t, evals, holes);
        return v ? *v : ExtendedPayoff::minus_infinity();
      };
      auto [arg, val] = golden_section_max(wrapped, lo, hi, budget.golden_iters);
      if (std::isfinite(val)) finite_samples.push_back({arg, ExtendedPayoff::finite(val)});
    }
  }

  return finish(finite_samples, undefined_seen, plus_inf, false, evals, holes);
}

}  // namespace

std::pair<double, double> golden_section_max(
    const std::function<ExtendedPayoff(double)>& f, double lo, double hi,
    int iters) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double best_arg = lo;
  double best_val = -std::numeric_limits<double>::infinity();

  auto probe = [&](double t) -> double {
    ExtendedPayoff v = f(t);
    if (!v.is_finite()) return std::numeric_limits<double>::quiet_NaN();
    if (v.finite_value() > best_val) {
      best_val = v.finite_value();
      best_arg = t;
    }
    return v.finite_value();
  };

  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = probe(c), fd = probe(d);
  for (int i = 0; i < iters; ++i) {
    if (std::isnan(fc) || std::isnan(fd)) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = probe(d);
    }
  }
  return {best_arg, best_val};
}

SupResult scalar_sup(const ScalarObjective& f, const DomainDecl& domain,
                     const std::vector<double>& extra_points,
                     const SearchBudget& budget) {
  switch (domain.kind) {
    case DomainDecl::Kind::FiniteSet: {
      std::vector<Sample> finite_samples;
      long evals = 0, holes = 0;
      bool undefined_seen = false, plus_inf = false;
      for (double t : domain.points) {
        auto v = probe_value(f, t, evals, holes);
        if (!v) continue;
        if (v->is_undefined()) {
          undefined_seen = true;
          break;
        }
        if (v->is_plus_infinity()) {
          plus_inf = true;
          break;
        }
        if (!v->is_minus_infinity()) finite_samples.push_back({t, *v});
      }
      return finish(finite_samples, undefined_seen, plus_inf, false, evals, holes);
    }
    case DomainDecl::Kind::IntegerRange:
      return sup_on_integers(f, domain, budget);
    case DomainDecl::Kind::RealLine:
    case DomainDecl::Kind::Interval:
      return sup_on_interval(f, domain, extra_points, budget);
  }
  throw Error("corrupt domain declaration");
}

SupResult scalar_inf(const ScalarObjective& f, const DomainDecl& domain,
                     const std::vector<double>& extra_points,
                     const SearchBudget& budget) {
  // overflow signs must flip along with the objective
  ScalarObjective negated = [&f](double t) -> ExtendedPayoff {
    try {
      return f(t).negated();
    } catch (const EvalError& err) {
      if (err.kind == EvalErrorKind::Overflow && err.overflow_sign != 0) {
        return err.overflow_sign > 0 ? ExtendedPayoff::minus_infinity()
                                     : ExtendedPayoff::plus_infinity();
      }
      throw;
    }
  };
  SupResult r = scalar_sup(negated, domain, extra_points, budget);
  r.sup = r.sup.negated();
  return r;
}

}  // namespace saddlekit
