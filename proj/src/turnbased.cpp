#include "saddlekit/turnbased.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace saddlekit {

DomainDecl ConstraintMapping::instantiate(const Env& env) const {
  if (form == Form::TwoPoint) {
    std::vector<double> pts;
    for (const Expr& branch : {p1, p2}) {
      if (!branch) continue;
      try {
        pts.push_back(evaluate(branch, env));
      } catch (const EvalError& err) {
        if (!err.is_domain_error()) throw;
        // branch undefined at this state: drop it
      }
    }
    if (pts.empty()) throw Error("two-point constraint has no defined branch");
    return DomainDecl::finite_set(pts);
  }

  double lo = ambient.bounded_below() ? ambient.lo
                                      : -std::numeric_limits<double>::infinity();
  double hi = ambient.bounded_above() ? ambient.hi
                                      : std::numeric_limits<double>::infinity();
  if (this->lo) lo = std::max(lo, evaluate(this->lo, env));
  if (this->hi) hi = std::min(hi, evaluate(this->hi, env));
  if (lo > hi) {
    std::ostringstream msg;
    msg << "constraint interval is empty: [" << lo << ", " << hi << "]";
    throw Error(msg.str());
  }

  switch (ambient.kind) {
    case DomainDecl::Kind::RealLine:
    case DomainDecl::Kind::Interval:
      if (!std::isfinite(lo) && !std::isfinite(hi)) return DomainDecl::reals();
      return DomainDecl::interval(lo, hi);
    case DomainDecl::Kind::IntegerRange:
      return DomainDecl::integer_range(std::isfinite(lo) ? std::ceil(lo) : lo,
                                       std::isfinite(hi) ? std::floor(hi) : hi);
    case DomainDecl::Kind::FiniteSet: {
      std::vector<double> pts;
      for (double p : ambient.points)
        if (p >= lo && p <= hi) pts.push_back(p);
      if (pts.empty()) throw Error("constraint leaves the finite set empty");
      return DomainDecl::finite_set(pts);
    }
  }
  throw Error("corrupt ambient domain");
}

std::vector<double> cluster_points(std::vector<double> points, double gap) {
  if (points.empty()) return points;
  std::sort(points.begin(), points.end());
  std::vector<double> out;
  double sum = points[0];
  int count = 1;
  double last = points[0];
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] - last <= gap) {
      sum += points[i];
      ++count;
    } else {
      out.push_back(sum / count);
      sum = points[i];
      count = 1;
    }
    last = points[i];
  }
  out.push_back(sum / count);
  return out;
}

namespace {

std::vector<double> seed_points(const Expr& f, double x) {
  std::vector<double> extras = literal_constants(f);
  extras.push_back(0.0);
  extras.push_back(x);
  return extras;
}

ExtendedPayoff worst_loss_unchecked(const SequentialGame& g, double x, double a,
                                    const SearchBudget& budget) {
  DomainDecl b_dom = g.b_set(x, a);
  ScalarObjective objective = [&](double b) {
    return ExtendedPayoff::finite(evaluate(g.payoff, Env::xab(x, a, b)));
  };
  std::vector<double> extras = seed_points(g.payoff, x);
  extras.push_back(a);
  return scalar_sup(objective, b_dom, extras, budget).sup;
}

}  // namespace

ExtendedPayoff worst_loss(const SequentialGame& g, double x, double a,
                          const SearchBudget& budget) {
  DomainDecl a_dom = g.a_set(x);
  bool inside = a_dom.contains(a);
  if (!inside && !a_dom.discrete()) {
    // tolerate endpoint rounding on instantiated interval constraints
    inside = a >= a_dom.lo - 1e-12 && a <= a_dom.hi + 1e-12;
  }
  if (!inside) {
    std::ostringstream msg;
    msg << "action a=" << a << " violates A(x) at x=" << x;
    throw OutOfConstraint(msg.str());
  }
  return worst_loss_unchecked(g, x, a, budget);
}

MinimaxRecord minimax(const SequentialGame& g, double x, const SearchBudget& budget) {
  if (!g.x_domain.contains(x)) {
    std::ostringstream msg;
    msg << "state x=" << x << " lies outside the declared state domain";
    throw OutOfConstraint(msg.str());
  }
  DomainDecl a_dom = g.a_set(x);

  ScalarObjective objective = [&](double a) {
    return worst_loss_unchecked(g, x, a, budget);
  };
  SupResult inf = scalar_inf(objective, a_dom, seed_points(g.payoff, x), budget);

  MinimaxRecord rec;
  rec.x = x;
  rec.v_sharp = inf.sup;

  double cluster_gap = 1e-6;
  if (a_dom.kind == DomainDecl::Kind::Interval ||
      a_dom.kind == DomainDecl::Kind::RealLine) {
    double width = std::isfinite(a_dom.hi - a_dom.lo) ? a_dom.hi - a_dom.lo : 2.0;
    cluster_gap = std::max(1e-6, 2.0 * width / std::max(budget.grid_points - 1, 1));
  }
  rec.argmin_a = cluster_points(inf.near_optimal, cluster_gap);

  // coarse worst-loss profile for reporting
  if (rec.v_sharp.is_finite()) {
    DomainDecl sample_dom = a_dom;
    SearchBudget coarse = budget.scaled_grid(33);
    std::vector<double> samples;
    if (sample_dom.discrete()) {
      samples = sample_dom.kind == DomainDecl::Kind::FiniteSet
                    ? sample_dom.points
                    : std::vector<double>{};
      if (samples.empty()) {
        long count = 0;
        for (double t = sample_dom.lo; t <= sample_dom.hi && count < 33;
             t += 1.0, ++count)
          samples.push_back(t);
      }
    } else {
      double lo = std::isfinite(sample_dom.lo) ? sample_dom.lo
                                               : (rec.argmin_a.empty() ? x : rec.argmin_a[0]) - 4.0;
      double hi = std::isfinite(sample_dom.hi) ? sample_dom.hi
                                               : (rec.argmin_a.empty() ? x : rec.argmin_a[0]) + 4.0;
      for (int i = 0; i < 33; ++i) samples.push_back(lo + (hi - lo) * i / 32.0);
    }
    for (double a : samples) {
      ExtendedPayoff w = worst_loss_unchecked(g, x, a, coarse);
      if (w.is_finite()) rec.worst_loss_samples.emplace_back(a, w.finite_value());
    }

    if (!rec.argmin_a.empty()) {
      double best_a = rec.argmin_a.front();
      DomainDecl b_dom = g.b_set(x, best_a);
      ScalarObjective slice = [&](double b) {
        return ExtendedPayoff::finite(evaluate(g.payoff, Env::xab(x, best_a, b)));
      };
      std::vector<double> extras = seed_points(g.payoff, x);
      extras.push_back(best_a);
      SupResult sup = scalar_sup(slice, b_dom, extras, budget);
      double b_gap = 1e-6;
      if (!b_dom.discrete() && std::isfinite(b_dom.hi - b_dom.lo))
        b_gap = std::max(1e-6,
                         2.0 * (b_dom.hi - b_dom.lo) / std::max(budget.grid_points - 1, 1));
      rec.argmax_b = cluster_points(sup.near_optimal, b_gap);
    }
  }
  return rec;
}

namespace {

std::vector<double> discretize(const DomainDecl& d, int n, double fallback_center) {
  std::vector<double> pts;
  switch (d.kind) {
    case DomainDecl::Kind::FiniteSet:
      return d.points;
    case DomainDecl::Kind::IntegerRange: {
      long count = 0;
      for (double t = d.lo; t <= d.hi && count < n; t += 1.0, ++count)
        pts.push_back(t);
      return pts;
    }
    case DomainDecl::Kind::RealLine:
    case DomainDecl::Kind::Interval: {
      double lo = std::isfinite(d.lo) ? d.lo : fallback_center - 4.0;
      double hi = std::isfinite(d.hi) ? d.hi : fallback_center + 4.0;
      if (hi == lo) return {lo};
      for (int i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * i / (n - 1));
      return pts;
    }
  }
  throw Error("corrupt domain declaration");
}

}  // namespace

PureSufficiencyReport check_pure_sufficiency(const SequentialGame& g, double x,
                                             int n_mixed_samples,
                                             unsigned long long seed,
                                             const SearchBudget& budget) {
  MinimaxRecord rec = minimax(g, x, budget);
  if (!rec.v_sharp.is_finite())
    throw Error("pure-sufficiency check needs a finite minimax value");

  PureSufficiencyReport report;
  report.samples = n_mixed_samples;
  std::mt19937_64 rng(seed);

  double best_a = rec.argmin_a.empty() ? g.a_set(x).reference_point()
                                       : rec.argmin_a.front();
  double pure_sup = worst_loss(g, x, best_a, budget).finite_value();

  std::vector<double> b_points = discretize(g.b_set(x, best_a), 65, x);
  std::vector<double> a_points = discretize(g.a_set(x), 65, x);

  // cache of the worst-loss profile over the a grid
  std::map<double, double> f_sharp;
  for (double a : a_points) {
    ExtendedPayoff w = worst_loss_unchecked(g, x, a, budget.scaled_grid(65));
    if (w.is_finite()) f_sharp[a] = w.finite_value();
  }

  std::uniform_int_distribution<int> support_size(1, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto random_mix = [&](const std::vector<double>& pool) {
    int k = std::min<int>(support_size(rng), static_cast<int>(pool.size()));
    std::vector<std::pair<double, double>> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      double point = pool[static_cast<std::size_t>(unit(rng) * pool.size()) %
                          pool.size()];
      double weight = -std::log(std::max(unit(rng), 1e-12));
      atoms.emplace_back(point, weight);
      total += weight;
    }
    for (auto& [p, w] : atoms) w /= total;
    return atoms;
  };

  for (int s = 0; s < n_mixed_samples; ++s) {
    // Player II mixing after the best pure a
    auto atoms_b = random_mix(b_points);
    double expected = 0.0;
    for (const auto& [b, w] : atoms_b)
      expected += w * evaluate(g.payoff, Env::xab(x, best_a, b));
    report.max_b_violation = std::max(report.max_b_violation, expected - pure_sup);

    // Player I mixing over the outer choice
    auto atoms_a = random_mix(a_points);
    double expected_sharp = 0.0;
    bool defined = true;
    for (const auto& [a, w] : atoms_a) {
      auto it = f_sharp.find(a);
      if (it == f_sharp.end()) {
        defined = false;
        break;
      }
      expected_sharp += w * it->second;
    }
    if (defined) {
      report.max_a_violation = std::max(
          report.max_a_violation, rec.v_sharp.finite_value() - expected_sharp);
    }
  }
  return report;
}

}  // namespace saddlekit
