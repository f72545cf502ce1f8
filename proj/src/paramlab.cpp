#include "saddlekit/paramlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace saddlekit {

void GameFamily::validate() const {
  if (x_grid.empty()) throw Error("family needs a nonempty x grid");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (!(x_grid[i] > x_grid[i - 1]))
      throw Error("x grid must be strictly increasing");
  if (!payoff) throw Error("family needs a payoff expression");
}

double set_distance(const std::vector<std::pair<double, double>>& s1,
                    const std::vector<std::pair<double, double>>& s2) {
  if (s1.empty() || s2.empty()) throw EmptyCluster("set distance of an empty cluster");

  // drop up to 0.01 of the lightest mass from the probed side
  std::vector<std::pair<double, double>> kept = s1;
  std::sort(kept.begin(), kept.end(),
            [](const auto& p, const auto& q) { return p.second < q.second; });
  double dropped = 0.0;
  std::size_t start = 0;
  while (start < kept.size() - 1 && dropped + kept[start].second <= 0.01) {
    dropped += kept[start].second;
    ++start;
  }

  double worst = 0.0;
  for (std::size_t i = start; i < kept.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& [point, weight] : s2)
      nearest = std::min(nearest, std::abs(kept[i].first - point));
    worst = std::max(worst, nearest);
  }
  return worst;
}

namespace {

struct LimitEstimate {
  bool ok = false;
  double value = 0.0;
};

// One-sided limit of h at x along offsets shrinking by factor 4; accepted
// once the last two evaluations agree to 10 * tol.
LimitEstimate one_sided_limit(const std::function<std::optional<double>(double)>& h,
                              double x, int direction, double scale, double tol) {
  LimitEstimate est;
  double prev = 0.0;
  bool have_prev = false;
  for (int j = 1; j <= 4; ++j) {
    double offset = scale * std::pow(4.0, -j);
    auto v = h(x + direction * offset);
    if (!v) return est;
    if (have_prev && std::abs(*v - prev) <= 10.0 * tol) {
      est.ok = true;
      est.value = *v;
      return est;
    }
    prev = *v;
    have_prev = true;
  }
  est.ok = have_prev;
  est.value = prev;
  return est;
}

std::vector<double> probe_actions(const DomainDecl& d, int n) {
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
      double lo = std::isfinite(d.lo) ? d.lo : -4.0;
      double hi = std::isfinite(d.hi) ? d.hi : 4.0;
      if (hi == lo) return {lo};
      for (int i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * i / (n - 1));
      return pts;
    }
  }
  throw Error("corrupt domain declaration");
}

std::string format_witness(double x, double a, double b, const char* what) {
  std::ostringstream msg;
  msg << what << " at x=" << x << ", a=" << a << ", b=" << b;
  return msg.str();
}

}  // namespace

AssumptionReport classify_assumptions(const GameFamily& fam, int probes,
                                      const SearchBudget& budget) {
  fam.validate();
  AssumptionReport report;
  report.a_lsc_of_phi_b.status = AssumptionStatus::StructurallySatisfied;
  report.a_lsc_of_phi_b.witness = "B(x) is action-independent in this family model";

  const double tol = 1e-6;
  int per_axis = std::max(3, probes / 16);

  // shared probe material
  std::vector<double> x_probes = fam.x_grid;
  std::vector<double> mids;
  for (std::size_t i = 1; i < x_probes.size(); ++i)
    mids.push_back(0.5 * (x_probes[i - 1] + x_probes[i]));
  x_probes.insert(x_probes.end(), mids.begin(), mids.end());
  std::sort(x_probes.begin(), x_probes.end());
  double spacing = fam.x_grid.size() > 1
                       ? (fam.x_grid.back() - fam.x_grid.front()) /
                             (fam.x_grid.size() - 1)
                       : 1.0;

  auto value_at = [&](double x, double a, double b) -> std::optional<double> {
    try {
      return evaluate(fam.payoff, Env::xab(x, a, b));
    } catch (const EvalError& err) {
      if (err.is_domain_error() || err.kind == EvalErrorKind::Overflow)
        return std::nullopt;
      throw;
    }
  };

  // A1: declared through payoff lsc + coercivity in a
  if (!(fam.flags.c_lsc && fam.flags.a_coercive_in_a)) {
    report.a1.status = AssumptionStatus::NotDeclared;
  } else {
    report.a1.status = AssumptionStatus::DeclaredAndUnrefuted;
    for (double x : fam.x_grid) {
      if (report.a1.status == AssumptionStatus::Refuted) break;
      DomainDecl a_dom = fam.a_set(x);
      DomainDecl b_dom = fam.b_set(x);
      for (double a : probe_actions(a_dom, per_axis)) {
        for (double b : probe_actions(b_dom, per_axis)) {
          auto here = value_at(x, a, b);
          if (!here) continue;
          for (int dir : {-1, +1}) {
            auto lim = one_sided_limit(
                [&](double xq) { return value_at(xq, a, b); }, x, dir, spacing,
                budget.series_tol);
            if (lim.ok && *here > lim.value + tol) {
              report.a1.status = AssumptionStatus::Refuted;
              report.a1.witness = format_witness(x, a, b, "payoff fails lsc in x");
              break;
            }
          }
          if (report.a1.status == AssumptionStatus::Refuted) break;
        }
        if (report.a1.status == AssumptionStatus::Refuted) break;
      }
      // coercivity spot check along unbounded a ends
      if (report.a1.status != AssumptionStatus::Refuted && !a_dom.compact()) {
        Expr sliced = substitute(fam.payoff, Var::X, x);
        CoercivityCertificate cert = probe_coercivity(
            sliced, a_dom, b_dom, {b_dom.reference_point(), 0.0, 1.0});
        if (!cert.all_confirmed()) {
          report.a1.status = AssumptionStatus::Refuted;
          std::ostringstream msg;
          msg << "growth in a refuted at x=" << x << ", b0=" << cert.anchor_b0;
          report.a1.witness = msg.str();
        }
      }
    }
  }

  // A2: payoff usc through the direct graph
  if (!fam.flags.c_usc) {
    report.a2.status = AssumptionStatus::NotDeclared;
  } else {
    report.a2.status = AssumptionStatus::DeclaredAndUnrefuted;
    for (double x : fam.x_grid) {
      if (report.a2.status == AssumptionStatus::Refuted) break;
      DomainDecl a_dom = fam.a_set(x);
      DomainDecl b_dom = fam.b_set(x);
      for (double a : probe_actions(a_dom, per_axis)) {
        for (double b : probe_actions(b_dom, per_axis)) {
          auto here = value_at(x, a, b);
          if (!here) continue;
          for (int dir : {-1, +1}) {
            auto lim = one_sided_limit(
                [&](double xq) { return value_at(xq, a, b); }, x, dir, spacing,
                budget.series_tol);
            if (lim.ok && *here < lim.value - tol) {
              report.a2.status = AssumptionStatus::Refuted;
              std::ostringstream msg;
              msg << "payoff fails usc in x at x=" << x << ", a=" << a << ", b=" << b
                  << " (approach from " << (dir > 0 ? "above" : "below") << ")";
              report.a2.witness = msg.str();
              break;
            }
          }
          if (report.a2.status == AssumptionStatus::Refuted) break;
        }
        if (report.a2.status == AssumptionStatus::Refuted) break;
      }
    }
  }

  // A3/A4: endpoint behavior of the action mappings
  auto mapping_check = [&](const ConstraintMapping& map, bool declared,
                           const char* name) {
    AssumptionFinding finding;
    if (!declared) {
      finding.status = AssumptionStatus::NotDeclared;
      return finding;
    }
    finding.status = AssumptionStatus::DeclaredAndUnrefuted;
    if (map.form == ConstraintMapping::Form::TwoPoint) return finding;
    auto endpoint = [&](const Expr& e, double x,
                        double fallback) -> std::optional<double> {
      if (!e) return fallback;
      try {
        return evaluate(e, Env{x, {}, {}});
      } catch (const EvalError& err) {
        if (err.is_domain_error() || err.kind == EvalErrorKind::Overflow)
          return std::nullopt;
        throw;
      }
    };
    for (double x : fam.x_grid) {
      auto lo_here = endpoint(map.lo, x, map.ambient.lo);
      auto hi_here = endpoint(map.hi, x, map.ambient.hi);
      if (!lo_here || !hi_here) continue;
      for (int dir : {-1, +1}) {
        // lower semicontinuity of the set: no end may jump inward in the limit
        auto lo_lim = one_sided_limit(
            [&](double xq) {
              auto v = endpoint(map.lo, xq, map.ambient.lo);
              return v;
            },
            x, dir, spacing, budget.series_tol);
        auto hi_lim = one_sided_limit(
            [&](double xq) {
              auto v = endpoint(map.hi, xq, map.ambient.hi);
              return v;
            },
            x, dir, spacing, budget.series_tol);
        bool lo_jump = lo_lim.ok && std::isfinite(*lo_here) &&
                       std::isfinite(lo_lim.value) && lo_lim.value > *lo_here + tol;
        bool hi_jump = hi_lim.ok && std::isfinite(*hi_here) &&
                       std::isfinite(hi_lim.value) && hi_lim.value < *hi_here - tol;
        if (lo_jump || hi_jump) {
          finding.status = AssumptionStatus::Refuted;
          std::ostringstream msg;
          msg << name << " endpoint jumps inward at x=" << x;
          finding.witness = msg.str();
          return finding;
        }
      }
    }
    return finding;
  };
  report.a3 = mapping_check(fam.a_map, fam.flags.a_lsc_mapping, "A(x)");
  report.a4 = mapping_check(fam.b_map, fam.flags.b_lsc_mapping, "B(x)");

  return report;
}

namespace {

struct FamilySolver {
  const GameFamily& fam;
  const SweepOptions& options;
  std::map<double, SweepRecord> memo;
  std::mutex mu;

  SweepRecord solve_at(double x) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(x);
      if (it != memo.end()) return it->second;
    }
    SweepRecord rec;
    rec.x = x;
    try {
      Expr sliced = substitute(fam.payoff, Var::X, x);
      DomainDecl a_dom = fam.a_set(x);
      DomainDecl b_dom = fam.b_set(x);
      SaddleCertificate cert = solve_zero_sum(sliced, a_dom, b_dom, options.tol,
                                              options.refinement, options.search);
      rec.v = cert.value;
      rec.eps = cert.eps;
      rec.gap_sharp = cert.sharp_minus_value;
      rec.gap_flat = cert.value_minus_flat;
      rec.converged = cert.converged;
      rec.a_atoms = cert.pi_a.atoms;
      rec.b_atoms = cert.pi_b.atoms;
      rec.a_box_lo = cert.a_box.lo;
      rec.a_box_hi = cert.a_box.hi;
      if (!cert.pi_a.atoms.empty()) {
        rec.a_support_lo = cert.pi_a.atoms.front().first;
        rec.a_support_hi = cert.pi_a.atoms.back().first;
        for (const auto& [p, w] : cert.pi_a.atoms) {
          rec.a_support_lo = std::min(rec.a_support_lo, p);
          rec.a_support_hi = std::max(rec.a_support_hi, p);
        }
      }
    } catch (const Error& err) {
      rec.error = err.what();
    }
    {
      std::lock_guard<std::mutex> lock(mu);
      memo.emplace(x, rec);
    }
    return rec;
  }

  std::optional<double> value_at(double x) {
    SweepRecord rec = solve_at(x);
    if (!rec.error.empty()) return std::nullopt;
    return rec.v;
  }
};

std::vector<std::pair<double, double>> cluster_atoms(
    const std::vector<std::pair<double, double>>& atoms, double gap) {
  if (atoms.empty()) return atoms;
  std::vector<std::pair<double, double>> sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  double center = sorted[0].first * sorted[0].second;
  double mass = sorted[0].second;
  double last = sorted[0].first;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].first - last <= gap) {
      center += sorted[i].first * sorted[i].second;
      mass += sorted[i].second;
    } else {
      out.emplace_back(center / mass, mass);
      center = sorted[i].first * sorted[i].second;
      mass = sorted[i].second;
    }
    last = sorted[i].first;
  }
  out.emplace_back(center / mass, mass);
  return out;
}

}  // namespace

SweepReport sweep(const GameFamily& fam, SweepProfile profile,
                  const SweepOptions& options) {
  fam.validate();
  SweepReport report;
  report.profile = profile;
  report.assumptions = classify_assumptions(fam, options.probes, options.search);

  auto required_ok = [](const AssumptionFinding& f) {
    return f.status == AssumptionStatus::DeclaredAndUnrefuted ||
           f.status == AssumptionStatus::StructurallySatisfied;
  };
  std::ostringstream missing;
  if (!required_ok(report.assumptions.a1)) missing << " A1";
  if (!required_ok(report.assumptions.a4)) missing << " A4";
  if (profile == SweepProfile::Continuity) {
    if (!required_ok(report.assumptions.a2)) missing << " A2";
    if (!required_ok(report.assumptions.a3)) missing << " A3";
    if (!fam.flags.b_compact) missing << " b_compact";
  }
  if (!missing.str().empty())
    throw Error("sweep profile requirements not met:" + missing.str());

  double diag_tol = options.diag_tol > 0 ? options.diag_tol : 5.0 * options.tol;
  double jump_floor = 10.0 * options.tol;

  FamilySolver solver{fam, options, {}, {}};

  // per-x solves; slots keep the aggregation order deterministic
  report.records.resize(fam.x_grid.size());
  {
    int jobs = std::max(1, options.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= fam.x_grid.size()) break;
        report.records[i] = solver.solve_at(fam.x_grid[i]);
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  double spacing = fam.x_grid.size() > 1 ? fam.x_grid[1] - fam.x_grid[0] : 1.0;

  // adjacent jumps: refine until they shrink below the floor (continuous) or
  // persist in a vanishing bracket (a genuine discontinuity)
  std::vector<double> suspicious;  // grid points named by localized jumps
  for (std::size_t i = 1; i < fam.x_grid.size(); ++i) {
    const SweepRecord& left = report.records[i - 1];
    const SweepRecord& right = report.records[i];
    if (!left.error.empty() || !right.error.empty()) continue;
    if (std::abs(right.v - left.v) <= jump_floor) continue;

    double lo = left.x, hi = right.x;
    double v_lo = left.v, v_hi = right.v;
    bool persists = true;
    double prev_jump = std::abs(v_hi - v_lo);
    int shrink_streak = 0;
    for (int depth = 0; depth < 24 && hi - lo > 1e-9; ++depth) {
      double mid = 0.5 * (lo + hi);
      auto vm = solver.value_at(mid);
      if (!vm) break;
      double jump_left = std::abs(*vm - v_lo);
      double jump_right = std::abs(v_hi - *vm);
      double jump = std::max(jump_left, jump_right);
      if (jump <= jump_floor) {
        persists = false;
        break;
      }
      // a jump scaling down with the bracket is Lipschitz growth, not a break
      shrink_streak = jump <= 0.7 * prev_jump ? shrink_streak + 1 : 0;
      if (shrink_streak >= 3) {
        persists = false;
        break;
      }
      prev_jump = jump;
      if (jump_left >= jump_right) {
        hi = mid;
        v_hi = *vm;
      } else {
        lo = mid;
        v_lo = *vm;
      }
    }
    if (persists) {
      double locus = 0.5 * (lo + hi);
      double nearest = fam.x_grid[0];
      for (double xg : fam.x_grid)
        if (std::abs(xg - locus) < std::abs(nearest - locus)) nearest = xg;
      suspicious.push_back(nearest);
    }
  }
  std::sort(suspicious.begin(), suspicious.end());
  suspicious.erase(std::unique(suspicious.begin(), suspicious.end()),
                   suspicious.end());

  // one-sided limits at the suspicious grid points decide lsc vs usc failure
  for (double xg : suspicious) {
    auto rec_it = std::find_if(report.records.begin(), report.records.end(),
                               [&](const SweepRecord& r) { return r.x == xg; });
    if (rec_it == report.records.end() || !rec_it->error.empty()) continue;
    double here = rec_it->v;
    bool interior_lo = xg > fam.x_grid.front();
    bool interior_hi = xg < fam.x_grid.back();
    std::optional<double> limit_lo, limit_hi;
    if (interior_lo) {
      auto est = one_sided_limit([&](double xq) { return solver.value_at(xq); }, xg,
                                 -1, spacing, options.tol);
      if (est.ok) limit_lo = est.value;
    }
    if (interior_hi) {
      auto est = one_sided_limit([&](double xq) { return solver.value_at(xq); }, xg,
                                 +1, spacing, options.tol);
      if (est.ok) limit_hi = est.value;
    }
    double lim_min = std::numeric_limits<double>::infinity();
    double lim_max = -std::numeric_limits<double>::infinity();
    for (const auto& lim : {limit_lo, limit_hi}) {
      if (!lim) continue;
      lim_min = std::min(lim_min, *lim);
      lim_max = std::max(lim_max, *lim);
    }
    if (std::isfinite(lim_min) && here > lim_min + diag_tol) {
      report.lsc_violations.push_back(
          {xg, here - lim_min, "value exceeds a one-sided limit"});
    }
    if (std::isfinite(lim_max) && here < lim_max - diag_tol) {
      report.usc_violations.push_back(
          {xg, lim_max - here, "one-sided limit exceeds the value"});
    }
    if (!(std::isfinite(lim_min) && here > lim_min + diag_tol) &&
        !(std::isfinite(lim_max) && here < lim_max - diag_tol)) {
      // jump persisted but the grid point itself matches both limits: name it
      // a continuity break anyway
      report.usc_violations.push_back(
          {xg, 0.0, "refinement-stable jump adjacent to this grid point"});
    }
  }

  // solution-multifunction upper semicontinuity via shrinking set distances
  for (std::size_t i = 0; i < fam.x_grid.size(); ++i) {
    const SweepRecord& rec = report.records[i];
    if (!rec.error.empty() || rec.a_atoms.empty()) continue;
    double cluster_gap =
        std::max(1e-6, 2.0 * (rec.a_box_hi - rec.a_box_lo) /
                           std::max<long>(32, 1));
    auto base = cluster_atoms(rec.a_atoms, cluster_gap);
    double worst = 0.0;
    bool shrinking = true;
    double prev = -1.0;
    for (double delta : {spacing / 8.0, spacing / 32.0}) {
      double d_here = 0.0;
      for (int dir : {-1, +1}) {
        double xq = rec.x + dir * delta;
        if (xq < fam.x_grid.front() || xq > fam.x_grid.back()) continue;
        SweepRecord nb = solver.solve_at(xq);
        if (!nb.error.empty() || nb.a_atoms.empty()) continue;
        d_here = std::max(d_here, set_distance(cluster_atoms(nb.a_atoms, cluster_gap),
                                               base));
      }
      worst = std::max(worst, d_here);
      if (prev >= 0 && d_here > 0.8 * prev && d_here > options.set_tol)
        shrinking = false;
      prev = d_here;
    }
    if (!shrinking && worst > options.set_tol) {
      report.multifunction_usc_violations.push_back(
          {rec.x, worst, "solution clusters do not localize near this state"});
    }
  }

  report.lsc_pass = report.lsc_violations.empty();
  report.continuity_pass =
      report.lsc_violations.empty() && report.usc_violations.empty();
  return report;
}

}  // namespace saddlekit
