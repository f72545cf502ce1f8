#include "saddlekit/continuous_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace saddlekit {

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int j = 0; j <= 40; ++j) r.push_back(std::ldexp(1.0, j));
  return r;
}

namespace {

// c(t, b0) with overflow mapped to a signed huge value so growth probes can
// use it as evidence instead of aborting.
std::optional<double> slice_value(const Expr& c, double t, double b0) {
  try {
    return evaluate(c, Env::ab(t, b0));
  } catch (const EvalError& err) {
    if (err.kind == EvalErrorKind::Overflow && err.overflow_sign != 0)
      return err.overflow_sign * std::numeric_limits<double>::max();
    if (err.is_domain_error()) return std::nullopt;
    throw;
  }
}

CoercivityCertificate::EndReport probe_end(const Expr& c, const DomainDecl& axis,
                                           double anchor, double b0, int direction,
                                           const std::vector<double>& radii) {
  CoercivityCertificate::EndReport report;
  report.direction = direction;

  double last = 0.0;
  bool have_last = false;
  int trailing_increase = 0;
  bool any_decrease = false;
  double last_decrease_at = 0.0;
  const double huge = std::numeric_limits<double>::max();

  for (double r : radii) {
    double t = anchor + direction * r;
    if (axis.kind == DomainDecl::Kind::IntegerRange) t = std::rint(t);
    if ((direction < 0 && t < axis.lo) || (direction > 0 && t > axis.hi)) break;
    auto v = slice_value(c, t, b0);
    if (!v) continue;
    report.samples.emplace_back(t, *v);
    // a slice escaping the double range settles the question for this end
    if (*v >= huge) {
      trailing_increase = 4;
      break;
    }
    if (*v <= -huge) {
      trailing_increase = 0;
      any_decrease = true;
      last_decrease_at = t;
      break;
    }
    if (have_last) {
      if (*v > last) {
        ++trailing_increase;
      } else {
        trailing_increase = 0;
        any_decrease = true;
        last_decrease_at = t;
      }
    }
    last = *v;
    have_last = true;
  }

  if (trailing_increase >= 4) {
    report.status = CoercivityCertificate::EndStatus::GrowthConfirmed;
  } else if (any_decrease) {
    report.status = CoercivityCertificate::EndStatus::GrowthRefuted;
    report.counter_point = last_decrease_at;
  } else {
    report.status = CoercivityCertificate::EndStatus::Inconclusive;
  }
  return report;
}

}  // namespace

CoercivityCertificate probe_coercivity(const Expr& c, const DomainDecl& axis,
                                       const DomainDecl& opponent,
                                       const std::vector<double>& candidates_b0,
                                       const std::vector<double>& radii) {
  std::vector<int> open_ends;
  if (!axis.bounded_below()) open_ends.push_back(-1);
  if (!axis.bounded_above()) open_ends.push_back(+1);

  CoercivityCertificate best;
  best.axis_domain = axis;
  best.radii = radii;

  std::vector<double> candidates;
  for (double b0 : candidates_b0)
    if (opponent.contains(b0)) candidates.push_back(b0);
  if (candidates.empty()) candidates.push_back(opponent.reference_point());
  best.anchor_b0 = candidates.front();

  if (open_ends.empty()) return best;  // compact axis: trivially confirmed

  double anchor = axis.reference_point();
  bool first = true;
  for (double b0 : candidates) {
    CoercivityCertificate cert;
    cert.axis_domain = axis;
    cert.anchor_b0 = b0;
    cert.radii = radii;
    for (int dir : open_ends)
      cert.ends.push_back(probe_end(c, axis, anchor, b0, dir, radii));
    if (cert.all_confirmed()) return cert;
    if (first) {
      best = cert;
      first = false;
    }
  }
  return best;
}

LevelTruncation truncate(const Expr& c, const CoercivityCertificate& cert,
                         double lambda) {
  const DomainDecl& axis = cert.axis_domain;
  double b0 = cert.anchor_b0;
  double anchor = axis.reference_point();

  LevelTruncation out;
  out.lambda = lambda;
  out.a_box = {axis.bounded_below() ? axis.lo : anchor,
               axis.bounded_above() ? axis.hi : anchor};
  out.b_box = {-std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity()};

  if (axis.bounded_below() && axis.bounded_above()) return out;

  // locate a point inside the level set
  std::optional<double> inner;
  auto consider = [&](double t) {
    if (inner) return;
    auto v = slice_value(c, t, b0);
    if (v && *v <= lambda) inner = t;
  };
  consider(anchor);
  for (const auto& end : cert.ends)
    for (const auto& [t, v] : end.samples) {
      if (v <= lambda && !inner) inner = t;
    }
  if (!inner) throw LambdaTooSmall("level set is empty over the probed range");

  for (const auto& end : cert.ends) {
    if (end.status != CoercivityCertificate::EndStatus::GrowthConfirmed)
      throw CoercivityUnavailable("truncation requires confirmed growth on open ends");

    // walk outward until the slice exceeds the level
    double in = *inner;
    std::optional<double> outp;
    for (double r : cert.radii) {
      double t = *inner + end.direction * r;
      auto v = slice_value(c, t, b0);
      if (v && *v > lambda) {
        outp = t;
        break;
      }
      if (v && *v <= lambda) in = t;
    }
    double endpoint;
    if (!outp) {
      endpoint = in;  // growth confirmed but level never crossed in range: keep the frontier
    } else {
      double lo = in, hi = *outp;
      for (int step = 0; step < 64; ++step) {
        double mid = 0.5 * (lo + hi);
        auto v = slice_value(c, mid, b0);
        if (v && *v <= lambda)
          lo = mid;
        else
          hi = mid;
      }
      endpoint = lo;
    }
    if (end.direction < 0)
      out.a_box.lo = endpoint;
    else
      out.a_box.hi = endpoint;
  }
  if (out.a_box.lo > out.a_box.hi) std::swap(out.a_box.lo, out.a_box.hi);
  return out;
}

namespace {

std::vector<double> axis_points(const DomainDecl& domain, const Box& box, int n,
                                const std::vector<double>& extras) {
  std::vector<double> pts;
  switch (domain.kind) {
    case DomainDecl::Kind::FiniteSet:
      for (double p : domain.points)
        if (p >= box.lo && p <= box.hi) pts.push_back(p);
      if (pts.empty()) pts = domain.points;
      return pts;
    case DomainDecl::Kind::IntegerRange: {
      double lo = std::max(std::ceil(box.lo), domain.lo);
      double hi = std::min(std::floor(box.hi), domain.hi);
      if (lo > hi) lo = hi = std::rint(domain.reference_point());
      long count = 0;
      for (double t = lo; t <= hi && count < 20000; t += 1.0, ++count)
        pts.push_back(t);
      return pts;
    }
    case DomainDecl::Kind::RealLine:
    case DomainDecl::Kind::Interval: {
      double lo = std::max(box.lo, domain.lo);
      double hi = std::min(box.hi, domain.hi);
      if (!(hi >= lo)) {
        lo = hi = domain.reference_point();
      }
      if (hi == lo) {
        pts.push_back(lo);
        return pts;
      }
      double step = (hi - lo) / (n - 1);
      for (int i = 0; i < n; ++i) pts.push_back(lo + i * step);
      pts.back() = hi;
      for (double e : extras)
        if (std::isfinite(e) && e > lo && e < hi) pts.push_back(e);
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      return pts;
    }
  }
  throw Error("corrupt domain declaration");
}

MixedStrategy strategy_from_lp(const Eigen::VectorXd& weights,
                               const std::vector<double>& points) {
  std::vector<std::pair<double, double>> atoms;
  double total = 0.0;
  for (long i = 0; i < weights.size(); ++i) {
    if (weights(i) > 1e-12) {
      atoms.emplace_back(points[static_cast<std::size_t>(i)], weights(i));
      total += weights(i);
    }
  }
  if (atoms.empty() || total <= 0)
    throw NumericalFailure("grid strategy lost all mass", 0.0);
  for (auto& [p, w] : atoms) w /= total;
  return MixedStrategy::finite(std::move(atoms));
}

bool near_edge(double point, const Box& box, double step, bool lo_is_hard,
               bool hi_is_hard) {
  double margin = 2.0 * step;
  if (!lo_is_hard && point - box.lo <= margin) return true;
  if (!hi_is_hard && box.hi - point <= margin) return true;
  return false;
}

}  // namespace

SaddleCertificate solve_zero_sum(const Expr& c, const DomainDecl& a_domain,
                                 const DomainDecl& b_domain, double tol,
                                 const RefinementBudget& budget,
                                 const SearchBudget& search) {
  // axis certificates (compact axes come back trivially confirmed)
  std::vector<double> b_candidates = {b_domain.reference_point(), 0.0, 1.0, -1.0};
  CoercivityCertificate cert_a =
      probe_coercivity(c, a_domain, b_domain, b_candidates);
  if (!cert_a.all_confirmed())
    throw CoercivityUnavailable(
        "payoff slice a -> c(a, b0) shows no confirmed growth on an open end");

  Expr swapped = make_unary(UnaryFn::Neg, swap_ab(c));
  std::vector<double> a_candidates = {a_domain.reference_point(), 0.0, 1.0, -1.0};
  CoercivityCertificate cert_b =
      probe_coercivity(swapped, b_domain, a_domain, a_candidates);
  if (!cert_b.all_confirmed())
    throw CoercivityUnavailable(
        "swapped slice b -> -c(a0, b) shows no confirmed growth on an open end");

  double a_ref = a_domain.reference_point();
  double b_ref = b_domain.reference_point();
  double lambda = 0.0;
  if (budget.lambda0) {
    lambda = *budget.lambda0;
  } else {
    double seed_a = 0.0, seed_b = 0.0;
    if (auto v = slice_value(c, a_ref, cert_a.anchor_b0)) seed_a = *v + 1.0;
    if (auto v = slice_value(swapped, b_ref, cert_b.anchor_b0)) seed_b = *v + 1.0;
    lambda = std::max({seed_a, seed_b, 0.0});
  }

  std::vector<double> extras = literal_constants(c);
  extras.push_back(0.0);

  SaddleCertificate best;
  best.eps = std::numeric_limits<double>::infinity();
  bool have_best = false;

  int n_points = 33;

  for (int k = 0; k <= budget.max_refine; ++k) {
    Box a_box, b_box;
    if (a_domain.compact()) {
      a_box = {a_domain.lo, a_domain.hi};
    } else {
      a_box = truncate(c, cert_a, lambda).a_box;
      if (a_box.width() < 1e-9) {  // degenerate level set: widen before gridding
        a_box.lo -= std::max(tol, 1e-9);
        a_box.hi += std::max(tol, 1e-9);
      }
    }
    if (b_domain.compact()) {
      b_box = {b_domain.lo, b_domain.hi};
    } else {
      b_box = truncate(swapped, cert_b, lambda).a_box;
      if (b_box.width() < 1e-9) {
        b_box.lo -= std::max(tol, 1e-9);
        b_box.hi += std::max(tol, 1e-9);
      }
    }

    std::vector<double> a_pts = axis_points(a_domain, a_box, n_points, extras);
    std::vector<double> b_pts = axis_points(b_domain, b_box, n_points, extras);

    MatrixGame grid_game;
    grid_game.payoff.resize(static_cast<long>(a_pts.size()),
                            static_cast<long>(b_pts.size()));
    for (std::size_t i = 0; i < a_pts.size(); ++i)
      for (std::size_t j = 0; j < b_pts.size(); ++j)
        grid_game.payoff(static_cast<long>(i), static_cast<long>(j)) =
            evaluate(c, Env::ab(a_pts[i], b_pts[j]));
    grid_game.row_points = a_pts;
    grid_game.col_points = b_pts;

    MatrixSolution lp = solve_lp(grid_game, 1e-9);
    MixedStrategy pi_a = strategy_from_lp(lp.row_strategy, a_pts);
    MixedStrategy pi_b = strategy_from_lp(lp.col_strategy, b_pts);

    SupResult sharp = c_sharp_search(c, pi_a, b_domain, search);
    SupResult flat = c_flat_search(c, pi_b, a_domain, search);

    SaddleCertificate cert;
    cert.pi_a = pi_a;
    cert.pi_b = pi_b;
    cert.value = lp.value;
    cert.lambda = lambda;
    cert.a_box = a_box;
    cert.b_box = b_box;
    cert.refinements = k;
    cert.grid_rows = grid_game.rows();
    cert.grid_cols = grid_game.cols();
    if (sharp.sup.is_finite() && flat.sup.is_finite()) {
      cert.sharp_minus_value = sharp.sup.finite_value() - lp.value;
      cert.value_minus_flat = lp.value - flat.sup.finite_value();
      cert.eps = sharp.sup.finite_value() - flat.sup.finite_value();
    } else {
      cert.eps = std::numeric_limits<double>::infinity();
      cert.sharp_minus_value = std::numeric_limits<double>::infinity();
      cert.value_minus_flat = std::numeric_limits<double>::infinity();
    }

    if (!have_best || cert.eps < best.eps) {
      best = cert;
      have_best = true;
    }
    if (cert.eps <= tol) {
      best.converged = true;
      return best;
    }

    // grow the level only while the solution presses a truncation edge;
    // otherwise keep the box and let the grid density do the work
    bool boundary_active = false;
    double a_step = a_pts.size() > 1 ? (a_box.hi - a_box.lo) / (a_pts.size() - 1) : 0;
    double b_step = b_pts.size() > 1 ? (b_box.hi - b_box.lo) / (b_pts.size() - 1) : 0;
    if (!a_domain.compact()) {
      for (const auto& [p, w] : pi_a.atoms)
        if (w > 1e-6 && near_edge(p, a_box, a_step, a_domain.bounded_below(),
                                  a_domain.bounded_above()))
          boundary_active = true;
      if (flat.sup.is_finite() &&
          near_edge(flat.arg, a_box, a_step, a_domain.bounded_below(),
                    a_domain.bounded_above()))
        boundary_active = true;
      if (flat.sup.is_finite() && (flat.arg < a_box.lo || flat.arg > a_box.hi))
        boundary_active = true;
    }
    if (!b_domain.compact()) {
      for (const auto& [p, w] : pi_b.atoms)
        if (w > 1e-6 && near_edge(p, b_box, b_step, b_domain.bounded_below(),
                                  b_domain.bounded_above()))
          boundary_active = true;
      if (sharp.sup.is_finite() &&
          near_edge(sharp.arg, b_box, b_step, b_domain.bounded_below(),
                    b_domain.bounded_above()))
        boundary_active = true;
      if (sharp.sup.is_finite() && (sharp.arg < b_box.lo || sharp.arg > b_box.hi))
        boundary_active = true;
    }
    if (!sharp.sup.is_finite() || !flat.sup.is_finite()) boundary_active = true;

    bool grid_can_grow = n_points < budget.max_grid_points;
    if (boundary_active) lambda = 2.0 * lambda + 1.0;
    if (grid_can_grow) n_points = 2 * n_points - 1;
    if (!boundary_active && !grid_can_grow) break;  // nothing left to refine
  }

  best.converged = best.eps <= tol;
  return best;
}

bool verify_saddle(const Expr& c, const SaddleCertificate& cert,
                   const DomainDecl& a_domain, const DomainDecl& b_domain,
                   double tol, const SearchBudget& search) {
  SearchBudget dense = search;
  dense.grid_points = search.grid_points * 4 + 1;
  dense.golden_iters = search.golden_iters + 20;
  ExtendedPayoff sharp = c_sharp(c, cert.pi_a, b_domain, dense);
  ExtendedPayoff flat = c_flat(c, cert.pi_b, a_domain, dense);
  if (!sharp.is_finite() || !flat.is_finite()) return false;
  return sharp.finite_value() - flat.finite_value() <= tol;
}

}  // namespace saddlekit
