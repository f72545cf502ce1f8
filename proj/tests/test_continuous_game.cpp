#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "saddlekit/continuous_game.hpp"

using namespace saddlekit;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("coercivity probe: quadratic saddle confirms both ends") {
  Expr c = parse_expression("a^2 - b^2");
  CoercivityCertificate cert =
      probe_coercivity(c, DomainDecl::reals(), DomainDecl::reals(), {0.0});
  CHECK(cert.anchor_b0 == 0.0);
  REQUIRE(cert.ends.size() == 2);
  CHECK(cert.all_confirmed());
}

TEST_CASE("coercivity probe: linear-in-a slice is refuted on the low end") {
  Expr c = parse_expression("a + b^2");
  CoercivityCertificate cert =
      probe_coercivity(c, DomainDecl::reals(), DomainDecl::reals(), {0.0});
  REQUIRE(cert.ends.size() == 2);
  bool low_refuted = false;
  for (const auto& end : cert.ends) {
    if (end.direction < 0)
      low_refuted = end.status == CoercivityCertificate::EndStatus::GrowthRefuted;
  }
  CHECK(low_refuted);
  CHECK(!cert.all_confirmed());
}

TEST_CASE("coercivity probe: payoff independent of b") {
  Expr c = parse_expression("a^2 + 0*b");
  CoercivityCertificate cert =
      probe_coercivity(c, DomainDecl::reals(), DomainDecl::reals(), {3.0, 0.0});
  CHECK(cert.all_confirmed());
  CHECK(cert.anchor_b0 == 3.0);  // first candidate that works is kept
}

TEST_CASE("compact axis needs no probe") {
  Expr c = parse_expression("a^2 - b^2");
  CoercivityCertificate cert = probe_coercivity(c, DomainDecl::interval(0, 1),
                                                DomainDecl::reals(), {0.0});
  CHECK(cert.all_confirmed());
  CHECK(cert.ends.empty());
}

TEST_CASE("truncation of the quadratic level set") {
  Expr c = parse_expression("a^2 - b^2");
  CoercivityCertificate cert =
      probe_coercivity(c, DomainDecl::reals(), DomainDecl::reals(), {0.0});
  LevelTruncation t = truncate(c, cert, 4.0);
  CHECK(t.a_box.lo == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(t.a_box.hi == doctest::Approx(2.0).epsilon(1e-12));

  LevelTruncation zero = truncate(c, cert, 0.0);
  CHECK(std::abs(zero.a_box.lo) <= 1e-9);
  CHECK(std::abs(zero.a_box.hi) <= 1e-9);
}

TEST_CASE("truncation of a shifted quadratic against a bisection oracle") {
  Expr c = parse_expression("(a-3)^2 - b^2");
  CoercivityCertificate cert =
      probe_coercivity(c, DomainDecl::reals(), DomainDecl::reals(), {0.0});
  LevelTruncation t = truncate(c, cert, 1.0);

  // oracle: bisect (a-3)^2 = 1 from the inside out
  auto bisect = [](double inner, double outer) {
    for (int i = 0; i < 80; ++i) {
      double mid = 0.5 * (inner + outer);
      if ((mid - 3) * (mid - 3) <= 1.0)
        inner = mid;
      else
        outer = mid;
    }
    return inner;
  };
  double lo_oracle = bisect(3.0, -100.0);
  double hi_oracle = bisect(3.0, 100.0);
  CHECK(lo_oracle == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(hi_oracle == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(t.a_box.lo == doctest::Approx(lo_oracle).epsilon(1e-9));
  CHECK(t.a_box.hi == doctest::Approx(hi_oracle).epsilon(1e-9));
}

TEST_CASE("lambda below the slice minimum is rejected") {
  Expr c = parse_expression("a^2 - b^2");
  CoercivityCertificate cert =
      probe_coercivity(c, DomainDecl::reals(), DomainDecl::reals(), {0.0});
  CHECK_THROWS_AS(truncate(c, cert, -1.0), LambdaTooSmall);
}

TEST_CASE("quadratic saddle on the whole plane solves to value 0") {
  Expr c = parse_expression("a^2 - b^2");
  SaddleCertificate cert =
      solve_zero_sum(c, DomainDecl::reals(), DomainDecl::reals(), 1e-4);
  CHECK(cert.converged);
  CHECK(std::abs(cert.value) <= 1e-4);
  CHECK(cert.eps <= 1e-4);

  auto mass_near_zero = [](const MixedStrategy& s) {
    double m = 0;
    for (const auto& [p, w] : s.atoms)
      if (std::abs(p) <= 0.05) m += w;
    return m;
  };
  CHECK(mass_near_zero(cert.pi_a) >= 0.99);
  CHECK(mass_near_zero(cert.pi_b) >= 0.99);
  CHECK(verify_saddle(c, cert, DomainDecl::reals(), DomainDecl::reals(), 1e-3));
}

TEST_CASE("box-constrained quadratic agrees with the dense-grid oracle") {
  Expr c = parse_expression("a^2 - b^2");
  DomainDecl a_dom = DomainDecl::interval(1, 2);
  DomainDecl b_dom = DomainDecl::interval(0, 1);
  double oracle = testing::dense_grid_value(
      [](double a, double b) { return a * a - b * b; }, 1, 2, 0, 1, 201);
  SaddleCertificate cert = solve_zero_sum(c, a_dom, b_dom, 1e-4);
  CHECK(cert.converged);
  CHECK(std::abs(cert.value - oracle) <= 3e-4);
  CHECK(std::abs(cert.value - 1.0) <= 1e-4);  // pure saddle at (1, 0)
}

TEST_CASE("finite domains reduce to the matrix game") {
  Expr c = parse_expression("[a==b] - [a<b] - [a>b]");
  DomainDecl two = DomainDecl::finite_set({0, 1});
  SaddleCertificate cert = solve_zero_sum(c, two, two, 1e-9);
  CHECK(cert.converged);
  MatrixGame g = MatrixGame::from_rows({{1, -1}, {-1, 1}});
  CHECK(cert.value == doctest::Approx(solve_lp(g).value).epsilon(1e-9));
}

TEST_CASE("verify_saddle rejects non-optimal point masses") {
  Expr c = parse_expression("a^2 - b^2");
  SaddleCertificate fake;
  fake.pi_a = MixedStrategy::delta(1);
  fake.pi_b = MixedStrategy::delta(0);
  fake.value = 0.5;
  CHECK(!verify_saddle(c, fake, DomainDecl::reals(), DomainDecl::reals(), 1e-3));
  CHECK(verify_saddle(c, fake, DomainDecl::reals(), DomainDecl::reals(), kInf));
}

TEST_CASE("weak duality holds on every certificate emitted here") {
  for (const char* text : {"a^2 - b^2", "(a-3)^2 - b^2", "(a-1)^2 - (b+2)^2 + 3"}) {
    Expr c = parse_expression(text);
    SaddleCertificate cert =
        solve_zero_sum(c, DomainDecl::reals(), DomainDecl::reals(), 1e-4);
    double sharp = c_sharp(c, cert.pi_a, DomainDecl::reals()).finite_value();
    double flat = c_flat(c, cert.pi_b, DomainDecl::reals()).finite_value();
    CHECK(flat <= cert.value + 1e-9);
    CHECK(cert.value <= sharp + 1e-9);
  }
}

TEST_CASE("swap antisymmetry for the continuous solver") {
  Expr c = parse_expression("(a-1)^2 - (b+2)^2 + 3");
  DomainDecl reals = DomainDecl::reals();
  SaddleCertificate base = solve_zero_sum(c, reals, reals, 1e-4);
  CHECK(base.converged);
  CHECK(base.value == doctest::Approx(3.0).epsilon(2e-4));

  Expr swapped = make_unary(UnaryFn::Neg, swap_ab(c));
  SaddleCertificate mirror = solve_zero_sum(swapped, reals, reals, 1e-4);
  CHECK(mirror.converged);
  CHECK(std::abs(mirror.value + base.value) <= 2e-4);
  CHECK(verify_saddle(swapped, mirror, reals, reals, 1e-3));
}

TEST_CASE("grid consistency on a compact smooth game") {
  Expr c = parse_expression("a^2 - b^2 + a*b/2");
  DomainDecl box = DomainDecl::interval(-1, 1);
  SaddleCertificate cert = solve_zero_sum(c, box, box, 1e-4);
  CHECK(cert.converged);
  double oracle = testing::dense_grid_value(
      [](double a, double b) { return a * a - b * b + a * b / 2; }, -1, 1, -1, 1,
      1025);
  CHECK(std::abs(cert.value - oracle) <= 3e-4);
}

TEST_CASE("coercivity failure is reported, not silently mangled") {
  Expr c = parse_expression("a + b^2");  // not inf-compact in a
  CHECK_THROWS_AS(
      solve_zero_sum(c, DomainDecl::reals(), DomainDecl::reals(), 1e-4),
      CoercivityUnavailable);
}

TEST_CASE("running example solves to its pure saddle") {
  Expr c = parse_expression("6^a*4^b*[b<a] - 6^b*4^a*[a<b]");
  DomainDecl naturals = DomainDecl::integer_range(1, kInf);
  SaddleCertificate cert = solve_zero_sum(c, naturals, naturals, 1e-6);
  CHECK(cert.converged);
  CHECK(std::abs(cert.value) <= 1e-6);
}
