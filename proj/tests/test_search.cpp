#include <doctest.h>

#include <cmath>
#include <limits>

#include "saddlekit/search.hpp"

using namespace saddlekit;

namespace {

ScalarObjective wrap(double (*f)(double)) {
  return [f](double t) { return ExtendedPayoff::finite(f(t)); };
}

}  // namespace

TEST_CASE("sup on a finite interval refines past the grid") {
  // max of -(t - 0.3123)^2 sits at an off-grid point
  ScalarObjective f = [](double t) {
    return ExtendedPayoff::finite(-(t - 0.3123) * (t - 0.3123));
  };
  SupResult r = scalar_sup(f, DomainDecl::interval(-1, 1), {}, SearchBudget{});
  REQUIRE(r.sup.is_finite());
  CHECK(r.sup.finite_value() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.arg == doctest::Approx(0.3123).epsilon(1e-6));
}

TEST_CASE("sup detects growth on the real line") {
  SupResult r = scalar_sup(wrap([](double t) { return t * t; }),
                           DomainDecl::reals(), {}, SearchBudget{});
  CHECK(r.sup.is_plus_infinity());
}

TEST_CASE("concave slice on the real line stays finite") {
  SupResult r = scalar_sup(wrap([](double t) { return -t * t; }),
                           DomainDecl::reals(), {}, SearchBudget{});
  REQUIRE(r.sup.is_finite());
  CHECK(r.sup.finite_value() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("linear growth over a half line") {
  SupResult r = scalar_sup(wrap([](double t) { return t; }),
                           DomainDecl::interval(0, std::numeric_limits<double>::infinity()),
                           {}, SearchBudget{});
  CHECK(r.sup.is_plus_infinity());
}

TEST_CASE("bounded increasing function is not mistaken for growth") {
  // increments shrink, so the confirmed-growth rule must not fire
  SupResult r = scalar_sup(wrap([](double t) { return -1.0 / (1.0 + std::abs(t)); }),
                           DomainDecl::interval(1, std::numeric_limits<double>::infinity()),
                           {}, SearchBudget{});
  REQUIRE(r.sup.is_finite());
  CHECK(r.sup.finite_value() < 0.0);
}

TEST_CASE("integer enumeration with growth detection") {
  DomainDecl naturals = DomainDecl::integer_range(1, std::numeric_limits<double>::infinity());
  SupResult growth = scalar_sup(wrap([](double t) { return std::pow(1.5, t); }),
                                naturals, {}, SearchBudget{});
  CHECK(growth.sup.is_plus_infinity());

  SupResult decay = scalar_sup(wrap([](double t) { return 10.0 - t; }),
                               naturals, {}, SearchBudget{});
  REQUIRE(decay.sup.is_finite());
  CHECK(decay.sup.finite_value() == doctest::Approx(9.0));
  CHECK(decay.arg == 1.0);
}

TEST_CASE("finite sets are enumerated exactly") {
  SupResult r = scalar_sup(wrap([](double t) { return -(t - 2) * (t - 2); }),
                           DomainDecl::finite_set({0, 1, 3, 7}), {}, SearchBudget{});
  REQUIRE(r.sup.is_finite());
  CHECK(r.sup.finite_value() == doctest::Approx(-1.0));
  // 1 and 3 tie; the deterministic pick is the first, both are reported
  CHECK(r.arg == 1.0);
  REQUIRE(r.near_optimal.size() == 2);
  CHECK(r.near_optimal[0] == 1.0);
  CHECK(r.near_optimal[1] == 3.0);
}

TEST_CASE("inf mirrors sup") {
  SupResult r = scalar_inf(wrap([](double t) { return (t - 4) * (t - 4) + 2; }),
                           DomainDecl::reals(), {}, SearchBudget{});
  REQUIRE(r.sup.is_finite());
  CHECK(r.sup.finite_value() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.arg == doctest::Approx(4.0).epsilon(1e-5));

  SupResult unbounded = scalar_inf(wrap([](double t) { return -(t * t); }),
                                   DomainDecl::reals(), {}, SearchBudget{});
  CHECK(unbounded.sup.is_minus_infinity());
}

TEST_CASE("extra seed points pin indicator breakpoints") {
  // spike of zero width on the grid scale, exactly at the seeded point
  ScalarObjective f = [](double t) {
    return ExtendedPayoff::finite(t == 0.737 ? 5.0 : 0.0);
  };
  SupResult with_seed =
      scalar_sup(f, DomainDecl::interval(0, 1), {0.737}, SearchBudget{});
  REQUIRE(with_seed.sup.is_finite());
  CHECK(with_seed.sup.finite_value() == doctest::Approx(5.0));
}

TEST_CASE("undefined samples poison the search result") {
  ScalarObjective f = [](double t) {
    if (t > 0.5) return ExtendedPayoff::undefined();
    return ExtendedPayoff::finite(t);
  };
  SupResult r = scalar_sup(f, DomainDecl::interval(0, 1), {}, SearchBudget{});
  CHECK(r.sup.is_undefined());
}

TEST_CASE("golden section narrows to interior maxima") {
  auto f = [](double t) { return ExtendedPayoff::finite(std::sin(t)); };
  auto [arg, val] = golden_section_max(f, 1.0, 2.0, 60);
  CHECK(arg == doctest::Approx(1.5707963267948966).epsilon(1e-8));
  CHECK(val == doctest::Approx(1.0).epsilon(1e-12));
}
