#include <cmath>

#include "doctest.h"
#include "kantorovich/density.hpp"
#include "kantorovich/errors.hpp"
#include "support.hpp"

using namespace kantorovich;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::vector<Density> normalized_samples() {
  return {
      make_density(DensitySpec::uniform(0.0, 1.0)),
      make_density(DensitySpec::polynomial(0.0, 1.0, {0.0, 0.0, 3.0})),
      normalize(make_density(DensitySpec::polynomial(2.0, 5.0, {1.0, 0.5, -0.05}))),
      normalize(make_density(DensitySpec::tabulated({0.0, 0.3, 0.5, 1.2}, {0.2, 2.0, 0.7, 1.1}))),
  };
}

}  // namespace

TEST_SUITE("density") {
  TEST_CASE("make_density computes mass and the normalized flag") {
    const Density u = make_density(DensitySpec::uniform(0.0, 1.0));
    CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.normalized());
    const Density cubic = make_density(DensitySpec::polynomial(0.0, 1.0, {0.0, 0.0, 3.0}));
    CHECK(std::abs(cubic.mass() - 1.0) <= 1e-12);
    CHECK(cubic.normalized());
    const Density wide = make_density(DensitySpec::uniform(2.0, 4.0));
    CHECK(wide.mass() == doctest::Approx(2.0));
    CHECK_FALSE(wide.normalized());
  }

  TEST_CASE("normalize rescales and is idempotent") {
    const Density n = normalize(make_density(DensitySpec::uniform(2.0, 4.0)));
    CHECK(n(3.0) == doctest::Approx(0.5));
    CHECK(n.mass() == doctest::Approx(1.0).epsilon(1e-14));
    const Density u = make_density(DensitySpec::uniform(0.0, 1.0));
    const Density again = normalize(u);
    CHECK(again.spec().height == u.spec().height);
    CHECK(again.mass() == u.mass());
    const Density lin = normalize(make_density(DensitySpec::polynomial(0.0, 2.0, {0.0, 2.0})));
    REQUIRE(lin.spec().coefficients.size() == 2);
    CHECK(lin.spec().coefficients[0] == 0.0);
    CHECK(lin.spec().coefficients[1] == doctest::Approx(0.5));
  }

  TEST_CASE("cdf examples") {
    const Density u = make_density(DensitySpec::uniform(0.0, 1.0));
    CHECK(u.cdf(0.3) == doctest::Approx(0.3).epsilon(1e-15));
    const Density cubic = make_density(DensitySpec::polynomial(0.0, 1.0, {0.0, 0.0, 3.0}));
    CHECK(std::abs(cubic.cdf(0.5) - 0.125) <= 1e-14);
    for (const Density& d : normalized_samples()) {
      CHECK(std::abs(d.cdf(d.interval().lo)) <= 1e-9);
      CHECK(std::abs(d.cdf(d.interval().hi) - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("cdf is strictly increasing on a 1025-point grid") {
    for (const Density& d : normalized_samples()) {
      const Interval iv = d.interval();
      double prev = d.cdf(iv.lo);
      for (int i = 1; i <= 1024; ++i) {
        const double x = i == 1024 ? iv.hi : iv.lo + iv.length() * i / 1024.0;
        const double c = d.cdf(x);
        CHECK(c > prev);
        prev = c;
      }
    }
  }

  TEST_CASE("tabulated cdf matches direct quadrature of the linear interpolant") {
    const Density d = normalize(make_density(DensitySpec::tabulated({0.0, 0.3, 0.5, 1.2}, {0.2, 2.0, 0.7, 1.1})));
    for (double x : {0.1, 0.3, 0.45, 0.9, 1.1}) {
      const double reference = kt_test::simpson([&](double t) { return d(t); }, 0.0, x, 20000);
      // Exact at nodes; inside a cell the shape-preserving cubic may differ slightly.
      CHECK(std::abs(d.cdf(x) - reference) <= 2e-3);
    }
    CHECK(std::abs(d.cdf(0.3) - kt_test::simpson([&](double t) { return d(t); }, 0.0, 0.3, 20000)) <= 1e-9);
  }

  TEST_CASE("inverse_cdf examples and round trip") {
    const Density u = make_density(DensitySpec::uniform(0.0, 1.0));
    CHECK(u.inverse_cdf(0.5) == doctest::Approx(0.5));
    CHECK(u.inverse_cdf(0.0) == 0.0);
    const Density cubic = make_density(DensitySpec::polynomial(0.0, 1.0, {0.0, 0.0, 3.0}));
    CHECK(std::abs(cubic.inverse_cdf(0.125) - 0.5) <= 1e-10);
    CHECK(cubic.inverse_cdf(0.0) == 0.0);
    for (const Density& d : normalized_samples()) {
      const Interval iv = d.interval();
      for (int i = 0; i <= 64; ++i) {
        const double x = iv.lo + iv.length() * i / 64.0;
        CHECK(std::abs(d.inverse_cdf(d.cdf(x)) - x) <= 1e-8);
      }
    }
  }

  TEST_CASE("invalid specs are rejected with the right error") {
    CHECK(code_of([] { make_density(DensitySpec::uniform(1.0, 1.0)); }) == ErrorCode::Domain);
    CHECK(code_of([] { make_density(DensitySpec::uniform(0.0, 1.0, -2.0)); }) == ErrorCode::Positivity);
    CHECK(code_of([] { make_density(DensitySpec::polynomial(0.0, 1.0, {0.5, -1.0})); }) == ErrorCode::Positivity);
    CHECK(code_of([] { make_density(DensitySpec::tabulated({0.0, 1.0}, {1.0, 0.0})); }) == ErrorCode::Positivity);
    CHECK(code_of([] { make_density(DensitySpec::tabulated({0.0, 0.5, 0.4}, {1.0, 1.0, 1.0})); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([] { make_density(DensitySpec::tabulated({0.0}, {1.0})); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("cdf outside the interval is a domain error") {
    const Density u = make_density(DensitySpec::uniform(0.0, 1.0));
    CHECK(code_of([&] { u.cdf(1.5); }) == ErrorCode::Domain);
    CHECK(code_of([&] { u.inverse_cdf(1.5); }) == ErrorCode::Domain);
  }

  TEST_CASE("validate_problem classifies layouts") {
    const Density u01 = make_density(DensitySpec::uniform(0.0, 1.0));
    auto layout_with = [&](double lo) {
      return validate_problem(make_problem(u01, make_density(DensitySpec::uniform(lo, lo + 1.0))));
    };
    const ProblemDiagnostics disjoint = layout_with(2.0);
    CHECK(disjoint.layout == Layout::Disjoint);
    CHECK_FALSE(disjoint.experimental);
    const ProblemDiagnostics touching = layout_with(1.0);
    CHECK(touching.layout == Layout::Touching);
    CHECK(touching.experimental);
    const ProblemDiagnostics overlapping = layout_with(0.5);
    CHECK(overlapping.layout == Layout::Overlapping);
    CHECK(overlapping.experimental);
  }

  TEST_CASE("validate_problem rejects unbalanced masses") {
    const TransportProblem p =
        make_problem(make_density(DensitySpec::uniform(0.0, 1.0, 2.0)), make_density(DensitySpec::uniform(2.0, 3.0)));
    CHECK(code_of([&] { validate_problem(p); }) == ErrorCode::Balance);
  }

  TEST_CASE("problem measure is the total support length") {
    CHECK(kt_test::uniform_problem().measure() == 2.0);
  }
}
