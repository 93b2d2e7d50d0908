#include <cmath>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "kantorovich/errors.hpp"
#include "kantorovich/numerics.hpp"
#include "support.hpp"

using namespace kantorovich;

TEST_SUITE("numerics") {
  TEST_CASE("integrate reproduces elementary integrals") {
    const Tolerances tol;
    CHECK(integrate([](double) { return 0.0; }, 0.0, 1.0, tol) == 0.0);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 3.0, tol) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(integrate([](double x) { return 3.0 * x * x; }, 0.0, 0.5, tol) - 0.125) <= 1e-12);
    CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, tol) - 2.0) <= 1e-10);
  }

  TEST_CASE("integrate reverses orientation and handles empty ranges") {
    const Tolerances tol;
    auto f = [](double x) { return std::exp(x); };
    CHECK(integrate(f, 1.0, 0.0, tol) == doctest::Approx(-(std::exp(1.0) - 1.0)).epsilon(1e-12));
    CHECK(integrate(f, 0.7, 0.7, tol) == 0.0);
  }

  TEST_CASE("integrate is additive within three tolerances") {
    const Tolerances tol;
    auto f = [](double x) { return std::exp(-x * x) * (1.0 + std::cos(7.0 * x)); };
    for (double b : {0.1, 0.37, 0.5, 0.93}) {
      const double whole = integrate(f, 0.0, 1.0, tol);
      const double parts = integrate(f, 0.0, b, tol) + integrate(f, b, 1.0, tol);
      CHECK(std::abs(whole - parts) <= 3.0 * tol.quad_abs_tol);
    }
  }

  TEST_CASE("integrate handles a kink when adaptivity localizes it") {
    const Tolerances tol;
    auto f = [](double x) { return std::abs(x - 0.3); };
    CHECK(std::abs(integrate(f, 0.0, 1.0, tol) - (0.045 + 0.245)) <= 1e-9);
  }

  TEST_CASE("integrate_piecewise respects jumps placed on breaks") {
    const Tolerances tol;
    auto step = [](double x) { return x < 0.4 ? 1.0 : 5.0; };
    const double breaks[] = {0.4};
    CHECK(std::abs(integrate_piecewise(step, 0.0, 1.0, breaks, tol) - (0.4 + 3.0)) <= 1e-12);
    // A value defined only by its one-sided limits: f(0.4) itself is wildly off.
    auto spike = [](double x) { return x == 0.4 ? 1e9 : 1.0; };
    CHECK(std::abs(integrate_piecewise(spike, 0.0, 1.0, breaks, tol) - 1.0) <= 1e-12);
  }

  TEST_CASE("integrate_piecewise ignores breaks outside the range") {
    const Tolerances tol;
    const double breaks[] = {-1.0, 0.0, 2.0};
    CHECK(integrate_piecewise([](double x) { return x; }, 0.0, 1.0, breaks, tol) == doctest::Approx(0.5));
  }

  TEST_CASE("integrate is deterministic") {
    const Tolerances tol;
    auto f = [](double x) { return std::log1p(x) * std::sin(3.0 * x); };
    const double a = integrate(f, 0.0, 2.0, tol);
    const double b = integrate(f, 0.0, 2.0, tol);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }

  TEST_CASE("integrate reports non-finite integrands and limits") {
    const Tolerances tol;
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, tol), Error);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, INFINITY, tol), Error);
  }

  TEST_CASE("integrate gives up on a non-integrable spike with the best estimate attached") {
    Tolerances tol;
    tol.max_quad_depth = 12;
    try {
      integrate([](double x) { return 1.0 / std::sqrt(std::abs(x - 1.0 / 3.0)); }, 0.0, 1.0, tol);
      FAIL("expected a QuadratureError");
    } catch (const QuadratureError& e) {
      CHECK(e.code() == ErrorCode::Quadrature);
      CHECK(std::isfinite(e.estimate()));
      CHECK(e.error_bound() > 0.0);
    }
  }

  TEST_CASE("find_root_monotone solves the reference problems") {
    const Tolerances tol;
    CHECK(std::abs(find_root_monotone([](double x) { return x - 0.5; }, {0.0, 1.0}, tol) - 0.5) <= 1e-12);
    CHECK(std::abs(find_root_monotone([](double x) { return x * x * x - 0.125; }, {0.0, 1.0}, tol) - 0.5) <= 1e-12);
    auto g = [](double x) { return x * x * (1.0 + std::log(x)) - 0.25; };
    const double reference = kt_test::bisect(g, std::exp(-1.0), 1.0);
    CHECK(reference == doctest::Approx(0.6568).epsilon(1e-4));
    CHECK(std::abs(find_root_monotone(g, {std::exp(-1.0), 1.0}, tol) - reference) <= 1e-12);
  }

  TEST_CASE("find_root_monotone stays inside the bracket") {
    const Tolerances tol;
    // Very flat on one side, steep on the other: regula falsi alone would stall.
    auto g = [](double x) { return std::pow(x, 15.0) - 1e-9; };
    const double r = find_root_monotone(g, {0.0, 1.0}, tol);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    CHECK(std::abs(r - std::pow(1e-9, 1.0 / 15.0)) <= 1e-10);
    // Root on an endpoint.
    const double e = find_root_monotone([](double x) { return x - 1.0; }, {0.0, 1.0}, tol);
    CHECK(e == 1.0);
  }

  TEST_CASE("find_root_monotone handles decreasing functions") {
    const Tolerances tol;
    CHECK(std::abs(find_root_monotone([](double x) { return 0.25 - x * x; }, {0.0, 1.0}, tol) - 0.5) <= 1e-12);
  }

  TEST_CASE("find_root_monotone rejects brackets without a sign change") {
    const Tolerances tol;
    CHECK_THROWS_AS(find_root_monotone([](double x) { return x + 1.0; }, {0.0, 1.0}, tol), Error);
    CHECK_THROWS_AS(find_root_monotone([](double x) { return x; }, {1.0, 0.0}, tol), Error);
    try {
      find_root_monotone([](double x) { return x + 1.0; }, {0.0, 1.0}, tol);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Bracket);
    }
  }

  TEST_CASE("find_root_monotone is deterministic") {
    const Tolerances tol;
    auto g = [](double x) { return std::tanh(4.0 * x) - 0.3; };
    const double a = find_root_monotone(g, {-1.0, 1.0}, tol);
    const double b = find_root_monotone(g, {-1.0, 1.0}, tol);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }

  TEST_CASE("tolerances are validated") {
    Tolerances tol;
    CHECK_NOTHROW(tol.validate());
    tol.quad_abs_tol = 0.0;
    CHECK_THROWS_AS(tol.validate(), Error);
    tol = Tolerances{};
    tol.max_root_iters = 0;
    CHECK_THROWS_AS(tol.validate(), Error);
  }
}
