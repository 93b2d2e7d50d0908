#pragma once

// Fixture problems and independent reference computations shared by the tests.
// Nothing here calls into the solver's numerics, so the references stay
// independent of the code under test.

#include <algorithm>
#include <cmath>
#include <functional>

#include "kantorovich/density.hpp"

namespace kt_test {

inline kantorovich::TransportProblem uniform_problem() {
  using namespace kantorovich;
  return make_problem(make_density(DensitySpec::uniform(0.0, 1.0)), make_density(DensitySpec::uniform(2.0, 3.0)));
}

inline kantorovich::TransportProblem cubic_problem() {
  using namespace kantorovich;
  return make_problem(make_density(DensitySpec::polynomial(0.0, 1.0, {0.0, 0.0, 3.0})),
                      make_density(DensitySpec::uniform(2.0, 3.0)));
}

// Plain bisection on an increasing function, run to the last representable split.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Tent for the fixtures: +min(x, 1 - x) on (0, 1), -min(x - 2, 3 - x) on (2, 3).
inline double fixture_tent(double x) {
  if (x >= 0.0 && x <= 1.0) return std::min(x, 1.0 - x);
  if (x >= 2.0 && x <= 3.0) return -std::min(x - 2.0, 3.0 - x);
  return 0.0;
}

}  // namespace kt_test
