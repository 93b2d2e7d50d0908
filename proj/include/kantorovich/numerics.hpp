#pragma once

#include <functional>
#include <span>

namespace kantorovich {

using RealFunction = std::function<double(double)>;

struct Tolerances {
  double quad_abs_tol = 1e-10;  // target for |Q - I| / (1 + |Q|)
  double root_abs_tol = 1e-12;  // final bracket width
  int max_quad_depth = 40;
  int max_root_iters = 200;

  // Throws Error(InvalidArgument) on nonpositive tolerances or caps.
  void validate() const;
};

struct Bracket {
  double lo;
  double hi;
};

struct QuadratureStats {
  long evaluations = 0;
  int max_depth = 0;
  double error_estimate = 0.0;
};

struct RootStats {
  int iterations = 0;
  double final_width = 0.0;
};

/// Globally adaptive Simpson quadrature of f over [lo, hi].
///
/// The interval with the largest local error estimate is bisected until the
/// summed estimate drops below quad_abs_tol * (1 + |Q|). Intervals that reach
/// max_quad_depth are frozen; if the target is still unmet a QuadratureError
/// is thrown carrying the best estimate. Returns -integral for lo > hi.
double integrate(const RealFunction& f, double lo, double hi, const Tolerances& tol,
                 QuadratureStats* stats = nullptr);

/// Same as integrate() but never straddles the given interior points, and
/// samples each piece as a one-sided limit at its ends, so f may jump at a
/// break. Points outside (lo, hi) are ignored. All pieces are refined from one
/// queue against the same global target.
double integrate_piecewise(const RealFunction& f, double lo, double hi,
                           std::span<const double> breaks, const Tolerances& tol,
                           QuadratureStats* stats = nullptr);

/// Root of a monotone function on a sign-changing bracket.
///
/// Illinois-modified regula falsi with a forced bisection whenever a step fails
/// to halve the bracket. Stops when the bracket is narrower than root_abs_tol
/// (or cannot be split in floating point) and returns the endpoint with the
/// smaller residual, so the result always lies in [lo, hi].
double find_root_monotone(const RealFunction& g, Bracket bracket, const Tolerances& tol,
                          RootStats* stats = nullptr);

}  // namespace kantorovich
