#pragma once

#include "kantorovich/numerics.hpp"

namespace kantorovich {

// Approximation index k >= 1 of the regularized problems.
class RegIndex {
 public:
  explicit RegIndex(double k);
  double value() const { return k_; }

 private:
  double k_;
};

// Pointwise dual quantities at one stress value. lambda = k * zeta = e^xi and
// theta = lambda * slope hold up to solver tolerance.
struct DualScalars {
  double theta = 0.0;
  double lambda = 1.0;
  double log_lambda = 0.0;
  double zeta = 1.0;
  double slope = 0.0;
  double xi = 0.0;
};

/// e^{k(s^2 - 1)/2} / k, evaluated in log space. Returns +inf on overflow.
double H(RegIndex k, double s);

/// Legendre conjugate zeta (ln(k zeta) - 1). With check_domain the argument
/// must lie in (0, 1/k].
double psi_star(RegIndex k, double zeta, bool check_domain = true);

/// lambda^2 (1 + (2/k) ln lambda) on [e^{-k/2}, 1]; strictly increasing there.
double E(RegIndex k, double lambda);

/// Inverse of E. The monotone solve runs in ln(lambda) over [-k/2, 0], which
/// is the same bracket as [e^{-k/2}, 1] but keeps relative accuracy when
/// lambda is tiny.
double E_inv(RegIndex k, double y, const Tolerances& tol = {});
double log_E_inv(RegIndex k, double y, const Tolerances& tol = {});

/// Unique s in [-1, 1] with s e^{k(s^2-1)/2} = theta. Solved in log form for
/// k > 50. Throws Error(InfeasibleStress) if |theta| > 1.
double slope_from_theta(RegIndex k, double theta, const Tolerances& tol = {});

/// E_inv(k, theta^2), and its logarithm (exact -k/2 at theta = 0).
double lambda_from_theta(RegIndex k, double theta, const Tolerances& tol = {});
double log_lambda_from_theta(RegIndex k, double theta, const Tolerances& tol = {});

/// s e^{k(s^2-1)/2}: the stress carried by slope s.
double stress_from_slope(RegIndex k, double s);

/// Slope and lambda computed by their two independent routes.
DualScalars dual_scalars(RegIndex k, double theta, const Tolerances& tol = {});

}  // namespace kantorovich
