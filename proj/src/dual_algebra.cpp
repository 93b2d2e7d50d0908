#include "kantorovich/dual_algebra.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kantorovich/errors.hpp"

namespace kantorovich {

namespace {

constexpr double kLogFormThreshold = 50.0;

void check_theta(double theta) {
  if (!(std::abs(theta) <= 1.0)) {
    std::ostringstream msg;
    msg << "stress |theta|=" << std::abs(theta) << " exceeds 1; the slope bound |u_x| <= 1 cannot hold";
    throw Error(ErrorCode::InfeasibleStress, msg.str());
  }
}

// A few Newton steps after the bracketing solve. The bracketing result is only
// accurate to the root tolerance, and its noise gets amplified by anything that
// integrates the slope against steep test functions; the polished root is
// accurate to rounding and varies smoothly with its input.
template <class G, class DG>
double newton_polish(double x, double lo, double hi, G g, DG dg) {
  for (int i = 0; i < 3; ++i) {
    const double d = dg(x);
    if (!(d > 0.0) || !std::isfinite(d)) break;
    const double next = x - g(x) / d;
    if (!(next >= lo && next <= hi)) break;
    const bool done = std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x);
    x = next;
    if (done) break;
  }
  return x;
}

}  // namespace

RegIndex::RegIndex(double k) : k_(k) {
  if (!std::isfinite(k) || !(k >= 1.0)) {
    std::ostringstream msg;
    msg << "regularization index k=" << k << " must be finite and >= 1";
    throw Error(ErrorCode::Domain, msg.str());
  }
}

double H(RegIndex k, double s) {
  const double kv = k.value();
  const double log_h = 0.5 * kv * (s * s - 1.0) - std::log(kv);
  if (log_h > std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::infinity();
  return std::exp(log_h);
}

double psi_star(RegIndex k, double zeta, bool check_domain) {
  const double kv = k.value();
  if (check_domain && !(zeta > 0.0 && zeta <= (1.0 / kv) * (1.0 + 1e-15))) {
    std::ostringstream msg;
    msg << "zeta=" << zeta << " outside (0, 1/k] for k=" << kv;
    throw Error(ErrorCode::Domain, msg.str());
  }
  if (!(zeta > 0.0)) throw Error(ErrorCode::Domain, "psi_star needs zeta > 0");
  return zeta * (std::log(kv * zeta) - 1.0);
}

double E(RegIndex k, double lambda) {
  const double kv = k.value();
  const double lower = std::exp(-0.5 * kv);
  if (!(lambda >= lower * (1.0 - 1e-15) && lambda <= 1.0)) {
    std::ostringstream msg;
    msg << "lambda=" << lambda << " outside [e^{-k/2}, 1] for k=" << kv;
    throw Error(ErrorCode::Domain, msg.str());
  }
  if (lambda == 0.0) return 0.0;  // e^{-k/2} underflows for k > ~1490
  return std::max(0.0, lambda * lambda * (1.0 + (2.0 / kv) * std::log(lambda)));
}

double log_E_inv(RegIndex k, double y, const Tolerances& tol) {
  const double kv = k.value();
  if (!(y >= 0.0 && y <= 1.0)) {
    std::ostringstream msg;
    msg << "E_inv argument " << y << " outside [0, 1]";
    throw Error(ErrorCode::Domain, msg.str());
  }
  if (y == 0.0) return -0.5 * kv;
  if (y == 1.0) return 0.0;
  auto residual = [&](double ell) { return std::exp(2.0 * ell) * (1.0 + 2.0 * ell / kv) - y; };
  const double ell = find_root_monotone(residual, Bracket{-0.5 * kv, 0.0}, tol);
  // Log form 2l + ln(1 + 2l/k) = ln y, derivative 2 + 2/(k + 2l).
  const double log_y = std::log(y);
  return newton_polish(
      ell, -0.5 * kv, 0.0, [&](double l) { return 2.0 * l + std::log1p(2.0 * l / kv) - log_y; },
      [&](double l) { return 2.0 + 2.0 / (kv + 2.0 * l); });
}

double E_inv(RegIndex k, double y, const Tolerances& tol) { return std::exp(log_E_inv(k, y, tol)); }

double stress_from_slope(RegIndex k, double s) { return s * std::exp(0.5 * k.value() * (s * s - 1.0)); }

double slope_from_theta(RegIndex k, double theta, const Tolerances& tol) {
  check_theta(theta);
  if (theta == 0.0) return 0.0;
  const double a = std::abs(theta);
  if (a == 1.0) return theta;

  const double kv = k.value();
  // |g'(s)| <= 1 + k, so this bracket width bounds the stress residual by root_abs_tol.
  Tolerances local = tol;
  local.root_abs_tol = tol.root_abs_tol / (1.0 + kv);
  const double log_a = std::log(a);
  double s = 0.0;
  if (kv > kLogFormThreshold) {
    s = find_root_monotone([&](double x) { return std::log(x) + 0.5 * kv * (x * x - 1.0) - log_a; },
                           Bracket{a, 1.0}, local);
  } else {
    s = find_root_monotone([&](double x) { return x * std::exp(0.5 * kv * (x * x - 1.0)) - a; },
                           Bracket{a, 1.0}, local);
  }
  s = newton_polish(
      s, a, 1.0, [&](double x) { return std::log(x) + 0.5 * kv * (x * x - 1.0) - log_a; },
      [&](double x) { return 1.0 / x + kv * x; });
  return theta < 0.0 ? -s : s;
}

double log_lambda_from_theta(RegIndex k, double theta, const Tolerances& tol) {
  check_theta(theta);
  return log_E_inv(k, theta * theta, tol);
}

double lambda_from_theta(RegIndex k, double theta, const Tolerances& tol) {
  return std::exp(log_lambda_from_theta(k, theta, tol));
}

DualScalars dual_scalars(RegIndex k, double theta, const Tolerances& tol) {
  DualScalars d;
  d.theta = theta;
  d.slope = slope_from_theta(k, theta, tol);
  d.log_lambda = log_lambda_from_theta(k, theta, tol);
  d.lambda = std::exp(d.log_lambda);
  d.zeta = d.lambda / k.value();
  d.xi = 0.5 * k.value() * (d.slope * d.slope - 1.0);
  return d;
}

}  // namespace kantorovich
