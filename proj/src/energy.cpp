#include "kantorovich/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "kantorovich/errors.hpp"

namespace kantorovich {

namespace {

double side_sign(Side side) { return side == Side::Source ? 1.0 : -1.0; }

void require_certified(const PotentialSolution& sol) {
  if (sol.experimental())
    throw Error(ErrorCode::Unsupported, "energy functionals are only certified for the disjoint layout");
}

double integrate_side(const RealFunction& f, Interval iv, const std::vector<double>& breaks,
                      const Tolerances& tol) {
  return integrate_piecewise(f, iv.lo, iv.hi, breaks, tol);
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// theta^2 / lambda from ln|theta| and ln(lambda); exact zero at theta = 0.
double theta_sq_over_lambda(double theta, double log_lambda) {
  if (theta == 0.0) return 0.0;
  return std::exp(2.0 * std::log(std::abs(theta)) - log_lambda);
}

TestFunction piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  std::vector<double> slopes(xs.size() - 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) slopes[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
  auto locate = [xs](double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(i, xs.size() - 2);
  };
  TestFunction t;
  t.value = [xs, ys, slopes, locate](double x) {
    const std::size_t i = locate(x);
    return ys[i] + slopes[i] * (x - xs[i]);
  };
  t.derivative = [slopes, locate](double x) { return slopes[locate(x)]; };
  t.breaks.assign(xs.begin() + 1, xs.end() - 1);
  return t;
}

}  // namespace

TrialPair trial_from_solution(const PotentialSolution& sol) {
  require_certified(sol);
  auto make = [&sol](const SidePotential& p) {
    const RegIndex k = sol.k();
    const Tolerances tol = sol.tolerances();
    const DualField field = p.field;
    Trial t;
    // Exact rather than interpolated: the nearest grid node (or the apex, so the
    // short integral never crosses it) plus the integral of the slope from there.
    // The cubic interpolant is too coarse near the apex for moderate k.
    Tolerances inner = tol;
    inner.quad_abs_tol = 1e-3 * tol.quad_abs_tol;
    t.u = [piece = &p, k, tol, inner, field](double x) {
      const SidePotential& q = *piece;
      if (x <= q.x.front()) return q.u.front();
      if (x >= q.x.back()) return q.u.back();
      const double h = q.spacing();
      const auto i = static_cast<std::size_t>(std::clamp(std::round((x - q.x.front()) / h), 0.0, double(q.x.size() - 1)));
      double anchor = q.x[i];
      double value = q.u[i];
      if ((anchor - q.apex) * (x - q.apex) < 0.0 || std::abs(x - q.apex) < std::abs(x - anchor)) {
        anchor = q.apex;
        value = q.u_apex;
      }
      if (x == anchor) return value;
      return value + integrate([&](double y) { return slope_from_theta(k, field.theta_at(y), tol); }, anchor, x, inner);
    };
    t.du = [k, tol, field](double x) { return slope_from_theta(k, field.theta_at(x), tol); };
    t.breaks = {p.apex};
    return t;
  };
  return TrialPair{make(sol.source()), make(sol.sink())};
}

DualVariablePair critical_dual_variable(const PotentialSolution& sol) {
  require_certified(sol);
  auto make = [&sol](const SidePotential& p) -> RealFunction {
    const RegIndex k = sol.k();
    const Tolerances tol = sol.tolerances();
    const DualField field = p.field;
    return [k, tol, field](double x) { return log_lambda_from_theta(k, field.theta_at(x), tol); };
  };
  return DualVariablePair{make(sol.source()), make(sol.sink())};
}

DualVariablePair dual_variable_from_zeta(RegIndex k, RealFunction source_zeta, RealFunction sink_zeta) {
  auto wrap = [k](RealFunction zeta) -> RealFunction {
    return [k, zeta](double x) {
      const double z = zeta(x);
      if (!(z > 0.0)) {
        std::ostringstream msg;
        msg << "zeta=" << z << " at x=" << x << " is not positive";
        throw Error(ErrorCode::Domain, msg.str());
      }
      return std::log(k.value() * z);
    };
  };
  return DualVariablePair{wrap(std::move(source_zeta)), wrap(std::move(sink_zeta))};
}

double primal_energy(RegIndex k, const TrialPair& w, const TransportProblem& problem, const Tolerances& tol,
                     SideEnergies* source, SideEnergies* sink) {
  auto side = [&](const Trial& t, const Density& d, Side s) {
    const double sign = side_sign(s);
    return integrate_side([&](double x) { return H(k, t.du(x)) - sign * d(x) * t.u(x); }, d.interval(),
                          t.breaks, tol);
  };
  const double ps = side(w.source, problem.source, Side::Source);
  const double pk = side(w.sink, problem.sink, Side::Sink);
  if (source) source->primal = ps;
  if (sink) sink->primal = pk;
  return ps + pk;
}

double primal_energy(const PotentialSolution& sol) {
  return primal_energy(sol.k(), trial_from_solution(sol), sol.problem(), sol.tolerances());
}

double dual_energy(const PotentialSolution& sol, SideEnergies* source, SideEnergies* sink) {
  require_certified(sol);
  const RegIndex k = sol.k();
  const double kv = k.value();
  const Tolerances& tol = sol.tolerances();
  auto side = [&](const SidePotential& p) {
    const DualField& field = p.field;
    return integrate_side(
        [&](double x) {
          const double theta = field.theta_at(x);
          const double ell = log_lambda_from_theta(k, theta, tol);
          const double lambda = std::exp(ell);
          return -0.5 * (theta_sq_over_lambda(theta, ell) + lambda + (2.0 / kv) * lambda * (ell - 1.0));
        },
        p.interval(), {p.apex}, tol);
  };
  const double ds = side(sol.source());
  const double dk = side(sol.sink());
  if (source) source->dual = ds;
  if (sink) sink->dual = dk;
  return ds + dk;
}

double total_complementary(RegIndex k, const TrialPair& u, const DualVariablePair& dual,
                           const TransportProblem& problem, const Tolerances& tol, SideEnergies* source,
                           SideEnergies* sink) {
  const double kv = k.value();
  auto side = [&](const Trial& t, const RealFunction& log_lambda, const Density& d, Side s) {
    const double sign = side_sign(s);
    return integrate_side(
        [&](double x) {
          const double ell = log_lambda(x);
          if (!std::isfinite(ell) || ell > 1e-15) {
            std::ostringstream msg;
            msg << "dual variable k*zeta=exp(" << ell << ") at x=" << x << " lies outside (0, 1]";
            throw Error(ErrorCode::Domain, msg.str());
          }
          const double lambda = std::exp(ell);
          const double du = t.du(x);
          const double phi_zeta = 0.5 * (du * du - 1.0) * lambda;  // Phi(u) * zeta
          const double psi = lambda * (ell - 1.0) / kv;            // Psi*(zeta)
          return phi_zeta - psi - sign * d(x) * t.u(x);
        },
        d.interval(), t.breaks, tol);
  };
  const double xs = side(u.source, dual.source_log_lambda, problem.source, Side::Source);
  const double xk = side(u.sink, dual.sink_log_lambda, problem.sink, Side::Sink);
  if (source) source->complementary = xs;
  if (sink) sink->complementary = xk;
  return xs + xk;
}

double kantorovich_value(const TrialPair& u, const TransportProblem& problem, const Tolerances& tol,
                         SideEnergies* source, SideEnergies* sink) {
  const double ks = integrate_side([&](double x) { return u.source.u(x) * problem.source(x); },
                                   problem.source.interval(), u.source.breaks, tol);
  const double kk = -integrate_side([&](double x) { return u.sink.u(x) * problem.sink(x); },
                                    problem.sink.interval(), u.sink.breaks, tol);
  if (source) source->kantorovich = ks;
  if (sink) sink->kantorovich = kk;
  return ks + kk;
}

double kantorovich_value(const PotentialSolution& sol) {
  return kantorovich_value(trial_from_solution(sol), sol.problem(), sol.tolerances());
}

namespace {

// Central differences are only consistent where the density is smooth over the
// whole stencil; tabulated densities have slope jumps at their nodes, which
// would otherwise show up as an O(h) residual unrelated to the solution.
bool stencil_is_smooth(const Density& d, double left, double right) {
  if (d.spec().kind != DensityKind::Tabulated) return true;
  const auto& nodes = d.spec().nodes;
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), left);
  return it == nodes.end() || !(*it < right);
}

ElResidual residual_from_slopes(const PotentialSolution& sol, const std::function<double(const SidePotential&, std::size_t)>& slope) {
  const RegIndex k = sol.k();
  ElResidual r;
  for (const SidePotential& p : sol.pieces()) {
    const std::size_t n = p.x.size();
    const double h = p.spacing();
    const double sign = side_sign(p.side());
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = stress_from_slope(k, slope(p, i));
      r.exact = std::max(r.exact, std::abs(g[i] - p.theta[i]));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (!stencil_is_smooth(p.field.density(), p.x[i - 1], p.x[i + 1])) continue;
      const double dg = (g[i + 1] - g[i - 1]) / (2.0 * h);
      r.conservation = std::max(r.conservation, std::abs(dg + sign * p.field.density_at(p.x[i])));
    }
  }
  return r;
}

}  // namespace

ElResidual el_residual(const PotentialSolution& sol, const std::function<double(Side, double)>& slope) {
  return residual_from_slopes(sol, [&](const SidePotential& p, std::size_t i) { return slope(p.side(), p.x[i]); });
}

ElResidual el_residual(const PotentialSolution& sol) {
  return residual_from_slopes(sol, [](const SidePotential& p, std::size_t i) { return p.eta[i]; });
}

double second_variation_primal(const PotentialSolution& sol, const TestFunctionPair& phi) {
  require_certified(sol);
  const RegIndex k = sol.k();
  const double kv = k.value();
  const Tolerances& tol = sol.tolerances();
  auto side = [&](const SidePotential& p, const TestFunction& t) {
    const DualField& field = p.field;
    return integrate_side(
        [&](double x) {
          const double dphi = t.derivative(x);
          if (dphi == 0.0) return 0.0;
          const double s = slope_from_theta(k, field.theta_at(x), tol);
          return std::exp(0.5 * kv * (s * s - 1.0)) * (kv * s * s + 1.0) * dphi * dphi;
        },
        p.interval(), merged({p.apex}, t.breaks), tol);
  };
  return side(sol.source(), phi.source) + side(sol.sink(), phi.sink);
}

double second_variation_dual(const PotentialSolution& sol, const TestFunctionPair& psi) {
  require_certified(sol);
  const RegIndex k = sol.k();
  const double kv = k.value();
  const double log_k = std::log(kv);
  const Tolerances& tol = sol.tolerances();
  auto side = [&](const SidePotential& p, const TestFunction& t) {
    const DualField& field = p.field;
    const Interval iv = p.interval();
    const double c = *field.constant();
    const double sign = side_sign(p.side());
    // x where theta equals tau.
    auto x_of_theta = [&](double tau) { return field.zero_location(c - sign * tau, tol); };

    // Away from the apex, in x: |theta| >= theta_w keeps 1/lambda <= 1/theta_w.
    const double theta_w = 0.5 * std::min(std::abs(field.theta_at(iv.lo)), std::abs(field.theta_at(iv.hi)));
    const double x_a = x_of_theta(sign * theta_w);
    const double x_b = x_of_theta(-sign * theta_w);
    auto in_x = [&](double x) {
      const double v = t.value(x);
      if (v == 0.0) return 0.0;
      const double theta = field.theta_at(x);
      const double ell = log_lambda_from_theta(k, theta, tol);
      // theta^2 / (k zeta^3) = theta^2 k^2 / lambda^3 and 1/zeta = k / lambda
      const double a = std::exp(2.0 * std::log(std::abs(theta)) + 2.0 * log_k - 3.0 * ell);
      const double b = std::exp(log_k - ell);
      return -v * v * (a + b);
    };
    double total = integrate_piecewise(in_x, iv.lo, x_a, t.breaks, tol) + integrate_piecewise(in_x, x_b, iv.hi, t.breaks, tol);

    // Across the apex lambda drops to e^{-k/2} over a width far below double
    // resolution in x. In the slope variable s, with theta = s e^xi and
    // lambda = e^xi, dx = e^xi (1 + k s^2) / f ds and the integrand becomes
    // -psi^2 k (1 + k s^2)^2 / f, which is bounded.
    const double s_w = slope_from_theta(k, theta_w, tol);
    std::vector<double> s_breaks;
    for (double xb : t.breaks)
      if (xb > x_a && xb < x_b) s_breaks.push_back(slope_from_theta(k, field.theta_at(xb), tol));
    auto in_s = [&](double s) {
      const double x = x_of_theta(stress_from_slope(k, s));
      const double v = t.value(x);
      if (v == 0.0) return 0.0;
      const double q = 1.0 + kv * s * s;
      return -v * v * kv * q * q / field.density_at(x);
    };
    total += integrate_piecewise(in_s, -s_w, s_w, s_breaks, tol);
    return total;
  };
  return side(sol.source(), psi.source) + side(sol.sink(), psi.sink);
}

TestFunction zero_test_function() {
  return TestFunction{[](double) { return 0.0; }, [](double) { return 0.0; }, {}};
}

TestFunction sine_bump(Interval iv, int mode, double amplitude) {
  const double w = mode * std::numbers::pi / iv.length();
  const double lo = iv.lo;
  TestFunction t;
  t.value = [=](double x) { return amplitude * std::sin(w * (x - lo)); };
  t.derivative = [=](double x) { return amplitude * w * std::cos(w * (x - lo)); };
  return t;
}

TestFunction random_hat(Interval iv, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> pos(iv.lo, iv.hi);
  std::uniform_real_distribution<double> height(-1.0, 1.0);
  const int m = count(rng);
  std::vector<double> knots(m);
  for (double& k : knots) k = pos(rng);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> xs{iv.lo};
  std::vector<double> ys{0.0};
  for (double k : knots) {
    if (k <= xs.back() || k >= iv.hi) continue;
    xs.push_back(k);
    ys.push_back(height(rng));
  }
  xs.push_back(iv.hi);
  ys.push_back(0.0);
  return piecewise_linear(std::move(xs), std::move(ys));
}

TestFunction random_steps(Interval iv, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(2, 6);
  std::uniform_real_distribution<double> pos(iv.lo, iv.hi);
  std::uniform_real_distribution<double> height(-1.0, 1.0);
  std::vector<double> cuts(count(rng) - 1);
  for (double& c : cuts) c = pos(rng);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> levels(cuts.size() + 1);
  for (double& l : levels) l = height(rng);
  TestFunction t;
  t.value = [cuts, levels](double x) {
    return levels[static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin())];
  };
  t.derivative = [](double) { return 0.0; };
  t.breaks = cuts;
  return t;
}

std::vector<TestFunctionPair> test_function_family(const TransportProblem& problem, int count,
                                                   std::uint64_t seed) {
  std::vector<TestFunctionPair> family;
  const Interval s = problem.source.interval();
  const Interval t = problem.sink.interval();
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      const int mode = i / 2 + 1;
      family.push_back({sine_bump(s, mode), sine_bump(t, mode, 0.5)});
    } else {
      family.push_back({random_hat(s, seed + 2 * i), random_hat(t, seed + 2 * i + 1)});
    }
  }
  return family;
}

EnergyReport energy_report(const PotentialSolution& sol, int test_functions, std::uint64_t seed) {
  require_certified(sol);
  EnergyReport r;
  r.k = sol.k().value();
  const TrialPair trial = trial_from_solution(sol);
  const Tolerances& tol = sol.tolerances();
  r.I_primal = primal_energy(sol.k(), trial, sol.problem(), tol, &r.source, &r.sink);
  r.I_dual = dual_energy(sol, &r.source, &r.sink);
  r.Xi = total_complementary(sol.k(), trial, critical_dual_variable(sol), sol.problem(), tol, &r.source, &r.sink);
  r.K_value = kantorovich_value(trial, sol.problem(), tol, &r.source, &r.sink);
  r.duality_gap = std::abs(r.I_primal - r.I_dual);
  for (const SidePotential& p : sol.pieces())
    for (double e : p.eta) r.sup_slope = std::max(r.sup_slope, std::abs(e));
  const ElResidual el = el_residual(sol);
  r.el_residual = el.conservation;
  r.el_exact_residual = el.exact;

  r.second_var_min_primal = std::numeric_limits<double>::infinity();
  r.second_var_max_dual = -std::numeric_limits<double>::infinity();
  for (const TestFunctionPair& phi : test_function_family(sol.problem(), test_functions, seed)) {
    r.second_var_min_primal = std::min(r.second_var_min_primal, second_variation_primal(sol, phi));
    r.second_var_max_dual = std::max(r.second_var_max_dual, second_variation_dual(sol, phi));
  }
  if (test_functions <= 0) r.second_var_min_primal = r.second_var_max_dual = 0.0;
  return r;
}

}  // namespace kantorovich
