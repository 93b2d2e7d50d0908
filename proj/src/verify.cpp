#include "kantorovich/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "kantorovich/energy.hpp"
#include "kantorovich/errors.hpp"
#include "kantorovich/oracle.hpp"

namespace kantorovich {

namespace {

const std::vector<std::string>& names() {
  static const std::vector<std::string> list{
      "boundary_values",      "gradient_bound",         "sup_norm_bound",        "tent_dominance",
      "constants_in_unit_interval", "stress_reconstruction", "conservation_residual", "el_negative_control",
      "duality_gap",          "complementary_chain",    "sandwich",              "second_variation_primal",
      "second_variation_dual", "minimizer_perturbations", "monotone_balance",     "tent_grid_certificate",
  };
  return list;
}

constexpr int kPerturbations = 50;
constexpr int kTestFunctions = 20;
constexpr std::uint64_t kSeed = 20240611;

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> verification_check_names() { return names(); }

double minimizer_margin(const PotentialSolution& sol, int count, std::uint64_t seed) {
  const TrialPair base = trial_from_solution(sol);
  const Tolerances& tol = sol.tolerances();
  const double kv = sol.k().value();
  double margin = std::numeric_limits<double>::infinity();
  for (const TestFunctionPair& phi : test_function_family(sol.problem(), count, seed)) {
    // Largest eps keeping |eta + eps phi'| <= 1 at every grid node, then a quarter of it.
    double eps = 0.1;
    for (const auto& [piece, t] : {std::pair{&sol.source(), &phi.source}, std::pair{&sol.sink(), &phi.sink}}) {
      for (std::size_t i = 0; i < piece->x.size(); ++i) {
        const double d = std::abs(t->derivative(piece->x[i]));
        if (d > 0.0) eps = std::min(eps, 0.25 * (1.0 - std::abs(piece->eta[i])) / d);
      }
    }
    // I(u + eps phi) - I(u) as one integral, so the quadrature target applies to
    // the (small) change rather than to two large energies.
    // H(a) - H(b) = e^{k(b^2-1)/2} expm1(k(a-b)(a+b)/2) / k.
    double change = 0.0;
    for (const auto& [trial, t, density, sign] :
         {std::tuple{&base.source, &phi.source, &sol.problem().source, 1.0},
          std::tuple{&base.sink, &phi.sink, &sol.problem().sink, -1.0}}) {
      std::vector<double> breaks = trial->breaks;
      breaks.insert(breaks.end(), t->breaks.begin(), t->breaks.end());
      const Interval iv = density->interval();
      change += integrate_piecewise(
          [&, trial = trial, t = t, density = density, sign = sign](double x) {
            const double b = trial->du(x);
            const double a = b + eps * t->derivative(x);
            const double dh = std::exp(0.5 * kv * (b * b - 1.0)) * std::expm1(0.5 * kv * (a - b) * (a + b)) / kv;
            return dh - sign * (*density)(x) * eps * t->value(x);
          },
          iv.lo, iv.hi, breaks, tol);
    }
    margin = std::min(margin, change);
  }
  return margin;
}

VerifyReport run_verification(const TransportProblem& problem, RegIndex k, const Tolerances& tol,
                              std::string_view fault) {
  if (!fault.empty() && std::find(names().begin(), names().end(), fault) == names().end())
    throw Error(ErrorCode::InvalidArgument, "unknown fault-injection target '" + std::string(fault) + "'");
  // Corrupts a measured quantity when the fault targets this check.
  auto inject = [&](const char* name, double value, double delta) { return fault == name ? value + delta : value; };

  const PotentialSolution sol = solve_potential(k, problem, tol);
  const EnergyReport report = energy_report(sol, 0);
  const SidePotential& src = sol.source();
  const SidePotential& snk = sol.sink();
  const double measure = problem.measure();

  VerifyReport out;
  out.k = k.value();
  auto at_most = [&](const char* name, double value, double threshold, std::string detail = {}) {
    out.checks.push_back({name, value, threshold, value <= threshold, std::move(detail)});
  };
  auto at_least = [&](const char* name, double value, double threshold, std::string detail = {}) {
    out.checks.push_back({name, value, threshold, value >= threshold, std::move(detail)});
  };

  {
    double worst = 0.0;
    for (const SidePotential* p : {&src, &snk})
      worst = std::max({worst, std::abs(p->u.front()), std::abs(p->u.back())});
    at_most("boundary_values", inject("boundary_values", worst, 1e-3), 10.0 * tol.quad_abs_tol);
  }
  at_most("gradient_bound", inject("gradient_bound", report.sup_slope, 0.5), 1.0 + 1e-9);
  {
    double sup = 0.0;
    for (const SidePotential* p : {&src, &snk}) {
      for (double u : p->u) sup = std::max(sup, std::abs(u));
      sup = std::max(sup, std::abs(p->u_apex));
    }
    at_most("sup_norm_bound", inject("sup_norm_bound", sup, 10.0 * measure), measure);
  }
  {
    // Largest violation of 0 <= sign*u <= min(x - lo, hi - x).
    double worst = 0.0;
    for (const SidePotential* p : {&src, &snk}) {
      const double sign = p->side() == Side::Source ? 1.0 : -1.0;
      const Interval iv = p->interval();
      for (std::size_t i = 0; i < p->x.size(); ++i) {
        const double v = sign * p->u[i];
        const double cap = std::min(p->x[i] - iv.lo, iv.hi - p->x[i]);
        worst = std::max({worst, -v, v - cap});
      }
    }
    at_most("tent_dominance", inject("tent_dominance", worst, 1e-2), 10.0 * tol.quad_abs_tol);
  }
  {
    const double c = inject("constants_in_unit_interval", sol.C(), 2.0);
    const double d = sol.D();
    const bool ok = c > 0.0 && c < 1.0 && d > 0.0 && d < 1.0;
    std::ostringstream detail;
    detail << "C_k=" << c << " D_k=" << d;
    out.checks.push_back({"constants_in_unit_interval", std::max(c, d), 1.0, ok, detail.str()});
  }
  at_most("stress_reconstruction", inject("stress_reconstruction", report.el_exact_residual, 1e-3), 1e-9);
  at_most("conservation_residual", inject("conservation_residual", report.el_residual, 1.0), 1e-4);
  {
    const TentPotential tent = tent_potential(problem);
    const ElResidual control = el_residual(sol, [&](Side, double x) { return tent.slope(x); });
    at_least("el_negative_control", inject("el_negative_control", control.conservation, -1e9), 0.1,
             "tent slopes substituted for the solution");
  }
  const double gap_scale = 1e-6 * (1.0 + std::abs(report.I_primal));
  at_most("duality_gap", inject("duality_gap", report.duality_gap, 1e-2), gap_scale);
  {
    const double chain = std::max(std::abs(report.I_primal - report.Xi), std::abs(report.Xi - report.I_dual));
    at_most("complementary_chain", inject("complementary_chain", chain, 1e-2), gap_scale);
  }
  {
    const double k_tent = tent_value(problem);
    const double deficit = inject("sandwich", k_tent - report.K_value, 1.0);
    const double upper = measure / k.value() + 1e-8;
    std::ostringstream detail;
    detail << "K_tent=" << k_tent << " K_k=" << report.K_value << " bound=" << upper;
    out.checks.push_back({"sandwich", deficit, upper, deficit >= 0.0 && deficit <= upper, detail.str()});
  }
  {
    double min_primal = std::numeric_limits<double>::infinity();
    double max_dual = -std::numeric_limits<double>::infinity();
    for (const TestFunctionPair& phi : test_function_family(problem, kTestFunctions, kSeed)) {
      min_primal = std::min(min_primal, second_variation_primal(sol, phi));
      max_dual = std::max(max_dual, second_variation_dual(sol, phi));
    }
    at_least("second_variation_primal", inject("second_variation_primal", min_primal, -(std::abs(min_primal) + 1.0)), -1e-10);
    at_most("second_variation_dual", inject("second_variation_dual", max_dual, std::abs(max_dual) + 1.0), 1e-10);
  }
  at_least("minimizer_perturbations",
           inject("minimizer_perturbations", minimizer_margin(sol, kPerturbations, kSeed), -1.0), -1e-8);
  {
    bool monotone = true;
    double prev_m = -std::numeric_limits<double>::infinity();
    double prev_n = std::numeric_limits<double>::infinity();
    double min_step = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 9; ++i) {
      const double t = 0.1 * i;
      const double m = inject("monotone_balance", balance_mismatch(k, src.field, t, tol), i == 5 ? 10.0 : 0.0);
      const double n = balance_mismatch(k, snk.field, t, tol);
      monotone = monotone && m > prev_m && n < prev_n;
      if (i > 1) min_step = std::min({min_step, m - prev_m, prev_n - n});
      prev_m = m;
      prev_n = n;
    }
    out.checks.push_back({"monotone_balance", min_step, 0.0, monotone,
                          "smallest increment of M_k and decrement of N_k over t = 0.1..0.9"});
  }
  {
    const TentPotential tent = tent_potential(problem);
    const double step = 0.25 * std::min(src.interval().length(), snk.interval().length()) / 100.0;
    const ImprovementReport imp = grid_improve_check(problem, [&](double x) { return tent(x); }, 101, step);
    at_most("tent_grid_certificate", inject("tent_grid_certificate", imp.best_improvement, 1.0), 1e-12);
  }
  return out;
}

}  // namespace kantorovich
