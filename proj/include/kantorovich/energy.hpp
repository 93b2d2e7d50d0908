#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kantorovich/density.hpp"
#include "kantorovich/dual_algebra.hpp"
#include "kantorovich/potential.hpp"

namespace kantorovich {

// A candidate potential on one side: value, derivative, and the points where
// either may fail to be smooth (quadrature splits there).
struct Trial {
  RealFunction u;
  RealFunction du;
  std::vector<double> breaks;
};

struct TrialPair {
  Trial source;
  Trial sink;
};

// Dual variable carried as ln(lambda) = ln(k zeta); lambda itself underflows
// near the stress zero once k is large.
struct DualVariablePair {
  RealFunction source_log_lambda;
  RealFunction sink_log_lambda;
};

struct TestFunction {
  RealFunction value;
  RealFunction derivative;
  std::vector<double> breaks;
};

struct TestFunctionPair {
  TestFunction source;
  TestFunction sink;
};

struct SideEnergies {
  double primal = 0.0;
  double dual = 0.0;
  double complementary = 0.0;
  double kantorovich = 0.0;
};

struct ElResidual {
  double conservation = 0.0;  // max |central difference of g(eta) + f| over interior nodes
  double exact = 0.0;         // max |g(eta) - theta| over all nodes
};

struct EnergyReport {
  double k = 1.0;
  double I_primal = 0.0;
  double I_dual = 0.0;
  double Xi = 0.0;
  double K_value = 0.0;
  double duality_gap = 0.0;
  double sup_slope = 0.0;
  double el_residual = 0.0;
  double el_exact_residual = 0.0;
  double second_var_min_primal = 0.0;
  double second_var_max_dual = 0.0;
  SideEnergies source;
  SideEnergies sink;
};

TrialPair trial_from_solution(const PotentialSolution& sol);
DualVariablePair critical_dual_variable(const PotentialSolution& sol);
DualVariablePair dual_variable_from_zeta(RegIndex k, RealFunction source_zeta, RealFunction sink_zeta);

/// I(w) = int_U H(w_x) - w f dx with f = f+ on the source and -f- on the sink.
double primal_energy(RegIndex k, const TrialPair& w, const TransportProblem& problem, const Tolerances& tol,
                     SideEnergies* source = nullptr, SideEnergies* sink = nullptr);
double primal_energy(const PotentialSolution& sol);

/// I_d = -1/2 int_U theta^2/lambda + lambda + (2/k) lambda (ln lambda - 1) dx,
/// with lambda = k zeta recovered from the stress through E_inv.
double dual_energy(const PotentialSolution& sol, SideEnergies* source = nullptr, SideEnergies* sink = nullptr);

/// Xi(u, zeta) = int_U Phi(u) zeta - Psi*(zeta) - f u dx.
double total_complementary(RegIndex k, const TrialPair& u, const DualVariablePair& dual,
                           const TransportProblem& problem, const Tolerances& tol,
                           SideEnergies* source = nullptr, SideEnergies* sink = nullptr);

/// K[u] = int_Omega u f+ dx - int_Omega* u f- dx.
double kantorovich_value(const TrialPair& u, const TransportProblem& problem, const Tolerances& tol,
                         SideEnergies* source = nullptr, SideEnergies* sink = nullptr);
double kantorovich_value(const PotentialSolution& sol);

ElResidual el_residual(const PotentialSolution& sol);
// Residual of an arbitrary slope field on the solution's grids (negative controls).
ElResidual el_residual(const PotentialSolution& sol, const std::function<double(Side, double)>& slope);

/// int_U e^{k(u_x^2-1)/2} (k (u_x phi_x)^2 + phi_x^2) dx; nonnegative.
double second_variation_primal(const PotentialSolution& sol, const TestFunctionPair& phi);
/// -int_U theta^2 psi^2 / (k zeta^3) + psi^2 / zeta dx; nonpositive. Near the
/// stress zero the integral is taken in the slope variable, where it stays finite.
double second_variation_dual(const PotentialSolution& sol, const TestFunctionPair& psi);

TestFunction zero_test_function();
TestFunction sine_bump(Interval iv, int mode, double amplitude = 1.0);
// Piecewise-linear function with random interior knots, zero at both ends.
TestFunction random_hat(Interval iv, std::uint64_t seed);
// Piecewise-constant bounded function (for the dual second variation).
TestFunction random_steps(Interval iv, std::uint64_t seed);

// Sine bumps of increasing mode followed by seeded random hats on both sides.
std::vector<TestFunctionPair> test_function_family(const TransportProblem& problem, int count,
                                                   std::uint64_t seed);

EnergyReport energy_report(const PotentialSolution& sol, int test_functions = 8, std::uint64_t seed = 20240611);

}  // namespace kantorovich
