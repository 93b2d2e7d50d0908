#pragma once

#include <string>
#include <vector>

#include "kantorovich/density.hpp"
#include "kantorovich/energy.hpp"
#include "kantorovich/potential.hpp"

namespace kantorovich {

// Limit potential: +min(x - a, b - x) on the source, -min(x - c, d - x) on the sink.
// Built only from the problem geometry; shares no code with the duality solver.
class TentPotential {
 public:
  TentPotential(Interval source, Interval sink) : source_(source), sink_(sink) {}

  Interval source() const { return source_; }
  Interval sink() const { return sink_; }
  double apex(Side side) const { return side == Side::Source ? source_.midpoint() : sink_.midpoint(); }

  double operator()(double x) const;
  double slope(double x) const;
  TrialPair as_trial() const;

 private:
  Interval source_;
  Interval sink_;
};

TentPotential tent_potential(const TransportProblem& problem);

/// K[tent]: closed form for uniform and polynomial densities, quadrature of
/// tent * density for tabulated ones.
double tent_value(const TransportProblem& problem);

/// F+(midpoint) for the source, F-(midpoint) for the sink.
double limit_constant(const TransportProblem& problem, Side side);

struct ImprovementReport {
  double best_improvement = 0.0;  // largest increase of the discrete K over single feasible moves
  int improving_moves = 0;
  int checked_moves = 0;
  Side best_side = Side::Source;
  double best_x = 0.0;
};

/// Samples u on an n-point grid per side, requires |u| <= 1e-8 at the ends and
/// |u_{i+1} - u_i| <= h (Error(Feasibility) otherwise), then tries every
/// interior move u_i +/- step that keeps the grid feasible.
ImprovementReport grid_improve_check(const TransportProblem& problem, const RealFunction& u, int n,
                                     double step);

}  // namespace kantorovich
