#include "kantorovich/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kantorovich/errors.hpp"

namespace kantorovich {

namespace {

void require_disjoint(const TransportProblem& problem) {
  if (problem.layout != Layout::Disjoint)
    throw Error(ErrorCode::Unsupported, "limit oracle requires disjoint supports");
}

double tent(Interval iv, double x) { return std::max(0.0, std::min(x - iv.lo, iv.hi - x)); }

double poly_eval(const std::vector<double>& c, double x) {
  double y = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * x + *it;
  return y;
}

// (alpha + beta x) * p(x), integrated from lo to hi exactly.
double integrate_linear_times_poly(double alpha, double beta, const std::vector<double>& p, double lo,
                                   double hi) {
  std::vector<double> q(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    q[i] += alpha * p[i];
    q[i + 1] += beta * p[i];
  }
  std::vector<double> anti(q.size() + 1, 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) anti[i + 1] = q[i] / static_cast<double>(i + 1);
  return poly_eval(anti, hi) - poly_eval(anti, lo);
}

double side_tent_value(const Density& d) {
  const Interval iv = d.interval();
  const double m = iv.midpoint();
  const DensitySpec& s = d.spec();
  switch (s.kind) {
    case DensityKind::Uniform:
      return s.height * iv.length() * iv.length() / 4.0;
    case DensityKind::Polynomial:
      return integrate_linear_times_poly(-iv.lo, 1.0, s.coefficients, iv.lo, m) +
             integrate_linear_times_poly(iv.hi, -1.0, s.coefficients, m, iv.hi);
    case DensityKind::Tabulated: {
      std::vector<double> breaks(s.nodes.begin(), s.nodes.end());
      breaks.push_back(m);
      Tolerances tol;
      tol.quad_abs_tol = 1e-13;
      return integrate_piecewise([&](double x) { return tent(iv, x) * d(x); }, iv.lo, iv.hi, breaks, tol);
    }
  }
  return 0.0;
}

}  // namespace

double TentPotential::operator()(double x) const {
  if (source_.contains(x)) return tent(source_, x);
  if (sink_.contains(x)) return -tent(sink_, x);
  return 0.0;
}

double TentPotential::slope(double x) const {
  if (source_.contains(x)) return x < source_.midpoint() ? 1.0 : -1.0;
  if (sink_.contains(x)) return x < sink_.midpoint() ? -1.0 : 1.0;
  return 0.0;
}

TrialPair TentPotential::as_trial() const {
  const TentPotential self = *this;
  auto value = [self](double x) { return self(x); };
  auto slope = [self](double x) { return self.slope(x); };
  return TrialPair{Trial{value, slope, {source_.midpoint()}}, Trial{value, slope, {sink_.midpoint()}}};
}

TentPotential tent_potential(const TransportProblem& problem) {
  require_disjoint(problem);
  return TentPotential(problem.source.interval(), problem.sink.interval());
}

double tent_value(const TransportProblem& problem) {
  require_disjoint(problem);
  // The sink tent is negative and enters K with a minus sign.
  return side_tent_value(problem.source) + side_tent_value(problem.sink);
}

double limit_constant(const TransportProblem& problem, Side side) {
  require_disjoint(problem);
  const Density& d = side == Side::Source ? problem.source : problem.sink;
  return d.cdf(d.interval().midpoint());
}

ImprovementReport grid_improve_check(const TransportProblem& problem, const RealFunction& u, int n,
                                     double step) {
  require_disjoint(problem);
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "grid_improve_check needs n >= 3");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid_improve_check needs step > 0");

  constexpr double kEndTol = 1e-8;
  constexpr double kSlack = 1e-12;

  struct Grid {
    Side side;
    const Density* density;
    double h;
    std::vector<double> x, u;
  };
  std::vector<Grid> grids;
  std::vector<std::string> violations;
  for (Side side : {Side::Source, Side::Sink}) {
    const Density& d = side == Side::Source ? problem.source : problem.sink;
    const Interval iv = d.interval();
    Grid g{side, &d, iv.length() / (n - 1), std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
      g.x[i] = i + 1 == n ? iv.hi : iv.lo + g.h * i;
      g.u[i] = u(g.x[i]);
    }
    auto note = [&](const std::string& what) {
      if (violations.size() < 8) violations.push_back(std::string(to_string(side)) + ": " + what);
    };
    if (std::abs(g.u.front()) > kEndTol || std::abs(g.u.back()) > kEndTol) {
      std::ostringstream m;
      m << "boundary values " << g.u.front() << ", " << g.u.back() << " are not zero";
      note(m.str());
    }
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(g.u[i + 1] - g.u[i]) > g.h + kSlack) {
        std::ostringstream m;
        m << "|u(" << g.x[i + 1] << ") - u(" << g.x[i] << ")| exceeds the grid step";
        note(m.str());
      }
    }
    grids.push_back(std::move(g));
  }
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "input potential is infeasible on the grid:";
    for (const auto& v : violations) msg << "\n  " << v;
    throw Error(ErrorCode::Feasibility, msg.str());
  }

  ImprovementReport report;
  for (const Grid& g : grids) {
    const double sign = g.side == Side::Source ? 1.0 : -1.0;
    for (int i = 1; i + 1 < n; ++i) {
      for (double delta : {step, -step}) {
        const double v = g.u[i] + delta;
        if (std::abs(v - g.u[i - 1]) > g.h + kSlack || std::abs(g.u[i + 1] - v) > g.h + kSlack) continue;
        ++report.checked_moves;
        // Interior trapezoid weight is h.
        const double gain = delta * sign * (*g.density)(g.x[i]) * g.h;
        if (gain > 0.0) ++report.improving_moves;
        if (gain > report.best_improvement) {
          report.best_improvement = gain;
          report.best_side = g.side;
          report.best_x = g.x[i];
        }
      }
    }
  }
  return report;
}

}  // namespace kantorovich
