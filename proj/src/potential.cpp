#include "kantorovich/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "kantorovich/errors.hpp"

namespace kantorovich {

namespace {

double hermite(double x, double x0, double x1, double y0, double y1, double m0, double m1) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * m1;
}

void require_certified_k(RegIndex k) {
  if (k.value() > kMaxCertifiedK) {
    std::ostringstream msg;
    msg << "k=" << k.value() << " exceeds the certified cap " << kMaxCertifiedK;
    throw Error(ErrorCode::Domain, msg.str());
  }
}

SidePotential assemble_side(RegIndex k, const DualField& base, const Tolerances& tol) {
  const ConstantSolve cs = solve_balance_constant(k, base, tol);
  SidePotential sp{base.with_constant(cs.value)};
  sp.constant = cs.value;
  sp.constant_iterations = cs.iterations;
  sp.constant_mismatch = cs.mismatch;

  const DualField& field = sp.field;
  const Interval iv = field.interval();
  sp.apex = field.zero_location(cs.value, tol);

  const int n = kGridPoints;
  sp.x.resize(n);
  sp.theta.resize(n);
  sp.eta.resize(n);
  sp.u.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    sp.x[i] = i + 1 == n ? iv.hi : iv.lo + iv.length() * static_cast<double>(i) / (n - 1);
    sp.theta[i] = field.theta_at(sp.x[i]);
    sp.eta[i] = slope_from_theta(k, sp.theta[i], tol);
  }

  auto eta = [&](double x) { return slope_from_theta(k, field.theta_at(x), tol); };
  const std::array<double, 1> breaks{sp.apex};
  Tolerances cell = tol;
  cell.quad_abs_tol = tol.quad_abs_tol / (n - 1);
  long evals = 0;
  for (int i = 0; i + 1 < n; ++i) {
    QuadratureStats stats;
    sp.u[i + 1] = sp.u[i] + integrate_piecewise(eta, sp.x[i], sp.x[i + 1], breaks, cell, &stats);
    evals += stats.evaluations;
    if (sp.x[i] <= sp.apex && sp.apex <= sp.x[i + 1]) {
      sp.u_apex = sp.u[i] + integrate(eta, sp.x[i], sp.apex, cell, &stats);
      evals += stats.evaluations;
    }
  }
  sp.quadrature_evaluations = evals;
  sp.boundary_residual = std::abs(sp.u.back());
  return sp;
}

}  // namespace

const char* to_string(Side side) noexcept { return side == Side::Source ? "source" : "sink"; }

DualField::DualField(Side side, std::shared_ptr<const Density> density)
    : DualField(side, density, density->interval()) {}

DualField::DualField(Side side, std::shared_ptr<const Density> density, Interval component)
    : side_(side), density_(std::move(density)), interval_(component) {
  const Interval full = density_->interval();
  if (!(component.lo >= full.lo && component.hi <= full.hi && component.lo < component.hi))
    throw Error(ErrorCode::Domain, "dual field component must be a nonempty subinterval of the density support");
  offset_ = density_->cdf(component.lo);
  mass_ = density_->cdf(component.hi) - offset_;
}

DualField DualField::with_constant(double c) const {
  if (!(c > 0.0 && c < mass_)) {
    std::ostringstream msg;
    msg << "balance constant " << c << " outside (0, " << mass_ << ")";
    throw Error(ErrorCode::Domain, msg.str());
  }
  DualField copy = *this;
  copy.constant_ = c;
  return copy;
}

double DualField::theta_with(double t, double x) const {
  const double g = local_cdf(x);
  return side_ == Side::Source ? t - g : g - t;
}

double DualField::theta_at(double x) const {
  if (!constant_) throw Error(ErrorCode::State, "dual field constant has not been set");
  return theta_with(*constant_, x);
}

double DualField::zero_location(double t, const Tolerances& tol) const {
  return std::clamp(density_->inverse_cdf(offset_ + t, tol), interval_.lo, interval_.hi);
}

double theta_at(const DualField& field, double x) { return field.theta_at(x); }

double balance_mismatch(RegIndex k, const DualField& field, double t, const Tolerances& tol) {
  const Interval iv = field.interval();
  const std::array<double, 1> breaks{field.zero_location(t, tol)};
  return integrate_piecewise([&](double x) { return slope_from_theta(k, field.theta_with(t, x), tol); },
                             iv.lo, iv.hi, breaks, tol);
}

ConstantSolve solve_balance_constant(RegIndex k, const DualField& field, const Tolerances& tol) {
  const double m = field.mass();
  // M_k increases with t, N_k decreases; orient so the root function increases.
  const double orient = field.side() == Side::Source ? 1.0 : -1.0;
  auto g = [&](double t) { return orient * balance_mismatch(k, field, t, tol); };

  double eps = 1e-6;
  double lo = eps * m;
  double hi = (1.0 - eps) * m;
  double glo = g(lo);
  double ghi = g(hi);
  while ((glo > 0.0 || ghi < 0.0) && eps > 1e-15) {
    eps *= 1e-3;
    if (glo > 0.0) {
      lo = eps * m;
      glo = g(lo);
    }
    if (ghi < 0.0) {
      hi = (1.0 - eps) * m;
      ghi = g(hi);
    }
  }
  if (glo > 0.0 || ghi < 0.0) {
    std::ostringstream msg;
    msg << "balance mismatch has no sign change for the " << to_string(field.side())
        << " constant (g(" << lo << ")=" << glo << ", g(" << hi << ")=" << ghi
        << "); check that the density is positive";
    throw Error(ErrorCode::Bracket, msg.str());
  }

  RootStats stats;
  ConstantSolve out;
  out.value = find_root_monotone(g, Bracket{lo, hi}, tol, &stats);
  out.iterations = stats.iterations;
  out.mismatch = balance_mismatch(k, field, out.value, tol);
  const double limit = std::max(1e-9, 10.0 * tol.quad_abs_tol);
  if (std::abs(out.mismatch) > limit) {
    std::ostringstream msg;
    msg << "balance constant " << out.value << " leaves mismatch " << out.mismatch << " above " << limit;
    throw Error(ErrorCode::Root, msg.str());
  }
  return out;
}

double solve_balance_constant(RegIndex k, Side side, const TransportProblem& problem,
                              const Tolerances& tol) {
  const Density& d = side == Side::Source ? problem.source : problem.sink;
  DualField field(side, std::make_shared<const Density>(d));
  return solve_balance_constant(k, field, tol).value;
}

PotentialSolution::PotentialSolution(RegIndex k, TransportProblem problem, Tolerances tol,
                                     bool experimental, std::vector<SidePotential> pieces)
    : k_(k),
      problem_(std::move(problem)),
      tol_(tol),
      experimental_(experimental),
      pieces_(std::move(pieces)) {}

const SidePotential& PotentialSolution::source() const {
  if (experimental_ || pieces_.size() != 2)
    throw Error(ErrorCode::Unsupported, "source() is only defined for the disjoint layout");
  return pieces_[0];
}

const SidePotential& PotentialSolution::sink() const {
  if (experimental_ || pieces_.size() != 2)
    throw Error(ErrorCode::Unsupported, "sink() is only defined for the disjoint layout");
  return pieces_[1];
}

const SidePotential* PotentialSolution::piece_at(double x) const {
  for (const auto& p : pieces_)
    if (p.interval().contains(x)) return &p;
  return nullptr;
}

double PotentialSolution::evaluate(double x) const {
  const SidePotential* p = piece_at(x);
  if (!p) return 0.0;
  const std::size_t n = p->x.size();
  const double h = p->spacing();
  std::size_t i = static_cast<std::size_t>(std::floor((x - p->x.front()) / h));
  i = std::min(i, n - 2);
  if (x < p->x[i]) --i;
  if (x == p->x[i]) return p->u[i];
  if (x == p->x[i + 1]) return p->u[i + 1];
  if (p->x[i] < p->apex && p->apex < p->x[i + 1]) {
    if (x <= p->apex) return hermite(x, p->x[i], p->apex, p->u[i], p->u_apex, p->eta[i], 0.0);
    return hermite(x, p->apex, p->x[i + 1], p->u_apex, p->u[i + 1], 0.0, p->eta[i + 1]);
  }
  return hermite(x, p->x[i], p->x[i + 1], p->u[i], p->u[i + 1], p->eta[i], p->eta[i + 1]);
}

double evaluate_potential(const PotentialSolution& sol, double x) { return sol.evaluate(x); }

std::vector<Subproblem> decompose(const TransportProblem& problem) {
  const Interval s = problem.source.interval();
  const Interval t = problem.sink.interval();
  if (problem.layout == Layout::Disjoint)
    return {{Side::Source, s, false}, {Side::Sink, t, false}};
  if (problem.layout == Layout::Touching)
    return {{Side::Source, s, true}, {Side::Sink, t, true}};

  std::vector<Subproblem> parts;
  auto subtract = [&](Side side, Interval from, Interval cut) {
    if (from.lo < cut.lo) parts.push_back({side, {from.lo, std::min(from.hi, cut.lo)}, true});
    if (cut.hi < from.hi) parts.push_back({side, {std::max(from.lo, cut.hi), from.hi}, true});
  };
  subtract(Side::Source, s, t);
  subtract(Side::Sink, t, s);
  return parts;
}

PotentialSolution solve_potential(RegIndex k, const TransportProblem& problem, const Tolerances& tol,
                                  SolveOptions options) {
  tol.validate();
  require_certified_k(k);
  const ProblemDiagnostics diag = validate_problem(problem);
  if (diag.experimental && !options.experimental_overlap) {
    std::ostringstream msg;
    msg << "layout '" << to_string(problem.layout)
        << "' is not certified; enable the experimental overlap path to solve it";
    throw Error(ErrorCode::Layout, msg.str());
  }

  auto source = std::make_shared<const Density>(problem.source);
  auto sink = std::make_shared<const Density>(problem.sink);
  std::vector<SidePotential> pieces;
  for (const Subproblem& sub : decompose(problem)) {
    DualField field(sub.side, sub.side == Side::Source ? source : sink, sub.interval);
    pieces.push_back(assemble_side(k, field, tol));
  }
  return PotentialSolution(k, problem, tol, diag.experimental, std::move(pieces));
}

}  // namespace kantorovich
