#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "kantorovich/density.hpp"
#include "kantorovich/dual_algebra.hpp"
#include "kantorovich/numerics.hpp"

namespace kantorovich {

inline constexpr double kMaxCertifiedK = 4096.0;
inline constexpr int kGridPoints = 2049;

enum class Side { Source, Sink };

const char* to_string(Side side) noexcept;

// Dual stress on one support component:
//   source: theta(x) = -G(x) + C,   sink: theta(x) = G(x) - D,
// where G(x) is the density mass between the component's left end and x.
class DualField {
 public:
  DualField(Side side, std::shared_ptr<const Density> density);
  DualField(Side side, std::shared_ptr<const Density> density, Interval component);

  Side side() const { return side_; }
  Interval interval() const { return interval_; }
  const Density& density() const { return *density_; }
  // Mass carried by the component; the constant must lie in (0, mass()).
  double mass() const { return mass_; }

  std::optional<double> constant() const { return constant_; }
  DualField with_constant(double c) const;

  // Throws Error(State) while no constant is set.
  double theta_at(double x) const;
  double theta_with(double trial_constant, double x) const;
  // f+ on the source side, f- on the sink side.
  double density_at(double x) const { return (*density_)(x); }
  // Location where theta_with(trial_constant, .) vanishes.
  double zero_location(double trial_constant, const Tolerances& tol) const;

 private:
  double local_cdf(double x) const { return density_->cdf(x) - offset_; }

  Side side_;
  std::shared_ptr<const Density> density_;
  Interval interval_;
  double offset_ = 0.0;
  double mass_ = 1.0;
  std::optional<double> constant_;
};

double theta_at(const DualField& field, double x);

/// M_k(t) on the source side, N_k(t) on the sink side: the integral of the
/// recovered slope over the component for a trial constant t.
double balance_mismatch(RegIndex k, const DualField& field, double t, const Tolerances& tol);

struct ConstantSolve {
  double value = 0.0;
  double mismatch = 0.0;
  int iterations = 0;
};

/// Root of the balance mismatch in (0, mass). The bracket starts at
/// [1e-6, 1 - 1e-6] (scaled by the component mass) and is widened toward the
/// ends when no sign change is found.
ConstantSolve solve_balance_constant(RegIndex k, const DualField& field, const Tolerances& tol);
double solve_balance_constant(RegIndex k, Side side, const TransportProblem& problem,
                              const Tolerances& tol);

struct SidePotential {
  DualField field;
  double constant = 0.0;
  double apex = 0.0;    // theta zero, where the potential peaks (source) or bottoms (sink)
  double u_apex = 0.0;
  std::vector<double> x{};
  std::vector<double> theta{};
  std::vector<double> eta{};
  std::vector<double> u{};
  int constant_iterations = 0;
  double constant_mismatch = 0.0;
  double boundary_residual = 0.0;  // |u(hi)|
  long quadrature_evaluations = 0;

  Side side() const { return field.side(); }
  Interval interval() const { return field.interval(); }
  double spacing() const { return (x.back() - x.front()) / static_cast<double>(x.size() - 1); }
};

class PotentialSolution {
 public:
  PotentialSolution(RegIndex k, TransportProblem problem, Tolerances tol, bool experimental,
                    std::vector<SidePotential> pieces);

  RegIndex k() const { return k_; }
  const TransportProblem& problem() const { return problem_; }
  const Tolerances& tolerances() const { return tol_; }
  bool experimental() const { return experimental_; }
  const std::vector<SidePotential>& pieces() const { return pieces_; }

  // Disjoint layout only: the single source and sink pieces.
  const SidePotential& source() const;
  const SidePotential& sink() const;
  double C() const { return source().constant; }
  double D() const { return sink().constant; }

  // Cubic Hermite through the samples with the exact slopes as derivatives,
  // split at the theta zero. Zero outside every piece.
  double evaluate(double x) const;
  const SidePotential* piece_at(double x) const;

 private:
  RegIndex k_;
  TransportProblem problem_;
  Tolerances tol_;
  bool experimental_;
  std::vector<SidePotential> pieces_;
};

struct SolveOptions {
  bool experimental_overlap = false;
};

PotentialSolution solve_potential(RegIndex k, const TransportProblem& problem, const Tolerances& tol,
                                  SolveOptions options = {});

double evaluate_potential(const PotentialSolution& sol, double x);

struct Subproblem {
  Side side;
  Interval interval;
  bool experimental = false;
};

/// Support components on which the potential is solved independently. The
/// potential is zero on the closure of the overlap.
std::vector<Subproblem> decompose(const TransportProblem& problem);

}  // namespace kantorovich
