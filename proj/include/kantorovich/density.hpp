#pragma once

#include <string>
#include <vector>

#include "kantorovich/numerics.hpp"

namespace kantorovich {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class DensityKind { Uniform, Polynomial, Tabulated };

const char* to_string(DensityKind kind) noexcept;

// Description of a density before validation. Polynomial coefficients are in
// increasing degree and refer to the absolute coordinate x, not x - lo.
struct DensitySpec {
  DensityKind kind = DensityKind::Uniform;
  Interval interval;
  double height = 1.0;
  std::vector<double> coefficients;
  std::vector<double> nodes;
  std::vector<double> values;

  static DensitySpec uniform(double lo, double hi, double height = 1.0);
  static DensitySpec polynomial(double lo, double hi, std::vector<double> coefficients);
  static DensitySpec tabulated(std::vector<double> nodes, std::vector<double> values);
};

// Immutable validated density on a closed interval, with its cumulative
// distribution. Tabulated densities interpolate linearly between nodes; their
// CDF is a shape-preserving cubic Hermite through cumulative node masses.
class Density {
 public:
  const DensitySpec& spec() const { return spec_; }
  Interval interval() const { return spec_.interval; }
  double mass() const { return mass_; }
  bool normalized() const { return normalized_; }
  double peak() const { return peak_; }

  double operator()(double x) const;
  double cdf(double x) const;
  double inverse_cdf(double p, const Tolerances& tol = {}) const;

 private:
  friend Density make_density(const DensitySpec& spec);

  DensitySpec spec_;
  double mass_ = 0.0;
  bool normalized_ = false;
  double peak_ = 0.0;
  std::vector<double> node_cdf_;        // tabulated only
  std::vector<double> antiderivative_;  // polynomial only
};

/// Validates the spec, checks positivity on a 1025-point interior grid plus the
/// endpoints, and computes the mass by adaptive quadrature.
Density make_density(const DensitySpec& spec);

/// Rescales the density to unit mass. Idempotent on normalized input.
Density normalize(const Density& d);

double cdf(const Density& d, double x);
double inverse_cdf(const Density& d, double p, const Tolerances& tol = {});

enum class Layout { Disjoint, Touching, Overlapping };

const char* to_string(Layout layout) noexcept;

struct TransportProblem {
  Density source;  // f+ on Omega = (a, b)
  Density sink;    // f- on Omega* = (c, d)
  Layout layout = Layout::Disjoint;

  // |U| = (b - a) + (d - c)
  double measure() const { return source.interval().length() + sink.interval().length(); }
};

TransportProblem make_problem(Density source, Density sink);

struct ProblemDiagnostics {
  Layout layout = Layout::Disjoint;
  double source_balance_residual = 0.0;  // |mass(f+) - 1|
  double sink_balance_residual = 0.0;
  bool positivity_ok = true;
  bool experimental = false;  // touching or overlapping supports
  std::vector<std::string> notes;
};

/// Throws Error(Balance) when either mass deviates from 1 by more than 1e-6.
ProblemDiagnostics validate_problem(const TransportProblem& problem);

}  // namespace kantorovich
