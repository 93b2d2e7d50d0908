#include "kantorovich/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kantorovich/errors.hpp"

namespace kantorovich {

namespace {

constexpr int kPositivitySamples = 1025;
constexpr double kNormalizedTol = 1e-9;
constexpr double kBalanceTol = 1e-6;

double horner(const std::vector<double>& c, double x) {
  double y = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * x + *it;
  return y;
}

// Cubic Hermite on [x0, x0 + h] with end values y0, y1 and end slopes m0, m1.
double hermite(double t, double h, double y0, double y1, double m0, double m1) {
  const double s = t / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * m1;
}

double boundary_slack(const Interval& iv) {
  return 1e-12 * std::max({1.0, std::abs(iv.lo), std::abs(iv.hi)});
}

void check_interval(const Interval& iv) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
    throw Error(ErrorCode::Domain, "density interval must be finite");
  if (!(iv.lo < iv.hi)) {
    std::ostringstream msg;
    msg << "density interval [" << iv.lo << ", " << iv.hi << "] has zero or negative length";
    throw Error(ErrorCode::Domain, msg.str());
  }
}

}  // namespace

const char* to_string(DensityKind kind) noexcept {
  switch (kind) {
    case DensityKind::Uniform: return "uniform";
    case DensityKind::Polynomial: return "polynomial";
    case DensityKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

const char* to_string(Layout layout) noexcept {
  switch (layout) {
    case Layout::Disjoint: return "disjoint";
    case Layout::Touching: return "touching";
    case Layout::Overlapping: return "overlapping";
  }
  return "unknown";
}

DensitySpec DensitySpec::uniform(double lo, double hi, double height) {
  DensitySpec s;
  s.kind = DensityKind::Uniform;
  s.interval = {lo, hi};
  s.height = height;
  return s;
}

DensitySpec DensitySpec::polynomial(double lo, double hi, std::vector<double> coefficients) {
  DensitySpec s;
  s.kind = DensityKind::Polynomial;
  s.interval = {lo, hi};
  s.coefficients = std::move(coefficients);
  return s;
}

DensitySpec DensitySpec::tabulated(std::vector<double> nodes, std::vector<double> values) {
  DensitySpec s;
  s.kind = DensityKind::Tabulated;
  if (!nodes.empty()) s.interval = {nodes.front(), nodes.back()};
  s.nodes = std::move(nodes);
  s.values = std::move(values);
  return s;
}

double Density::operator()(double x) const {
  switch (spec_.kind) {
    case DensityKind::Uniform:
      return spec_.height;
    case DensityKind::Polynomial:
      return horner(spec_.coefficients, x);
    case DensityKind::Tabulated: {
      const auto& xs = spec_.nodes;
      const auto& ys = spec_.values;
      if (x <= xs.front()) return ys.front();
      if (x >= xs.back()) return ys.back();
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return (1.0 - w) * ys[i] + w * ys[i + 1];
    }
  }
  return 0.0;
}

double Density::cdf(double x) const {
  const Interval iv = spec_.interval;
  const double slack = boundary_slack(iv);
  if (!(x >= iv.lo - slack && x <= iv.hi + slack)) {
    std::ostringstream msg;
    msg << "cdf evaluated at x=" << x << " outside [" << iv.lo << ", " << iv.hi << "]";
    throw Error(ErrorCode::Domain, msg.str());
  }
  x = std::clamp(x, iv.lo, iv.hi);
  if (x == iv.lo) return 0.0;
  if (x == iv.hi) return mass_;

  double value = 0.0;
  switch (spec_.kind) {
    case DensityKind::Uniform:
      value = spec_.height * (x - iv.lo);
      break;
    case DensityKind::Polynomial:
      value = horner(antiderivative_, x) - horner(antiderivative_, iv.lo);
      break;
    case DensityKind::Tabulated: {
      const auto& xs = spec_.nodes;
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      const double h = xs[i + 1] - xs[i];
      const double y0 = node_cdf_[i];
      const double y1 = node_cdf_[i + 1];
      double m0 = spec_.values[i];
      double m1 = spec_.values[i + 1];
      // Fritsch-Carlson limiter keeps each cell monotone.
      const double secant = (y1 - y0) / h;
      const double alpha = m0 / secant;
      const double beta = m1 / secant;
      const double r2 = alpha * alpha + beta * beta;
      if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        m0 = tau * alpha * secant;
        m1 = tau * beta * secant;
      }
      value = hermite(x - xs[i], h, y0, y1, m0, m1);
      break;
    }
  }
  return std::clamp(value, 0.0, mass_);
}

double Density::inverse_cdf(double p, const Tolerances& tol) const {
  const Interval iv = spec_.interval;
  if (!(p >= 0.0) || !(p <= mass_ * (1.0 + 1e-15) + 1e-15)) {
    std::ostringstream msg;
    msg << "inverse_cdf probability " << p << " outside [0, " << mass_ << "]";
    throw Error(ErrorCode::Domain, msg.str());
  }
  if (p == 0.0) return iv.lo;
  if (p >= mass_) return iv.hi;
  if (spec_.kind == DensityKind::Uniform) return std::min(iv.lo + p / spec_.height, iv.hi);

  Tolerances local = tol;
  local.root_abs_tol = tol.root_abs_tol / std::max(1.0, peak_);
  return find_root_monotone([&](double x) { return cdf(x) - p; }, Bracket{iv.lo, iv.hi}, local);
}

Density make_density(const DensitySpec& spec) {
  Density d;
  d.spec_ = spec;
  DensitySpec& s = d.spec_;

  switch (s.kind) {
    case DensityKind::Uniform:
      check_interval(s.interval);
      if (!(s.height > 0.0) || !std::isfinite(s.height)) {
        std::ostringstream msg;
        msg << "uniform density height " << s.height << " is not positive";
        throw Error(ErrorCode::Positivity, msg.str());
      }
      break;
    case DensityKind::Polynomial:
      check_interval(s.interval);
      if (s.coefficients.empty())
        throw Error(ErrorCode::InvalidArgument, "polynomial density needs at least one coefficient");
      for (double c : s.coefficients)
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "polynomial coefficient is not finite");
      d.antiderivative_.assign(s.coefficients.size() + 1, 0.0);
      for (std::size_t i = 0; i < s.coefficients.size(); ++i)
        d.antiderivative_[i + 1] = s.coefficients[i] / static_cast<double>(i + 1);
      break;
    case DensityKind::Tabulated: {
      if (s.nodes.size() < 2 || s.nodes.size() != s.values.size())
        throw Error(ErrorCode::InvalidArgument,
                    "tabulated density needs at least two nodes and one value per node");
      for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        if (!std::isfinite(s.nodes[i]) || !std::isfinite(s.values[i]))
          throw Error(ErrorCode::InvalidArgument, "tabulated density contains a non-finite entry");
        if (i > 0 && !(s.nodes[i] > s.nodes[i - 1]))
          throw Error(ErrorCode::InvalidArgument, "tabulated nodes must be strictly increasing");
        if (!(s.values[i] > 0.0)) {
          std::ostringstream msg;
          msg << "tabulated density value " << s.values[i] << " at x=" << s.nodes[i]
              << " is not positive";
          throw Error(ErrorCode::Positivity, msg.str());
        }
      }
      s.interval = {s.nodes.front(), s.nodes.back()};
      check_interval(s.interval);
      break;
    }
  }

  const Interval iv = s.interval;
  // Interior samples must be strictly positive; endpoint values may vanish
  // (e.g. 3x^2 on (0, 1)) since positivity is only required on the open interval.
  double peak = 0.0;
  for (int i = 0; i <= kPositivitySamples + 1; ++i) {
    const double x = i == kPositivitySamples + 1
                         ? iv.hi
                         : iv.lo + iv.length() * static_cast<double>(i) / (kPositivitySamples + 1);
    const double v = d(x);
    const bool endpoint = i == 0 || i == kPositivitySamples + 1;
    if (!std::isfinite(v) || v < 0.0 || (!endpoint && v == 0.0)) {
      std::ostringstream msg;
      msg << "density is not positive at x=" << x << " (value " << v << ")";
      throw Error(ErrorCode::Positivity, msg.str());
    }
    peak = std::max(peak, v);
  }
  d.peak_ = peak;

  Tolerances tol;
  tol.quad_abs_tol = 1e-14;
  if (s.kind == DensityKind::Tabulated) {
    d.node_cdf_.assign(s.nodes.size(), 0.0);
    for (std::size_t i = 1; i < s.nodes.size(); ++i)
      d.node_cdf_[i] = d.node_cdf_[i - 1] + integrate(std::cref(d), s.nodes[i - 1], s.nodes[i], tol);
    d.mass_ = d.node_cdf_.back();
  } else {
    d.mass_ = integrate(std::cref(d), iv.lo, iv.hi, tol);
  }
  if (!(d.mass_ > 0.0)) throw Error(ErrorCode::Degenerate, "density has nonpositive mass");
  d.normalized_ = std::abs(d.mass_ - 1.0) <= kNormalizedTol;
  return d;
}

Density normalize(const Density& d) {
  if (!(d.mass() > 0.0)) throw Error(ErrorCode::Degenerate, "cannot normalize a density with mass <= 0");
  if (d.normalized()) return d;
  const double scale = 1.0 / d.mass();
  DensitySpec s = d.spec();
  s.height *= scale;
  for (double& c : s.coefficients) c *= scale;
  for (double& v : s.values) v *= scale;
  return make_density(s);
}

double cdf(const Density& d, double x) { return d.cdf(x); }

double inverse_cdf(const Density& d, double p, const Tolerances& tol) { return d.inverse_cdf(p, tol); }

TransportProblem make_problem(Density source, Density sink) {
  const Interval s = source.interval();
  const Interval t = sink.interval();
  const Interval& left = s.lo <= t.lo ? s : t;
  const Interval& right = s.lo <= t.lo ? t : s;
  Layout layout = Layout::Overlapping;
  if (left.hi < right.lo)
    layout = Layout::Disjoint;
  else if (left.hi == right.lo)
    layout = Layout::Touching;
  return TransportProblem{std::move(source), std::move(sink), layout};
}

ProblemDiagnostics validate_problem(const TransportProblem& problem) {
  ProblemDiagnostics diag;
  diag.layout = problem.layout;
  diag.source_balance_residual = std::abs(problem.source.mass() - 1.0);
  diag.sink_balance_residual = std::abs(problem.sink.mass() - 1.0);
  diag.experimental = problem.layout != Layout::Disjoint;
  if (diag.experimental)
    diag.notes.push_back(std::string("layout '") + to_string(problem.layout) +
                         "' is outside the certified pipeline; experimental path only");
  if (diag.source_balance_residual > kBalanceTol || diag.sink_balance_residual > kBalanceTol) {
    std::ostringstream msg;
    msg << "unbalanced densities: source mass " << problem.source.mass() << ", sink mass "
        << problem.sink.mass() << "; both must equal 1 (apply normalize() first)";
    throw Error(ErrorCode::Balance, msg.str());
  }
  return diag;
}

}  // namespace kantorovich
