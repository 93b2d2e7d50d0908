#include "kantorovich/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "kantorovich/errors.hpp"

namespace kantorovich {

void Tolerances::validate() const {
  if (!(quad_abs_tol > 0.0) || !std::isfinite(quad_abs_tol))
    throw Error(ErrorCode::InvalidArgument, "quad_abs_tol must be a positive finite number");
  if (!(root_abs_tol > 0.0) || !std::isfinite(root_abs_tol))
    throw Error(ErrorCode::InvalidArgument, "root_abs_tol must be a positive finite number");
  if (max_quad_depth < 1) throw Error(ErrorCode::InvalidArgument, "max_quad_depth must be >= 1");
  if (max_root_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_root_iters must be >= 1");
}

namespace {

double checked_eval(const RealFunction& f, double x, long& counter) {
  ++counter;
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "integrand is not finite at x=" << x;
    throw Error(ErrorCode::Evaluation, msg.str());
  }
  return y;
}

// Simpson panel on [a, b] holding the five equispaced samples needed for the
// coarse (3-point) and fine (5-point) rules.
struct Panel {
  double a, b;
  double fa, fl, fm, fr, fb;
  int depth;
  double value;  // Richardson-extrapolated fine estimate
  double error;
  std::size_t segment;

  void finish() {
    const double h = b - a;
    const double coarse = h / 6.0 * (fa + 4.0 * fm + fb);
    const double fine = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
    value = fine + (fine - coarse) / 15.0;
    error = std::abs(fine - coarse) / 15.0;
  }

  // False once the quarter points collide in floating point.
  bool resolvable() const {
    const double m = 0.5 * (a + b);
    const double q1 = 0.5 * (a + m);
    const double q3 = 0.5 * (m + b);
    return q1 > a && m > q1 && q3 > m && b > q3;
  }
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

// Samples f, optionally clamped one ulp inside the segment a panel belongs to,
// so a jump sitting exactly on a break is seen as the one-sided limit from
// within each segment.
struct Sampler {
  const RealFunction& f;
  std::vector<double> inner_lo, inner_hi;  // per segment; empty when not clamping
  long evaluations = 0;

  double operator()(double x, std::size_t seg) {
    if (!inner_lo.empty()) x = std::clamp(x, inner_lo[seg], inner_hi[seg]);
    return checked_eval(f, x, evaluations);
  }
};

Panel make_panel(Sampler& sample, std::size_t seg, double a, double fa, double fm, double fb, double b,
                 int depth) {
  Panel p{a, b, fa, 0.0, fm, 0.0, fb, depth, 0.0, 0.0, seg};
  p.fl = sample(0.5 * (a + 0.5 * (a + b)), seg);
  p.fr = sample(0.5 * (0.5 * (a + b) + b), seg);
  p.finish();
  return p;
}

// Globally adaptive Simpson over consecutive segments [cuts[i], cuts[i+1]],
// all refined from one priority queue against one error budget.
double adaptive(const RealFunction& f, const std::vector<double>& cuts, bool one_sided, const Tolerances& tol,
                QuadratureStats* stats) {
  const std::size_t segments = cuts.size() - 1;
  Sampler sample{f, {}, {}};
  if (one_sided) {
    for (std::size_t s = 0; s < segments; ++s) {
      const double a_in = std::nextafter(cuts[s], cuts[s + 1]);
      const double b_in = std::nextafter(cuts[s + 1], cuts[s]);
      // Segments only a couple of ulps wide are sampled at their ends.
      const bool room = a_in < b_in;
      sample.inner_lo.push_back(room ? a_in : cuts[s]);
      sample.inner_hi.push_back(room ? b_in : cuts[s + 1]);
    }
  }

  std::priority_queue<Panel, std::vector<Panel>, ByError> active;
  std::vector<Panel> frozen;

  const int per_segment = std::max<int>(1, 4 / static_cast<int>(segments));
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    const int m = 2 * per_segment;
    std::vector<double> nodes(m + 1);
    std::vector<double> values(m + 1);
    for (int i = 0; i <= m; ++i) {
      nodes[i] = i == m ? hi : lo + (hi - lo) * static_cast<double>(i) / m;
      values[i] = sample(nodes[i], s);
    }
    for (int i = 0; i < per_segment; ++i) {
      Panel p = make_panel(sample, s, nodes[2 * i], values[2 * i], values[2 * i + 1], values[2 * i + 2],
                           nodes[2 * i + 2], 1);
      total += p.value;
      total_err += p.error;
      active.push(p);
    }
  }

  auto resum = [&] {
    total = 0.0;
    total_err = 0.0;
    std::vector<Panel> all(frozen);
    auto copy = active;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : all) {
      total += p.value;
      total_err += p.error;
    }
  };

  int deepest = 1;
  long splits = 0;
  double frozen_err = 0.0;
  double unresolvable_err = 0.0;  // panels at floating-point resolution; nothing more to gain
  for (;;) {
    if (total_err - unresolvable_err <= tol.quad_abs_tol * (1.0 + std::abs(total))) {
      resum();
      if (total_err - unresolvable_err <= tol.quad_abs_tol * (1.0 + std::abs(total))) break;
    }
    if (active.empty() || frozen_err > tol.quad_abs_tol * (1.0 + std::abs(total))) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << cuts.front() << ", " << cuts.back() << "] reached depth "
          << tol.max_quad_depth << " with error estimate " << total_err;
      throw QuadratureError(msg.str(), total, total_err);
    }
    Panel p = active.top();
    active.pop();
    if (!p.resolvable()) {
      frozen.push_back(p);
      unresolvable_err += p.error;
      continue;
    }
    if (p.depth >= tol.max_quad_depth) {
      frozen.push_back(p);
      frozen_err += p.error;
      continue;
    }
    total -= p.value;
    total_err -= p.error;
    const double m = 0.5 * (p.a + p.b);
    Panel left = make_panel(sample, p.segment, p.a, p.fa, p.fl, p.fm, m, p.depth + 1);
    Panel right = make_panel(sample, p.segment, m, p.fm, p.fr, p.fb, p.b, p.depth + 1);
    deepest = std::max(deepest, p.depth + 1);
    total += left.value + right.value;
    total_err += left.error + right.error;
    active.push(left);
    active.push(right);
    // Running sums drift under repeated subtraction; refresh them now and then.
    if (++splits % 4096 == 0) resum();
  }

  if (stats) {
    stats->evaluations = sample.evaluations;
    stats->max_depth = deepest;
    stats->error_estimate = total_err;
  }
  return total;
}

}  // namespace

double integrate(const RealFunction& f, double lo, double hi, const Tolerances& tol,
                 QuadratureStats* stats) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::Domain, "integration limits must be finite");
  if (lo == hi) {
    if (stats) *stats = QuadratureStats{};
    return 0.0;
  }
  if (lo > hi) return -integrate(f, hi, lo, tol, stats);
  return adaptive(f, {lo, hi}, false, tol, stats);
}

double integrate_piecewise(const RealFunction& f, double lo, double hi,
                           std::span<const double> breaks, const Tolerances& tol,
                           QuadratureStats* stats) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::Domain, "integration limits must be finite");
  if (lo == hi) {
    if (stats) *stats = QuadratureStats{};
    return 0.0;
  }
  if (lo > hi) return -integrate_piecewise(f, hi, lo, breaks, tol, stats);
  std::vector<double> cuts{lo};
  for (double b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return adaptive(f, cuts, true, tol, stats);
}

double find_root_monotone(const RealFunction& g, Bracket bracket, const Tolerances& tol,
                          RootStats* stats) {
  double a = bracket.lo;
  double b = bracket.hi;
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream msg;
    msg << "invalid bracket [" << a << ", " << b << "]";
    throw Error(ErrorCode::Bracket, msg.str());
  }
  auto eval = [&](double x) {
    const double y = g(x);
    if (std::isnan(y) || std::isinf(y)) {
      std::ostringstream msg;
      msg << "root function is not finite at x=" << x;
      throw Error(ErrorCode::Evaluation, msg.str());
    }
    return y;
  };

  double ga = eval(a);
  double gb = eval(b);
  auto report = [&](int it, double w) {
    if (stats) *stats = RootStats{it, w};
  };
  if (ga == 0.0) {
    report(0, b - a);
    return a;
  }
  if (gb == 0.0) {
    report(0, b - a);
    return b;
  }
  if ((ga > 0.0) == (gb > 0.0)) {
    std::ostringstream msg;
    msg << "no sign change on [" << a << ", " << b << "]: g(lo)=" << ga << ", g(hi)=" << gb;
    throw Error(ErrorCode::Bracket, msg.str());
  }

  // Illinois weights live in wa/wb; ga/gb keep the true residuals.
  double wa = ga;
  double wb = gb;
  int retained = 0;  // -1: a kept last step, +1: b kept last step
  bool bisect = false;
  int it = 0;
  for (;;) {
    const double width = b - a;
    const double mid = a + 0.5 * width;
    if (width <= tol.root_abs_tol || !(mid > a && mid < b)) break;
    if (it >= tol.max_root_iters) {
      std::ostringstream msg;
      msg << "root bracket did not shrink below " << tol.root_abs_tol << " within "
          << tol.max_root_iters << " iterations (width " << width << ")";
      throw Error(ErrorCode::Root, msg.str());
    }
    ++it;

    double x = mid;
    if (!bisect) {
      x = (a * wb - b * wa) / (wb - wa);
      if (!(x > a && x < b)) x = mid;
      const double nudge = 0.5 * tol.root_abs_tol;
      if (x - a < nudge)
        x = std::min(a + nudge, mid);
      else if (b - x < nudge)
        x = std::max(b - nudge, mid);
    }
    const double gx = eval(x);
    if (gx == 0.0) {
      report(it, 0.0);
      return x;
    }
    if ((gx > 0.0) == (ga > 0.0)) {
      a = x;
      ga = wa = gx;
      if (retained == +1) wb *= 0.5;
      retained = +1;
    } else {
      b = x;
      gb = wb = gx;
      if (retained == -1) wa *= 0.5;
      retained = -1;
    }
    bisect = (b - a) > 0.5 * width;
  }
  report(it, b - a);
  return std::abs(ga) <= std::abs(gb) ? a : b;
}

}  // namespace kantorovich
