#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kantorovich/density.hpp"
#include "kantorovich/numerics.hpp"
#include "kantorovich/potential.hpp"

namespace kantorovich {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  double k = 0.0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Names accepted as fault-injection targets, in the order the checks run.
std::vector<std::string> verification_check_names();

/// Smallest I(u + eps phi) - I(u) over `count` feasible perturbations. Step
/// sizes keep |u_x + eps phi_x| <= 1 on the solution grid.
double minimizer_margin(const PotentialSolution& sol, int count, std::uint64_t seed);

/// Solves at k and runs every invariant of the solution, its energies and the
/// limit oracle. A non-empty `fault` names one check whose measured quantity is
/// corrupted before comparison (test hook); unknown names throw.
VerifyReport run_verification(const TransportProblem& problem, RegIndex k, const Tolerances& tol,
                              std::string_view fault = {});

}  // namespace kantorovich
