#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kantorovich/density.hpp"
#include "kantorovich/numerics.hpp"

namespace kantorovich {

enum class RunMode { Solve, Sweep, Verify, Oracle };

const char* to_string(RunMode mode) noexcept;

struct RunConfig {
  DensitySpec omega;
  DensitySpec omega_star;
  bool normalize_omega = false;
  bool normalize_omega_star = false;
  std::vector<double> k_values{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  Tolerances tolerances;
  std::string output;
  RunMode mode = RunMode::Sweep;
  bool experimental_overlap = false;

  // Builds (and, if requested, normalizes) both densities.
  TransportProblem problem() const;
};

/// Parses a JSON run configuration:
///
///   {
///     "omega":      {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
///     "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "polynomial", "coefficients": [0, 0, 3]}},
///     "k_values":   [1, 2, 4],
///     "tolerances": {"quad_abs_tol": 1e-10, "root_abs_tol": 1e-12,
///                    "max_quad_depth": 40, "max_root_iters": 200},
///     "output": "sweep.csv",
///     "mode": "sweep",
///     "experimental_overlap": false
///   }
///
/// Density kinds: uniform {height}, polynomial {coefficients}, tabulated
/// {nodes, values}; each may set "normalize": true. Unknown keys are rejected.
/// Non-disjoint supports are rejected unless experimental overlap is enabled
/// either in the document or through allow_experimental.
RunConfig parse_config(std::string_view text, bool allow_experimental = false);

RunConfig load_config(const std::string& path, bool allow_experimental = false);

}  // namespace kantorovich
