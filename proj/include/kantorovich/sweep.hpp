#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kantorovich/density.hpp"
#include "kantorovich/numerics.hpp"
#include "kantorovich/potential.hpp"

namespace kantorovich {

inline constexpr const char* kSweepHeader =
    "k,C_k,D_k,I_primal,I_dual,gap,K_k,K_tent,deficit,sup_slope,sup_u,el_residual,wall_ms";
inline constexpr const char* kSamplesHeader = "x,side,theta,lambda,eta,u";

struct SweepRow {
  double k = 0.0;
  double C_k = 0.0;
  double D_k = 0.0;
  double I_primal = 0.0;
  double I_dual = 0.0;
  double gap = 0.0;
  double K_k = 0.0;
  double K_tent = 0.0;
  double deficit = 0.0;
  double sup_slope = 0.0;
  double sup_u = 0.0;
  double el_residual = 0.0;
  double wall_ms = 0.0;
};

SweepRow sweep_row(const TransportProblem& problem, RegIndex k, const Tolerances& tol);

/// One row per k, computed on up to `threads` workers (0: hardware
/// concurrency) and returned in ascending k.
std::vector<SweepRow> run_sweep(const TransportProblem& problem, std::span<const double> k_values,
                                const Tolerances& tol, unsigned threads = 0);

// 17 significant digits; reading the file back reproduces every value exactly.
void write_csv(std::span<const SweepRow> rows, std::ostream& out);
void emit_csv(std::span<const SweepRow> rows, const std::string& path);
std::vector<SweepRow> read_csv(std::istream& in);

void write_potential_samples(const PotentialSolution& sol, std::ostream& out);
void write_potential_samples(const PotentialSolution& sol, const std::string& path);

}  // namespace kantorovich
