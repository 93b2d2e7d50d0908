#include "kantorovich/kantorovich.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "kantorovich/config.hpp"
#include "kantorovich/energy.hpp"
#include "kantorovich/errors.hpp"
#include "kantorovich/oracle.hpp"
#include "kantorovich/potential.hpp"
#include "kantorovich/sweep.hpp"
#include "kantorovich/verify.hpp"

namespace kt = kantorovich;

struct kt_config {
  kt::RunConfig config;
};

struct kt_problem {
  kt::TransportProblem problem;
};

struct kt_solution {
  kt::PotentialSolution solution;
};

struct kt_verify_report {
  kt::VerifyReport report;
};

namespace {

thread_local std::string g_last_error;

kt_status status_for(kt::ErrorCode code) {
  switch (code) {
    case kt::ErrorCode::InvalidArgument: return KT_ERR_INVALID_ARGUMENT;
    case kt::ErrorCode::Domain: return KT_ERR_DOMAIN;
    case kt::ErrorCode::Positivity: return KT_ERR_POSITIVITY;
    case kt::ErrorCode::Degenerate: return KT_ERR_DEGENERATE;
    case kt::ErrorCode::Balance: return KT_ERR_BALANCE;
    case kt::ErrorCode::Layout: return KT_ERR_LAYOUT;
    case kt::ErrorCode::Bracket: return KT_ERR_BRACKET;
    case kt::ErrorCode::Evaluation: return KT_ERR_EVALUATION;
    case kt::ErrorCode::Quadrature: return KT_ERR_QUADRATURE;
    case kt::ErrorCode::Root: return KT_ERR_ROOT;
    case kt::ErrorCode::InfeasibleStress: return KT_ERR_INFEASIBLE_STRESS;
    case kt::ErrorCode::State: return KT_ERR_STATE;
    case kt::ErrorCode::Config: return KT_ERR_CONFIG;
    case kt::ErrorCode::Io: return KT_ERR_IO;
    case kt::ErrorCode::Feasibility: return KT_ERR_FEASIBILITY;
    case kt::ErrorCode::Unsupported: return KT_ERR_UNSUPPORTED;
  }
  return KT_ERR_INTERNAL;
}

template <class F>
kt_status guarded(F&& body) {
  try {
    body();
    return KT_OK;
  } catch (const kt::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KT_ERR_INTERNAL;
  }
}

kt_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return KT_ERR_INVALID_ARGUMENT;
}

kt::Tolerances to_cpp(const kt_tolerances* tol) {
  kt::Tolerances t;
  if (tol) {
    t.quad_abs_tol = tol->quad_abs_tol;
    t.root_abs_tol = tol->root_abs_tol;
    t.max_quad_depth = tol->max_quad_depth;
    t.max_root_iters = tol->max_root_iters;
  }
  t.validate();
  return t;
}

kt_sweep_row to_c(const kt::SweepRow& r) {
  return {r.k,      r.C_k,     r.D_k,       r.I_primal, r.I_dual,      r.gap,    r.K_k,
          r.K_tent, r.deficit, r.sup_slope, r.sup_u,    r.el_residual, r.wall_ms};
}

kt::SweepRow to_cpp(const kt_sweep_row& r) {
  return {r.k,      r.C_k,     r.D_k,       r.I_primal, r.I_dual,      r.gap,    r.K_k,
          r.K_tent, r.deficit, r.sup_slope, r.sup_u,    r.el_residual, r.wall_ms};
}

}  // namespace

extern "C" {

const char* kt_status_name(kt_status status) {
  switch (status) {
    case KT_OK: return "ok";
    case KT_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case KT_ERR_DOMAIN: return "domain";
    case KT_ERR_POSITIVITY: return "positivity";
    case KT_ERR_DEGENERATE: return "degenerate_density";
    case KT_ERR_BALANCE: return "balance";
    case KT_ERR_LAYOUT: return "layout";
    case KT_ERR_BRACKET: return "bracket";
    case KT_ERR_EVALUATION: return "evaluation";
    case KT_ERR_QUADRATURE: return "quadrature";
    case KT_ERR_ROOT: return "root";
    case KT_ERR_INFEASIBLE_STRESS: return "infeasible_stress";
    case KT_ERR_STATE: return "state";
    case KT_ERR_CONFIG: return "config";
    case KT_ERR_IO: return "io";
    case KT_ERR_FEASIBILITY: return "feasibility";
    case KT_ERR_UNSUPPORTED: return "unsupported";
    case KT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* kt_last_error(void) { return g_last_error.c_str(); }

void kt_tolerances_default(kt_tolerances* out) {
  if (!out) return;
  const kt::Tolerances t;
  *out = {t.quad_abs_tol, t.root_abs_tol, t.max_quad_depth, t.max_root_iters};
}

kt_status kt_config_parse(const char* text, int allow_experimental, kt_config** out) {
  if (!text || !out) return null_argument("text/out");
  *out = nullptr;
  return guarded([&] { *out = new kt_config{kt::parse_config(text, allow_experimental != 0)}; });
}

kt_status kt_config_load(const char* path, int allow_experimental, kt_config** out) {
  if (!path || !out) return null_argument("path/out");
  *out = nullptr;
  return guarded([&] { *out = new kt_config{kt::load_config(path, allow_experimental != 0)}; });
}

void kt_config_free(kt_config* config) { delete config; }

size_t kt_config_k_count(const kt_config* config) { return config ? config->config.k_values.size() : 0; }

double kt_config_k_value(const kt_config* config, size_t index) {
  if (!config || index >= config->config.k_values.size()) return 0.0;
  return config->config.k_values[index];
}

kt_status kt_config_tolerances(const kt_config* config, kt_tolerances* out) {
  if (!config || !out) return null_argument("config/out");
  const kt::Tolerances& t = config->config.tolerances;
  *out = {t.quad_abs_tol, t.root_abs_tol, t.max_quad_depth, t.max_root_iters};
  return KT_OK;
}

const char* kt_config_output(const kt_config* config) { return config ? config->config.output.c_str() : ""; }

kt_mode kt_config_mode(const kt_config* config) {
  if (!config) return KT_MODE_SWEEP;
  return static_cast<kt_mode>(config->config.mode);
}

int kt_config_experimental(const kt_config* config) { return config && config->config.experimental_overlap; }

kt_status kt_config_problem(const kt_config* config, kt_problem** out) {
  if (!config || !out) return null_argument("config/out");
  *out = nullptr;
  return guarded([&] { *out = new kt_problem{config->config.problem()}; });
}

void kt_problem_free(kt_problem* problem) { delete problem; }

kt_status kt_problem_validate(const kt_problem* problem, kt_diagnostics* out) {
  if (!problem || !out) return null_argument("problem/out");
  return guarded([&] {
    const kt::ProblemDiagnostics d = kt::validate_problem(problem->problem);
    *out = {static_cast<kt_layout>(d.layout), d.source_balance_residual, d.sink_balance_residual,
            d.experimental ? 1 : 0};
  });
}

kt_status kt_solve(const kt_problem* problem, double k, const kt_tolerances* tol, int experimental,
                   kt_solution** out) {
  if (!problem || !out) return null_argument("problem/out");
  *out = nullptr;
  return guarded([&] {
    kt::SolveOptions opts;
    opts.experimental_overlap = experimental != 0;
    *out = new kt_solution{kt::solve_potential(kt::RegIndex(k), problem->problem, to_cpp(tol), opts)};
  });
}

void kt_solution_free(kt_solution* solution) { delete solution; }

kt_status kt_solution_constants(const kt_solution* solution, double* c_k, double* d_k) {
  if (!solution || !c_k || !d_k) return null_argument("solution/c_k/d_k");
  return guarded([&] {
    *c_k = solution->solution.C();
    *d_k = solution->solution.D();
  });
}

kt_status kt_solution_evaluate(const kt_solution* solution, double x, double* u) {
  if (!solution || !u) return null_argument("solution/u");
  return guarded([&] { *u = solution->solution.evaluate(x); });
}

size_t kt_solution_piece_count(const kt_solution* solution) {
  return solution ? solution->solution.pieces().size() : 0;
}

kt_status kt_solution_boundary_residual(const kt_solution* solution, double* max_abs) {
  if (!solution || !max_abs) return null_argument("solution/max_abs");
  double worst = 0.0;
  for (const auto& p : solution->solution.pieces())
    worst = std::max({worst, std::abs(p.u.front()), std::abs(p.u.back())});
  *max_abs = worst;
  return KT_OK;
}

kt_status kt_solution_write_samples(const kt_solution* solution, const char* path) {
  if (!solution || !path) return null_argument("solution/path");
  return guarded([&] { kt::write_potential_samples(solution->solution, std::string(path)); });
}

kt_status kt_solution_energy(const kt_solution* solution, kt_energy_report* out) {
  if (!solution || !out) return null_argument("solution/out");
  return guarded([&] {
    const kt::EnergyReport r = kt::energy_report(solution->solution);
    *out = {r.k,          r.I_primal,    r.I_dual,           r.Xi,
            r.K_value,    r.duality_gap, r.sup_slope,        r.el_residual,
            r.el_exact_residual, r.second_var_min_primal, r.second_var_max_dual};
  });
}

kt_status kt_sweep(const kt_problem* problem, const double* k_values, size_t n, const kt_tolerances* tol,
                   kt_sweep_row* rows_out) {
  if (!problem || (n > 0 && (!k_values || !rows_out))) return null_argument("problem/k_values/rows_out");
  return guarded([&] {
    const auto rows = kt::run_sweep(problem->problem, std::span<const double>(k_values, n), to_cpp(tol));
    for (size_t i = 0; i < rows.size(); ++i) rows_out[i] = to_c(rows[i]);
  });
}

kt_status kt_write_sweep_csv(const kt_sweep_row* rows, size_t n, const char* path) {
  if ((n > 0 && !rows) || !path) return null_argument("rows/path");
  return guarded([&] {
    std::vector<kt::SweepRow> cpp;
    for (size_t i = 0; i < n; ++i) cpp.push_back(to_cpp(rows[i]));
    kt::emit_csv(cpp, path);
  });
}

kt_status kt_oracle(const kt_problem* problem, kt_oracle_values* out) {
  if (!problem || !out) return null_argument("problem/out");
  return guarded([&] {
    out->K_tent = kt::tent_value(problem->problem);
    out->C_limit = kt::limit_constant(problem->problem, kt::Side::Source);
    out->D_limit = kt::limit_constant(problem->problem, kt::Side::Sink);
  });
}

kt_status kt_verify(const kt_problem* problem, double k, const kt_tolerances* tol, const char* fault,
                    kt_verify_report** out) {
  if (!problem || !out) return null_argument("problem/out");
  *out = nullptr;
  return guarded([&] {
    *out = new kt_verify_report{
        kt::run_verification(problem->problem, kt::RegIndex(k), to_cpp(tol), fault ? fault : "")};
  });
}

void kt_verify_free(kt_verify_report* report) { delete report; }

size_t kt_verify_count(const kt_verify_report* report) { return report ? report->report.checks.size() : 0; }

kt_status kt_verify_check(const kt_verify_report* report, size_t index, const char** name, double* value,
                          double* threshold, int* passed) {
  if (!report) return null_argument("report");
  if (index >= report->report.checks.size()) {
    g_last_error = "check index out of range";
    return KT_ERR_INVALID_ARGUMENT;
  }
  const kt::CheckResult& c = report->report.checks[index];
  if (name) *name = c.name.c_str();
  if (value) *value = c.value;
  if (threshold) *threshold = c.threshold;
  if (passed) *passed = c.passed ? 1 : 0;
  return KT_OK;
}

int kt_verify_all_passed(const kt_verify_report* report) { return report && report->report.all_passed(); }

}  // extern "C"
