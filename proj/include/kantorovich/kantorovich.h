/* C interface to the approximate Kantorovich potential solver.
 *
 * All objects are opaque handles created by kt_*_create/parse/solve calls and
 * released with the matching kt_*_free. Every fallible call returns a
 * kt_status; on failure kt_last_error() holds a message for the calling
 * thread until its next failing call. Handles are immutable after creation
 * and may be shared across threads.
 */
#ifndef KANTOROVICH_H
#define KANTOROVICH_H

#include <stddef.h>

#if defined(KT_BUILDING_LIBRARY)
#define KT_API __attribute__((visibility("default")))
#else
#define KT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kt_status {
  KT_OK = 0,
  KT_ERR_INVALID_ARGUMENT = 1,
  KT_ERR_DOMAIN = 2,
  KT_ERR_POSITIVITY = 3,
  KT_ERR_DEGENERATE = 4,
  KT_ERR_BALANCE = 5,
  KT_ERR_LAYOUT = 6,
  KT_ERR_BRACKET = 7,
  KT_ERR_EVALUATION = 8,
  KT_ERR_QUADRATURE = 9,
  KT_ERR_ROOT = 10,
  KT_ERR_INFEASIBLE_STRESS = 11,
  KT_ERR_STATE = 12,
  KT_ERR_CONFIG = 13,
  KT_ERR_IO = 14,
  KT_ERR_FEASIBILITY = 15,
  KT_ERR_UNSUPPORTED = 16,
  KT_ERR_INTERNAL = 17
} kt_status;

typedef enum kt_side { KT_SIDE_SOURCE = 0, KT_SIDE_SINK = 1 } kt_side;

typedef enum kt_mode { KT_MODE_SOLVE = 0, KT_MODE_SWEEP = 1, KT_MODE_VERIFY = 2, KT_MODE_ORACLE = 3 } kt_mode;

typedef enum kt_layout { KT_LAYOUT_DISJOINT = 0, KT_LAYOUT_TOUCHING = 1, KT_LAYOUT_OVERLAPPING = 2 } kt_layout;

typedef struct kt_tolerances {
  double quad_abs_tol;
  double root_abs_tol;
  int max_quad_depth;
  int max_root_iters;
} kt_tolerances;

typedef struct kt_energy_report {
  double k;
  double I_primal;
  double I_dual;
  double Xi;
  double K_value;
  double duality_gap;
  double sup_slope;
  double el_residual;
  double el_exact_residual;
  double second_var_min_primal;
  double second_var_max_dual;
} kt_energy_report;

typedef struct kt_sweep_row {
  double k, C_k, D_k, I_primal, I_dual, gap, K_k, K_tent, deficit, sup_slope, sup_u, el_residual, wall_ms;
} kt_sweep_row;

typedef struct kt_oracle_values {
  double K_tent;
  double C_limit;
  double D_limit;
} kt_oracle_values;

typedef struct kt_diagnostics {
  kt_layout layout;
  double source_balance_residual;
  double sink_balance_residual;
  int experimental;
} kt_diagnostics;

typedef struct kt_config kt_config;
typedef struct kt_problem kt_problem;
typedef struct kt_solution kt_solution;
typedef struct kt_verify_report kt_verify_report;

KT_API const char* kt_status_name(kt_status status);
KT_API const char* kt_last_error(void);

KT_API void kt_tolerances_default(kt_tolerances* out);

/* Configuration documents (JSON). */
KT_API kt_status kt_config_parse(const char* text, int allow_experimental, kt_config** out);
KT_API kt_status kt_config_load(const char* path, int allow_experimental, kt_config** out);
KT_API void kt_config_free(kt_config* config);
KT_API size_t kt_config_k_count(const kt_config* config);
KT_API double kt_config_k_value(const kt_config* config, size_t index);
KT_API kt_status kt_config_tolerances(const kt_config* config, kt_tolerances* out);
KT_API const char* kt_config_output(const kt_config* config); /* "" when unset */
KT_API kt_mode kt_config_mode(const kt_config* config);
KT_API int kt_config_experimental(const kt_config* config);
KT_API kt_status kt_config_problem(const kt_config* config, kt_problem** out);

/* Problems. */
KT_API void kt_problem_free(kt_problem* problem);
KT_API kt_status kt_problem_validate(const kt_problem* problem, kt_diagnostics* out);

/* Single solves. */
KT_API kt_status kt_solve(const kt_problem* problem, double k, const kt_tolerances* tol, int experimental,
                          kt_solution** out);
KT_API void kt_solution_free(kt_solution* solution);
KT_API kt_status kt_solution_constants(const kt_solution* solution, double* c_k, double* d_k);
KT_API kt_status kt_solution_evaluate(const kt_solution* solution, double x, double* u);
KT_API size_t kt_solution_piece_count(const kt_solution* solution);
KT_API kt_status kt_solution_boundary_residual(const kt_solution* solution, double* max_abs);
KT_API kt_status kt_solution_write_samples(const kt_solution* solution, const char* path);
KT_API kt_status kt_solution_energy(const kt_solution* solution, kt_energy_report* out);

/* Sweeps: rows_out must hold n rows; rows come back in ascending k. */
KT_API kt_status kt_sweep(const kt_problem* problem, const double* k_values, size_t n, const kt_tolerances* tol,
                          kt_sweep_row* rows_out);
KT_API kt_status kt_write_sweep_csv(const kt_sweep_row* rows, size_t n, const char* path);

/* Limit oracle. */
KT_API kt_status kt_oracle(const kt_problem* problem, kt_oracle_values* out);

/* Invariant suite. fault may be NULL or name one check to corrupt (test hook). */
KT_API kt_status kt_verify(const kt_problem* problem, double k, const kt_tolerances* tol, const char* fault,
                           kt_verify_report** out);
KT_API void kt_verify_free(kt_verify_report* report);
KT_API size_t kt_verify_count(const kt_verify_report* report);
KT_API kt_status kt_verify_check(const kt_verify_report* report, size_t index, const char** name, double* value,
                                 double* threshold, int* passed);
KT_API int kt_verify_all_passed(const kt_verify_report* report);

#ifdef __cplusplus
}
#endif

#endif /* KANTOROVICH_H */
