// Command-line front end. Talks to the solver only through the C API.
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kantorovich/kantorovich.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvariant = 4;

struct Options {
  std::string config;
  std::optional<double> k;
  std::string out;
  bool experimental = false;
  std::string fault;
};

// Failure carrying the status that caused it; main() turns it into the stderr line.
struct Failure {
  kt_status status;
  std::string message;
};

int exit_code_for(kt_status status) {
  switch (status) {
    case KT_OK: return kExitOk;
    case KT_ERR_INVALID_ARGUMENT:
    case KT_ERR_DOMAIN:
    case KT_ERR_POSITIVITY:
    case KT_ERR_DEGENERATE:
    case KT_ERR_BALANCE:
    case KT_ERR_LAYOUT:
    case KT_ERR_CONFIG:
    case KT_ERR_IO:
    case KT_ERR_UNSUPPORTED:
      return kExitConfig;
    case KT_ERR_FEASIBILITY:
      return kExitInvariant;
    default:
      return kExitNumerical;
  }
}

void check(kt_status status) {
  if (status != KT_OK) throw Failure{status, kt_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<kt_config, Deleter<kt_config, kt_config_free>>;
using ProblemPtr = std::unique_ptr<kt_problem, Deleter<kt_problem, kt_problem_free>>;
using SolutionPtr = std::unique_ptr<kt_solution, Deleter<kt_solution, kt_solution_free>>;
using ReportPtr = std::unique_ptr<kt_verify_report, Deleter<kt_verify_report, kt_verify_free>>;

struct Loaded {
  ConfigPtr config;
  ProblemPtr problem;
  kt_tolerances tol{};
  bool experimental = false;
};

Loaded load(const Options& opt) {
  Loaded l;
  kt_config* cfg = nullptr;
  check(kt_config_load(opt.config.c_str(), opt.experimental ? 1 : 0, &cfg));
  l.config.reset(cfg);
  kt_problem* problem = nullptr;
  check(kt_config_problem(cfg, &problem));
  l.problem.reset(problem);
  check(kt_config_tolerances(cfg, &l.tol));
  l.experimental = opt.experimental || kt_config_experimental(cfg);
  kt_diagnostics diag{};
  check(kt_problem_validate(problem, &diag));
  return l;
}

std::string output_path(const Options& opt, const Loaded& l) {
  if (!opt.out.empty()) return opt.out;
  return kt_config_output(l.config.get());
}

double single_k(const Options& opt) {
  const double k = opt.k.value_or(8.0);
  return k;
}

void print_json(const nlohmann::json& j) { std::printf("%s\n", j.dump(2).c_str()); }

int run_solve(const Options& opt) {
  Loaded l = load(opt);
  const double k = single_k(opt);
  kt_solution* raw = nullptr;
  check(kt_solve(l.problem.get(), k, &l.tol, l.experimental ? 1 : 0, &raw));
  SolutionPtr sol(raw);

  const std::string path = output_path(opt, l);
  if (!path.empty()) check(kt_solution_write_samples(sol.get(), path.c_str()));

  nlohmann::json j;
  j["k"] = k;
  j["pieces"] = kt_solution_piece_count(sol.get());
  double residual = 0.0;
  check(kt_solution_boundary_residual(sol.get(), &residual));
  j["boundary_residual"] = residual;
  if (!l.experimental) {
    double c = 0.0, d = 0.0;
    check(kt_solution_constants(sol.get(), &c, &d));
    j["C_k"] = c;
    j["D_k"] = d;
    kt_energy_report r{};
    check(kt_solution_energy(sol.get(), &r));
    j["I_primal"] = r.I_primal;
    j["I_dual"] = r.I_dual;
    j["Xi"] = r.Xi;
    j["K"] = r.K_value;
    j["duality_gap"] = r.duality_gap;
    j["sup_slope"] = r.sup_slope;
    j["el_residual"] = r.el_residual;
    j["el_exact_residual"] = r.el_exact_residual;
    j["second_var_min_primal"] = r.second_var_min_primal;
    j["second_var_max_dual"] = r.second_var_max_dual;
  }
  if (!path.empty()) j["samples"] = path;
  print_json(j);
  return kExitOk;
}

int run_sweep(const Options& opt) {
  Loaded l = load(opt);
  std::vector<double> ks;
  if (opt.k) {
    ks.push_back(*opt.k);
  } else {
    for (size_t i = 0; i < kt_config_k_count(l.config.get()); ++i) ks.push_back(kt_config_k_value(l.config.get(), i));
  }
  std::vector<kt_sweep_row> rows(ks.size());
  check(kt_sweep(l.problem.get(), ks.data(), ks.size(), &l.tol, rows.data()));
  std::string path = output_path(opt, l);
  if (path.empty() || path == "-") path = "/dev/stdout";
  check(kt_write_sweep_csv(rows.data(), rows.size(), path.c_str()));
  return kExitOk;
}

int run_verify(const Options& opt) {
  Loaded l = load(opt);
  const double k = single_k(opt);
  kt_verify_report* raw = nullptr;
  check(kt_verify(l.problem.get(), k, &l.tol, opt.fault.empty() ? nullptr : opt.fault.c_str(), &raw));
  ReportPtr report(raw);
  for (size_t i = 0; i < kt_verify_count(report.get()); ++i) {
    const char* name = nullptr;
    double value = 0.0, threshold = 0.0;
    int passed = 0;
    check(kt_verify_check(report.get(), i, &name, &value, &threshold, &passed));
    std::printf("%s %-28s value=%.6e threshold=%.6e\n", passed ? "PASS" : "FAIL", name, value, threshold);
  }
  const bool ok = kt_verify_all_passed(report.get()) != 0;
  std::printf("verify k=%g: %s\n", k, ok ? "all invariants hold" : "invariant failure");
  if (!ok) {
    std::fprintf(stderr, "%s\n",
                 nlohmann::json{{"error", "invariant"}, {"exit", kExitInvariant}, {"message", "verification failed"}}
                     .dump()
                     .c_str());
    return kExitInvariant;
  }
  return kExitOk;
}

int run_oracle(const Options& opt) {
  Loaded l = load(opt);
  kt_oracle_values v{};
  check(kt_oracle(l.problem.get(), &v));
  print_json({{"K_tent", v.K_tent}, {"C_limit", v.C_limit}, {"D_limit", v.D_limit}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate Kantorovich potentials for 1-D transport problems"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool takes_k) {
    cmd->add_option("--config", opt.config, "problem configuration (JSON)")->required()->check(CLI::ExistingFile);
    if (takes_k) cmd->add_option("--k", opt.k, "regularization index k >= 1");
    cmd->add_option("--out", opt.out, "output path (overrides the config)");
    cmd->add_flag("--experimental-overlap", opt.experimental, "allow touching or overlapping supports");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve for one k; write potential samples and print energies");
  CLI::App* sweep = app.add_subcommand("sweep", "solve over the configured k values and write a CSV table");
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite for one k");
  CLI::App* oracle = app.add_subcommand("oracle", "print tent values and limit constants");
  add_common(solve, true);
  add_common(sweep, true);
  add_common(verify, true);
  add_common(oracle, false);
  verify->add_option("--inject-fault", opt.fault, "corrupt one named check (test hook)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "%s\n", nlohmann::json{{"error", "usage"}, {"exit", kExitConfig}, {"message", e.what()}}.dump().c_str());
    return kExitConfig;
  }

  try {
    if (*solve) return run_solve(opt);
    if (*sweep) return run_sweep(opt);
    if (*verify) return run_verify(opt);
    return run_oracle(opt);
  } catch (const Failure& f) {
    const int code = exit_code_for(f.status);
    std::fprintf(stderr, "%s\n",
                 nlohmann::json{{"error", kt_status_name(f.status)}, {"exit", code}, {"message", f.message}}.dump().c_str());
    return code;
  }
}
