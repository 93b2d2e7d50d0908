#include "kantorovich/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "kantorovich/energy.hpp"
#include "kantorovich/errors.hpp"
#include "kantorovich/oracle.hpp"

namespace kantorovich {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SweepRow sweep_row(const TransportProblem& problem, RegIndex k, const Tolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  const PotentialSolution sol = solve_potential(k, problem, tol);
  const EnergyReport report = energy_report(sol, 0);

  SweepRow row;
  row.k = k.value();
  row.C_k = sol.C();
  row.D_k = sol.D();
  row.I_primal = report.I_primal;
  row.I_dual = report.I_dual;
  row.gap = report.duality_gap;
  row.K_k = report.K_value;
  row.K_tent = tent_value(problem);
  row.deficit = row.K_tent - row.K_k;
  row.sup_slope = report.sup_slope;
  for (const SidePotential& p : sol.pieces()) {
    for (double u : p.u) row.sup_u = std::max(row.sup_u, std::abs(u));
    row.sup_u = std::max(row.sup_u, std::abs(p.u_apex));
  }
  row.el_residual = report.el_residual;
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<SweepRow> run_sweep(const TransportProblem& problem, std::span<const double> k_values,
                                const Tolerances& tol, unsigned threads) {
  std::vector<double> ks(k_values.begin(), k_values.end());
  std::sort(ks.begin(), ks.end());
  std::vector<SweepRow> rows(ks.size());
  if (ks.empty()) return rows;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(ks.size()));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(ks.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < ks.size(); i = next++) {
      try {
        rows[i] = sweep_row(problem, RegIndex(ks[i]), tol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // Report the failure at the smallest k so the outcome does not depend on scheduling.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

void write_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    const double values[] = {r.k,   r.C_k,    r.D_k,     r.I_primal,  r.I_dual, r.gap,         r.K_k,
                             r.K_tent, r.deficit, r.sup_slope, r.sup_u,  r.el_residual, r.wall_ms};
    for (std::size_t i = 0; i < std::size(values); ++i) out << (i ? "," : "") << fmt17(values[i]);
    out << '\n';
  }
}

void emit_csv(std::span<const SweepRow> rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader)
    throw Error(ErrorCode::Io, "sweep CSV header does not match");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      v.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str()) throw Error(ErrorCode::Io, "non-numeric sweep CSV cell '" + cell + "'");
    }
    if (v.size() != 13) throw Error(ErrorCode::Io, "sweep CSV row has " + std::to_string(v.size()) + " columns");
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12]});
  }
  return rows;
}

void write_potential_samples(const PotentialSolution& sol, std::ostream& out) {
  const RegIndex k = sol.k();
  out << kSamplesHeader << '\n';
  for (const SidePotential& p : sol.pieces()) {
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      // lambda through E_inv; underflows to 0 only for k beyond ~1490 at theta = 0.
      const double lambda = lambda_from_theta(k, p.theta[i], sol.tolerances());
      out << fmt17(p.x[i]) << ',' << to_string(p.side()) << ',' << fmt17(p.theta[i]) << ',' << fmt17(lambda)
          << ',' << fmt17(p.eta[i]) << ',' << fmt17(p.u[i]) << '\n';
    }
  }
}

void write_potential_samples(const PotentialSolution& sol, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_potential_samples(sol, out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace kantorovich
