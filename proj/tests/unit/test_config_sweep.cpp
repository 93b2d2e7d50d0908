#include <cstring>
#include <sstream>
#include <string>

#include "doctest.h"
#include "kantorovich/config.hpp"
#include "kantorovich/errors.hpp"
#include "kantorovich/sweep.hpp"
#include "support.hpp"

using namespace kantorovich;

namespace {

constexpr const char* kMinimal = R"({
  "omega":      {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
  "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}
})";

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

bool contains(const std::string& haystack, const char* needle) { return haystack.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("a minimal document takes the defaults") {
    const RunConfig cfg = parse_config(kMinimal);
    CHECK(cfg.omega.kind == DensityKind::Uniform);
    CHECK(cfg.omega_star.interval.lo == 2.0);
    CHECK(cfg.k_values.size() == 11);
    CHECK(cfg.k_values.front() == 1.0);
    CHECK(cfg.k_values.back() == 1024.0);
    CHECK(cfg.mode == RunMode::Sweep);
    CHECK(cfg.output.empty());
    CHECK_FALSE(cfg.experimental_overlap);
    CHECK(cfg.tolerances.quad_abs_tol == Tolerances{}.quad_abs_tol);
    const TransportProblem p = cfg.problem();
    CHECK(p.layout == Layout::Disjoint);
  }

  TEST_CASE("every field is read") {
    const RunConfig cfg = parse_config(R"({
      "omega": {"lo": 0, "hi": 1, "density": {"kind": "polynomial", "coefficients": [0, 0, 3]}},
      "omega_star": {"lo": 2, "hi": 4, "density": {"kind": "tabulated", "nodes": [2, 3, 4],
                                                   "values": [1, 2, 1], "normalize": true}},
      "k_values": [1, 8, 64],
      "tolerances": {"quad_abs_tol": 1e-9, "root_abs_tol": 1e-11, "max_quad_depth": 30, "max_root_iters": 50},
      "output": "out.csv",
      "mode": "verify"
    })");
    CHECK(cfg.omega.coefficients.size() == 3);
    CHECK(cfg.normalize_omega_star);
    CHECK_FALSE(cfg.normalize_omega);
    CHECK(cfg.k_values == std::vector<double>{1, 8, 64});
    CHECK(cfg.tolerances.quad_abs_tol == 1e-9);
    CHECK(cfg.tolerances.max_root_iters == 50);
    CHECK(cfg.output == "out.csv");
    CHECK(cfg.mode == RunMode::Verify);
    CHECK(std::abs(cfg.problem().sink.mass() - 1.0) <= 1e-12);
  }

  TEST_CASE("k values must ascend and stay in range") {
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}, "k_values": [1, 4, 2]})"),
                   "k_values must be ascending"));
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}, "k_values": [0.5]})"),
                   "k_values"));
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}, "k_values": [5000]})"),
                   "k_values"));
  }

  TEST_CASE("overlapping supports need the experimental switch") {
    const std::string text = R"({"omega": {"lo": 0, "hi": 2, "density": {"kind": "uniform", "height": 0.5}},
      "omega_star": {"lo": 1, "hi": 3, "density": {"kind": "uniform", "height": 0.5}}})";
    CHECK(contains(config_error(text), "experimental_overlap"));
    CHECK(parse_config(text, true).experimental_overlap);
    const std::string touching = R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 1, "hi": 2, "density": {"kind": "uniform"}}, "experimental_overlap": true})";
    CHECK(parse_config(touching).problem().layout == Layout::Touching);
  }

  TEST_CASE("unknown keys and malformed values are rejected") {
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}, "colour": 1})"),
                   "colour"));
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform", "hieght": 2}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}})"),
                   "hieght"));
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "gaussian"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}})"),
                   "gaussian"));
    CHECK(contains(config_error(R"({"omega": {"lo": 1, "hi": 0, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}})"),
                   "omega.hi"));
    CHECK(contains(config_error(R"({"omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}})"),
                   "missing config key 'omega'"));
    CHECK(contains(config_error("[1, 2]"), "JSON object"));
    CHECK(contains(config_error("{not json"), "not valid JSON"));
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}, "tolerances": {"quad_abs_tol": -1}})"),
                   "tolerances"));
    CHECK(contains(config_error(R"({"omega": {"lo": 0, "hi": 1, "density": {"kind": "uniform"}},
      "omega_star": {"lo": 2, "hi": 3, "density": {"kind": "uniform"}}, "mode": "fly"})"),
                   "mode"));
  }

  TEST_CASE("a missing file is an io error") {
    try {
      load_config("/nonexistent/config.json");
      FAIL("expected an io error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }
}

TEST_SUITE("sweep") {
  TEST_CASE("CSV header and empty output") {
    std::ostringstream out;
    write_csv({}, out);
    CHECK(out.str() == std::string(kSweepHeader) + "\n");
    std::istringstream in(out.str());
    CHECK(read_csv(in).empty());
  }

  TEST_CASE("a single row survives a write-read round trip bit for bit") {
    const TransportProblem p = kt_test::cubic_problem();
    const double k[] = {8.0};
    const auto rows = run_sweep(p, k, Tolerances{}, 1);
    REQUIRE(rows.size() == 1);
    std::ostringstream out;
    write_csv(rows, out);
    std::istringstream in(out.str());
    const auto back = read_csv(in);
    REQUIRE(back.size() == 1);
    CHECK(std::memcmp(&rows[0], &back[0], sizeof(SweepRow)) == 0);
  }

  TEST_CASE("rows come back in ascending k with consistent columns") {
    const TransportProblem p = kt_test::uniform_problem();
    const double ks[] = {1.0, 4.0, 16.0, 64.0};
    const auto rows = run_sweep(p, ks, Tolerances{}, 3);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const SweepRow& r = rows[i];
      CHECK(r.k == ks[i]);
      CHECK(r.K_tent == 0.5);
      CHECK(r.deficit == doctest::Approx(r.K_tent - r.K_k).epsilon(1e-12));
      CHECK(r.gap <= 1e-8);
      CHECK(r.sup_slope <= 1.0);
      CHECK(std::abs(r.C_k - 0.5) <= 1e-8);
      CHECK(r.wall_ms >= 0.0);
      if (i > 0) CHECK(r.deficit < rows[i - 1].deficit);
    }
  }

  TEST_CASE("sweeps are deterministic apart from wall time") {
    const TransportProblem p = kt_test::cubic_problem();
    const double ks[] = {2.0, 32.0};
    auto a = run_sweep(p, ks, Tolerances{}, 1);
    auto b = run_sweep(p, ks, Tolerances{}, 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i].wall_ms = b[i].wall_ms = 0.0;
      CHECK(std::memcmp(&a[i], &b[i], sizeof(SweepRow)) == 0);
    }
  }

  TEST_CASE("malformed CSV is rejected") {
    std::istringstream bad_header("k,C\n1,2\n");
    CHECK_THROWS_AS(read_csv(bad_header), Error);
    std::istringstream short_row(std::string(kSweepHeader) + "\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(short_row), Error);
  }

  TEST_CASE("potential samples carry the header and one line per grid node") {
    const PotentialSolution sol = solve_potential(RegIndex(4.0), kt_test::uniform_problem(), Tolerances{});
    std::ostringstream out;
    write_potential_samples(sol, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kSamplesHeader);
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 2 * kGridPoints);
  }
}
