#include <algorithm>
#include <string>

#include "doctest.h"
#include "kantorovich/errors.hpp"
#include "kantorovich/verify.hpp"
#include "support.hpp"

using namespace kantorovich;

namespace {

const CheckResult& check_named(const VerifyReport& r, const std::string& name) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.name == name; });
  REQUIRE(it != r.checks.end());
  return *it;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("every check passes on the fixtures") {
    for (const TransportProblem& p : {kt_test::uniform_problem(), kt_test::cubic_problem()}) {
      for (double k : {1.0, 64.0, 1024.0}) {
        const VerifyReport r = run_verification(p, RegIndex(k), Tolerances{});
        CHECK(r.k == k);
        CHECK(r.checks.size() == verification_check_names().size());
        for (const CheckResult& c : r.checks) {
          INFO(c.name, " value=", c.value, " threshold=", c.threshold, " ", c.detail);
          CHECK(c.passed);
        }
        CHECK(r.all_passed());
      }
    }
  }

  TEST_CASE("each injected fault trips exactly its own check") {
    const TransportProblem p = kt_test::uniform_problem();
    for (const std::string& name : verification_check_names()) {
      const VerifyReport r = run_verification(p, RegIndex(8.0), Tolerances{}, name);
      INFO(name);
      CHECK_FALSE(r.all_passed());
      CHECK_FALSE(check_named(r, name).passed);
      for (const CheckResult& c : r.checks)
        if (c.name != name) CHECK(c.passed);
    }
  }

  TEST_CASE("unknown fault names are rejected") {
    CHECK_THROWS_AS(run_verification(kt_test::uniform_problem(), RegIndex(2.0), Tolerances{}, "no_such_check"),
                    Error);
  }

  TEST_CASE("the minimizer margin is non-negative") {
    const PotentialSolution sol = solve_potential(RegIndex(32.0), kt_test::cubic_problem(), Tolerances{});
    CHECK(minimizer_margin(sol, 12, 99) >= 0.0);
  }
}
