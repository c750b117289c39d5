// End-to-end battery: runs all twelve numbered criteria and prints exactly
// one PASS/FAIL line per criterion.  Every tolerance and trial count is
// pinned inside the criterion bodies; this binary only reports.
#include <cstdio>

#include "doctest.h"
#include "ptw/acceptance.hpp"

using namespace ptw;

TEST_CASE("all twelve acceptance criteria pass") {
  AcceptanceOptions opts;
  std::vector<CriterionResult> results = run_acceptance(opts);
  REQUIRE(results.size() == 12);
  for (const CriterionResult& r : results) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
  }
  for (const CriterionResult& r : results) {
    INFO(format_result(r));
    CHECK(r.pass);
  }
  CHECK(all_passed(results));
}

TEST_CASE("criterion subset selection runs only the requested ids") {
  AcceptanceOptions opts;
  opts.only = {2, 12};
  std::vector<CriterionResult> results = run_acceptance(opts);
  REQUIRE(results.size() == 2);
  CHECK(results[0].id == 2);
  CHECK(results[1].id == 12);
  CHECK(all_passed(results));
}
