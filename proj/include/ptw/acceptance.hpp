// End-to-end verification battery for the workbench.
//
// Twelve numbered criteria exercise the full stack — exact PT-rank oracles
// against explicit certificates, SoS round-trips, the candidate family
// scans, randomized lemma trials, the rho/PT identity, the GF(2) census,
// the ABP-to-certificate pipeline, the formula harness, and serialization.
// Every check is exact (complex comparisons use the context epsilon); the
// tolerances and trial counts live in the criterion bodies, not in flags,
// so a passing run always attests the same statements.
//
// run_acceptance never throws: a criterion that raises is reported as a
// failure with the exception text in its detail line.  The same battery
// backs both the test binary (one printed line per criterion) and the
// command-line verify subcommand (exit status = all passed).
#pragma once

#include <string>
#include <vector>

#include "ptw/ptcore.hpp"

namespace ptw {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, one line
  double seconds = 0;
};

struct AcceptanceOptions {
  std::vector<int> only;  // criterion ids to run; empty = all twelve
  u64 seed = 2026;        // base seed for the randomized trial criteria
  u64 budget = kDefaultAssignmentBudget;
  unsigned threads = 1;
};

// Runs the selected criteria in id order and returns one result per
// criterion.  Unknown ids in `only` are ignored.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

// True iff every result passed.
bool all_passed(const std::vector<CriterionResult>& results);

// "criterion  3 [PASS] sos-compose: ..." — the canonical one-line form.
std::string format_result(const CriterionResult& r);

}  // namespace ptw
