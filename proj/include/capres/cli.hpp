#pragma once

#include "capres/io.hpp"

#include <string>
#include <vector>

namespace capres::cli {

// Independent re-verification of a result file against its instance:
// fingerprint, flow feasibility, reservation support, scenario-price
// validity, and both bounds recomputed from the witnesses.
struct CheckReport {
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};
CheckReport check_result(const Instance& inst, const ResultDocument& doc,
                         double tol = 1e-6);

// Exit codes: 0 success/converged, 1 error or infeasible, 2 iteration
// limit reached.
int run(int argc, const char* const* argv);

}  // namespace capres::cli
