#pragma once

// The decolog command line, callable in-process.
//
// Exit codes (see README):
//   check          0 ok, 1 ill-formed, 2 parse error
//   decorate       0 ok, 1 ill-formed term, 2 parse error
//   verify         0 accepted, 1 rejected, 2 parse error
//   model-check    0 holds, 1 violated, 2 parse error, 3 model/theory mismatch
//   find-cex       0 countermodel found, 1 none within bounds, 2 parse error
//   prove          0 derivation found, 1 not found within depth, 2 parse error
//   dualize        0 ok, 1 not dualizable, 2 parse error
//   validate-rules 0 all checks passed, 1 some check failed
// Any command refusing an enumeration over the ceiling exits 4.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "decolog/semantics.hpp"
#include "decolog/validation.hpp"

namespace decolog {

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// JSON forms shared by the CLI and the tests.
nlohmann::json model_json(const Theory& theory, const FiniteModel& model);
nlohmann::json countermodel_json(const Theory& theory, const Equation& eq,
                                 const Counterexample& cex);
nlohmann::json report_json(const SoundnessReport& report);

}  // namespace decolog
