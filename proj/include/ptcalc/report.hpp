#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "ptcalc/scenario.hpp"
#include "ptcalc/wallcross.hpp"

namespace ptcalc {

// 64-bit FNV-1a of the raw scenario bytes; stamped into every report so a
// result can be tied to the exact input it came from
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

struct RunOptions {
  std::optional<long long> n_max;  // overrides per-query and [options] nmax
  bool memo = true;                // memoize the pair-invariant recursion
  bool oracle = false;             // wallcross: re-run with doubled window
  std::optional<ScenarioQuery::Kind> only; // run just this query kind
};

// Run the scenario's queries and write a deterministic plain-text report:
// identical input bytes and options give identical output bytes.  Per-query
// wall times go to `timing` when non-null (intended for stderr).
void run_report(const ScenarioData& s, const RunOptions& opt, std::ostream& out,
                std::ostream* timing);

} // namespace ptcalc
