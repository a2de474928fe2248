#pragma once

#include "ptcalc/scenario.hpp"
#include "ptcalc/wallcoeffs.hpp"

namespace ptcalc {

// The two transforms the calculator exists for.
//
// Sheaf-side wall crossing: re-expand the input table at a second
// polarization.  Decompositions are ordered multisets of cone classes
// summing to (0, beta, n); the enumeration window on the n_i is a scenario
// parameter, and any contributing decomposition that touches the window edge
// aborts with a configuration error rather than silently truncating.
//
// Pair-side recursion: express the pair invariant at (1, beta, n) through
// decompositions with exactly one smaller pair piece and sheaf pieces, with
// provably complete per-piece windows, then walk down in the number of
// effective summands.

MElem dt_value(const ScenarioData& s, const CurveClass& beta, long long n);

// input table re-expanded at omega_alt; window caps |n_i| in decompositions
MElem dt_wallcross(const ScenarioData& s, const CurveClass& beta, long long n,
                   long long window);

struct PtEngine {
  const ScenarioData* s = nullptr;
  bool use_memo = true;
  std::map<std::pair<CurveClass, long long>, MElem> memo;

  explicit PtEngine(const ScenarioData& sc, bool memoize = true)
      : s(&sc), use_memo(memoize) {}
};

// pair invariant at (beta, n): vanishing region, explicit middle values,
// or the decomposition recursion (memoized)
MElem pt_value(PtEngine& e, const CurveClass& beta, long long n);

// the recursion right-hand side at (beta, n), always recomputed
MElem pt_from_decompositions(PtEngine& e, const CurveClass& beta, long long n);

// check the defining identity at (beta, n): the singleton rewriting
// coefficient is 1 and the full decomposition sum cancels the pair invariant.
// Returns a human-readable summary; mismatches throw CertifyError.
std::string verify_recursion_identity(PtEngine& e, const CurveClass& beta, long long n);

struct PtSeriesResult {
  CurveClass beta;
  long long vanish_bound = 0; // values are 0 for n <= this
  long long tail_start = 0;   // certified tail regime begins here
  long long step = 1;         // sampling step (ample degree)
  int order = 1;              // difference-equation order used
  QuasiPoly tail;             // certified tail quasi-polynomial
  RationalGF gf;              // prefix (middle region) + converted tail
  std::vector<PoleInfo> poles;
};

// headline pipeline: sample the recursion, certify a difference equation,
// convert the tail to a rational generating function, locate the poles
PtSeriesResult pt_series(PtEngine& e, const CurveClass& beta);

} // namespace ptcalc
