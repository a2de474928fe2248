#pragma once

#include <functional>
#include <map>
#include <vector>

#include "ptcalc/wallcross.hpp"

// Independent reference implementations used by the unit and acceptance
// tests.  These deliberately avoid sharing enumeration strategy or helper
// code with the library: recursive composition walks instead of bitmasks,
// direct lattice scans instead of chamber algebra, flat symmetric windows
// instead of derived per-piece bounds.  Where a check targets one layer
// (say, window derivation) it may consume already-validated lower layers.

namespace ptoracle {

using namespace ptcalc;

// junction-rule S, written from the definition
Rat oracle_S(const ClassSeq& seq, const StabilityCond& tau, const StabilityCond& tti);

// two-level composition sum for U, recursive (groups first, then blocks)
Rat oracle_U(const ClassSeq& seq, const StabilityCond& tau, const StabilityCond& tti);

// P = sum over distinct orderings w of U(w) * w, classes sorted distinct
TensorWordSum oracle_word_sum(const std::vector<KClass>& multiset,
                              const StabilityCond& tau, const StabilityCond& tti);

// left-bracketing map on tensor words: a1 a2 ... ak -> [[a1,a2],...,ak]
TensorWordSum oracle_rho(const TensorWordSum& p);

TensorWordSum tws_scale(const Rat& r, const TensorWordSum& p);

// sum of w over integer points x of q with sum x_i = n, by direct scan of
// the box [-bound, bound]^k with fresh constraint evaluation
MElem oracle_slice_sum(const Chamber& q, const MPoly& w, long long n, long long bound);

// H(n) = sum over all x with sum x_i = n of f(x), same direct scan
MElem oracle_fiber_sum(const PiecewiseQP& f, long long n, long long bound);

// The pair-recursion right-hand side rebuilt with flat symmetric windows on
// every piece: pair piece n in [-flat, n+flat], sheaf pieces likewise, zero
// classes m in [1, zflat].  No derived lower bounds, no budget pruning; the
// rewriting coefficients decide what contributes.  Pair values come from the
// engine's pt_value (the recursion on strictly smaller classes), sheaf
// values from the scenario table.
MElem oracle_flat_pt_rhs(PtEngine& e, const CurveClass& beta, long long n,
                         long long flat, long long zflat);

} // namespace ptoracle
