#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptcalc/classlat.hpp"

namespace ptcalc {

// Slope values.  The public face of a slope is an extended rational
// (finite or +infinity, the latter for zero-curve-class sheaves).  Wall
// comparisons additionally need two bookkeeping refinements, so internally a
// slope value is one of
//   FIN(q, eps)  -- q + eps*epsilon for an infinitesimal epsilon, eps in {-1,0,+1}
//   POSBIG       -- larger than every finite value (the "c >> 0" side of a
//                   pair wall) but below INF
//   INF          -- slope of (0, n>0) sheaves
// ordered FIN < POSBIG < INF with FIN lexicographic in (q, eps).  Exact
// rationals never collide with the eps = +-1 values, which is precisely what
// makes the just-below-the-wall comparisons sound.

struct SlopeVal {
  enum Kind { FIN = 0, POSBIG = 1, INF = 2 };
  Kind kind = FIN;
  Rat q = 0;
  int eps = 0;

  bool operator==(const SlopeVal& o) const {
    if (kind != o.kind) return false;
    if (kind != FIN) return true;
    return q == o.q && eps == o.eps;
  }
  bool operator<(const SlopeVal& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (kind != FIN) return false;
    if (q != o.q) return q < o.q;
    return eps < o.eps;
  }
  bool operator<=(const SlopeVal& o) const { return *this < o || *this == o; }
  bool operator>(const SlopeVal& o) const { return o < *this; }
  bool operator>=(const SlopeVal& o) const { return o <= *this; }
};

SlopeVal slope_fin(const Rat& q, int eps = 0);
SlopeVal slope_posbig();
SlopeVal slope_inf();
std::string slope_str(const SlopeVal& s);

// public extended-rational slope (no infinitesimals)
struct ExtendedRational {
  bool is_inf = false;
  Rat q = 0;
  bool operator==(const ExtendedRational& o) const {
    return is_inf == o.is_inf && (is_inf || q == o.q);
  }
};

// cone membership for sheaf classes: beta effective with any n, or beta = 0
// with n > 0
bool sheaf_in_cone(const CurveClass& beta, long long n);

// slope of a sheaf class: n / (omega.beta) for beta != 0, infinity for beta=0.
// Outside the cone -> input error.
ExtendedRational slope_mu(const CurveClass& beta, long long n,
                          const std::vector<Rat>& omega);

// A weak stability condition as used by the wall-crossing coefficients: a
// total-slope assignment on classes.  Two shapes cover everything we need:
//   sheaf(omega)        : defined on d = 0 classes only
//   pair(omega, c)      : d = 0 -> sheaf slope, d > 0 -> the constant c
// (c may be an infinitesimally shifted or POSBIG sentinel).
struct StabilityCond {
  enum Type { Sheaf = 0, Pair = 1 };
  Type type = Sheaf;
  std::vector<Rat> omega;
  SlopeVal c; // pair constant, Pair only

  SlopeVal eval(const KClass& a) const;
  std::string str() const;
};

StabilityCond stab_sheaf(const std::vector<Rat>& omega);
StabilityCond stab_pair(const std::vector<Rat>& omega, const SlopeVal& c);

// Seesaw check over a finite sample: for classes a, b in the sample with a,
// b and a+b all in the domain, the three slopes must be weakly monotone in
// the order (a, a+b, b).  Returns the first violating pair, if any.
struct SeesawWitness {
  KClass a, b;
  std::string detail;
};
std::optional<SeesawWitness> check_weak_stability(const StabilityCond& tau,
                                                  const std::vector<KClass>& sample);

} // namespace ptcalc
