#pragma once

#include <map>

#include "ptcalc/stability.hpp"

namespace ptcalc {

// Wall-crossing coefficients.  S and U are exact rationals attached to an
// ordered sequence of classes and a pair of weak stability conditions; the
// Lie-rewriting coefficients Utilde come from the U-values of all orderings
// of a multiset, divided by the word length, with a primitivity check that
// certifies the rewriting is legitimate.

using ClassSeq = std::vector<KClass>;
using Word = std::vector<int>; // indices into a shared distinct-class list

// formal Q-combination of tensor words over distinct classes
struct TensorWordSum {
  std::vector<KClass> classes;
  std::map<Word, Rat> terms; // zero coefficients dropped

  bool operator==(const TensorWordSum& o) const {
    return classes == o.classes && terms == o.terms;
  }
};

// formal Q-combination of left-nested bracket words over distinct classes
struct LieWordSum {
  std::vector<KClass> classes;
  std::map<Word, Rat> terms;
};

Rat coeff_S(const ClassSeq& seq, const StabilityCond& tau, const StabilityCond& tautilde);

Rat coeff_U(const ClassSeq& seq, const StabilityCond& tau, const StabilityCond& tautilde);

// expand left-nested bracket words into tensor words:
// [[x,y],z] -> xyz - yxz - zxy + zyx
TensorWordSum lie_expand(const LieWordSum& l);

// Utilde over all distinct orderings of `multiset` (input order irrelevant).
// Internally builds P = sum_w U(w) w, checks the degree-n primitivity
// identity rho(P) = n P (rho = left-bracketing), and returns w -> U(w)/n.
// A primitivity failure throws CertifyError ("not Lie-rewritable").
LieWordSum coeff_Utilde(const std::vector<KClass>& multiset,
                        const StabilityCond& tau, const StabilityCond& tautilde);

// convenience: the Utilde coefficient of one specific ordering
Rat coeff_Utilde_word(const ClassSeq& seq, const StabilityCond& tau,
                      const StabilityCond& tautilde);

std::string word_str(const TensorWordSum& t);

} // namespace ptcalc
