#pragma once

#include <map>
#include <string>

#include "ptcalc/ring.hpp"

namespace ptcalc {

// Free module over the coefficient ring with a basis of named symbols.
// Quasi-polynomial values, generating-function coefficients and transferred
// invariants all live here.  Zero coordinates are dropped eagerly so that
// operator== is canonical-form equality.

struct MElem {
  int trunc_n = 0;                  // ring truncation all coords share
  std::map<std::string, RElem> m;   // symbol -> coordinate (never zero)

  MElem() = default;
  explicit MElem(int n) : trunc_n(n) {}

  bool is_zero() const { return m.empty(); }
  bool operator==(const MElem& o) const { return trunc_n == o.trunc_n && m == o.m; }
  bool operator!=(const MElem& o) const { return !(*this == o); }
};

MElem melem_zero(int trunc_n);
MElem melem_basis(int trunc_n, const std::string& sym, const RElem& coeff);
MElem melem_basis(int trunc_n, const std::string& sym, const Rat& coeff);

void melem_add_to(MElem& acc, const std::string& sym, const RElem& coeff);

MElem operator+(const MElem& a, const MElem& b);
MElem operator-(const MElem& a, const MElem& b);
MElem operator-(const MElem& a);
MElem operator*(const Rat& r, const MElem& a);
MElem operator*(const RElem& r, const MElem& a);

// "(3)*A + (1/2 + 2*s)*B"; zero prints "0".  Symbol order is map order,
// so the form is canonical.
std::string melem_str(const MElem& a);

} // namespace ptcalc
