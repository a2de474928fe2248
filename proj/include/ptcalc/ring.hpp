#pragma once

#include <string>
#include <vector>

#include "ptcalc/rational.hpp"

namespace ptcalc {

// Coefficient ring: Q[s]/(s^{N+1}) with one nilpotent generator s.
// N = 0 is plain Q (the rational mode); N > 0 is the truncated mode used for
// the equivariant-style computations.  An RElem always stores exactly N+1
// coordinates, c[i] = coefficient of s^i, so the ring it belongs to is
// recoverable from its size.

struct RElem {
  std::vector<Rat> c;

  RElem() = default;
  explicit RElem(int trunc_n) : c(static_cast<size_t>(trunc_n) + 1, Rat(0)) {}
  RElem(int trunc_n, const Rat& scalar) : RElem(trunc_n) { c[0] = scalar; }

  int trunc() const { return static_cast<int>(c.size()) - 1; }

  bool is_zero() const {
    for (const auto& x : c)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const RElem& o) const { return c == o.c; }
  bool operator!=(const RElem& o) const { return !(*this == o); }
};

void relem_check_same(const RElem& a, const RElem& b, const char* op);

RElem relem_zero(int trunc_n);
RElem relem_one(int trunc_n);
RElem relem_scalar(int trunc_n, const Rat& r);
// s^k as a ring element; k > N collapses to 0.
RElem relem_spow(int trunc_n, int k);

RElem operator+(const RElem& a, const RElem& b);
RElem operator-(const RElem& a, const RElem& b);
RElem operator-(const RElem& a);
// truncated convolution product
RElem operator*(const RElem& a, const RElem& b);
RElem operator*(const Rat& r, const RElem& a);

// "3/2 + 1/4*s^2"; zero element prints "0".
std::string relem_str(const RElem& a);

} // namespace ptcalc
