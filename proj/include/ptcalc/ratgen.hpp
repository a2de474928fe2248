#pragma once

#include <map>
#include <vector>

#include "ptcalc/quasipoly.hpp"

namespace ptcalc {

// Rational generating functions sum_n f(n) q^n, stored without expanding:
// a finite prefix of explicit coefficients plus geometric tails of the form
//
//     q^j * Q(q^d) / (1 - q^d)^e,   Q a polynomial with module coefficients.
//
// A tail contributes Q_m * binom(e-1+t, t) to the coefficient of
// q^(j + d*(m+t)) for t >= 0 and nothing below q^j, so quasi-polynomial
// tails of sequences convert exactly.

struct GFTail {
  long long j = 0;              // exponent offset
  long long d = 1;              // geometric step
  int e = 1;                    // pole order of (1 - q^d)
  std::map<long long, MElem> Q; // y-exponent -> coefficient, y = q^d
};

struct RationalGF {
  int trunc_n = 0;
  std::map<long long, MElem> prefix; // explicit additive corrections
  std::vector<GFTail> tails;
};

MElem gf_coeff(const RationalGF& g, long long n);
RationalGF gf_add(const RationalGF& a, const RationalGF& b);

// Convert the tail regime of a quasi-polynomial sequence: the result expands
// to f(n) for n >= n0 and to 0 for n < n0.  One tail per residue class,
// anchored at the first n >= n0 in the class, with e = degree + 1.
RationalGF qp_tail_to_gf(const QuasiPoly& f, long long n0);

// poles on the unit circle (and at the origin, for Laurent parts):
//   m >= 1, gcd(k, m) = 1 : pole of the given order at exp(2 pi i k / m)
//   m == 0, k == 0        : pole at q = 0
struct PoleInfo {
  long long m = 1;
  long long k = 0;
  int order = 0;

  bool operator==(const PoleInfo& o) const {
    return m == o.m && k == o.k && order == o.order;
  }
  bool operator<(const PoleInfo& o) const {
    if (m != o.m) return m < o.m;
    if (k != o.k) return k < o.k;
    return order < o.order;
  }
};

// Exact pole locations: clear the common denominator prod_d (1-q^d)^(E_d),
// split the numerator into scalar components, and count cyclotomic
// multiplicities by repeated exact division.
std::vector<PoleInfo> pole_locations(const RationalGF& g);

// cyclotomic polynomial, exponent -> coefficient (exact, memoised)
std::map<long long, Rat> cyclotomic(long long m);

std::string gf_str(const RationalGF& g);

} // namespace ptcalc
