#pragma once

#include <map>
#include <vector>

#include "ptcalc/melem.hpp"

namespace ptcalc {

// Multivariate polynomials, exponent-vector keyed, zero coefficients dropped.
// Two flavours:
//   RatPoly -- coefficients in Q (weight-table entries, small helpers)
//   MPoly   -- coefficients in the symbol module (quasi-polynomial branches,
//              lattice-sum weights)
// k is the number of variables; univariate cases just use k = 1.

struct RatPoly {
  int k = 1;
  std::map<std::vector<int>, Rat> c;

  bool is_zero() const { return c.empty(); }
  bool operator==(const RatPoly& o) const { return k == o.k && c == o.c; }
};

RatPoly ratpoly_const(int k, const Rat& v);
void ratpoly_add_term(RatPoly& p, const std::vector<int>& e, const Rat& v);
Rat ratpoly_eval(const RatPoly& p, const std::vector<Rat>& x);
int ratpoly_total_degree(const RatPoly& p); // -1 for zero
// swap the two variables of a bivariate polynomial (weight-table symmetry)
RatPoly ratpoly_swap2(const RatPoly& p);
std::string ratpoly_str(const RatPoly& p);

struct MPoly {
  int k = 1;
  int trunc_n = 0;
  std::map<std::vector<int>, MElem> c;

  MPoly() = default;
  MPoly(int kk, int tn) : k(kk), trunc_n(tn) {}

  bool is_zero() const { return c.empty(); }
  bool operator==(const MPoly& o) const {
    return k == o.k && trunc_n == o.trunc_n && c == o.c;
  }
};

MPoly mpoly_zero(int k, int trunc_n);
void mpoly_add_term(MPoly& p, const std::vector<int>& e, const MElem& v);
MPoly operator+(const MPoly& a, const MPoly& b);
MPoly operator*(const Rat& r, const MPoly& a);
MElem mpoly_eval(const MPoly& p, const std::vector<Rat>& x);
int mpoly_total_degree(const MPoly& p); // -1 for zero

// substitute x_i = a_i + d * y_i for every variable (exact, binomial expansion)
MPoly mpoly_sub_affine_diag(const MPoly& p, const std::vector<Rat>& a, const Rat& d);

// univariate (k = 1) helpers -------------------------------------------------

// q(y) = p(a + b*y)
MPoly upoly_compose_affine(const MPoly& p, const Rat& a, const Rat& b);

// Newton interpolation through (x_i, v_i), x_i distinct.  Degree = #nodes - 1.
MPoly upoly_interpolate(const std::vector<Rat>& xs, const std::vector<MElem>& vs,
                        int trunc_n);

MElem upoly_eval(const MPoly& p, const Rat& x);

std::string mpoly_str(const MPoly& p);

} // namespace ptcalc
