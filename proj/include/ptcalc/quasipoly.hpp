#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ptcalc/poly.hpp"

namespace ptcalc {

// Quasi-polynomials with module-valued coefficients, chamber decompositions
// of Z^k by exact rational affine constraints, weighted lattice-point sums
// over chamber slices, and the fit-and-certify machinery that turns sampled
// sequences into certified piecewise quasi-polynomials.

inline long long posmod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

// ---- univariate quasi-polynomial -------------------------------------------

struct QuasiPoly {
  long long d = 1;            // period
  int trunc_n = 0;
  std::vector<MPoly> polys;   // size d; polys[r] applies when n == r (mod d)

  bool operator==(const QuasiPoly& o) const {
    return d == o.d && trunc_n == o.trunc_n && polys == o.polys;
  }
};

QuasiPoly qp_constant(const MElem& v);
QuasiPoly qp_zero(int trunc_n);
MElem qp_eval(const QuasiPoly& f, long long n);
bool qp_is_zero(const QuasiPoly& f);
int qp_max_degree(const QuasiPoly& f); // -1 if zero
// minimal-period canonical form
QuasiPoly qp_canon(const QuasiPoly& f);
QuasiPoly qp_add(const QuasiPoly& a, const QuasiPoly& b);
std::string qp_str(const QuasiPoly& f);

// ---- multivariate quasi-polynomial (one shared period) ----------------------

struct KQuasiPoly {
  int k = 1;
  long long d = 1;
  int trunc_n = 0;
  // residue vector (entries in 0..d-1) -> k-variate polynomial; missing = 0
  std::map<std::vector<long long>, MPoly> polys;
};

MElem kqp_eval(const KQuasiPoly& f, const std::vector<long long>& x);
KQuasiPoly kqp_zero(int k, int trunc_n);
KQuasiPoly kqp_add(const KQuasiPoly& a, const KQuasiPoly& b);
bool kqp_is_zero(const KQuasiPoly& f);

// ---- chambers ---------------------------------------------------------------

enum class Rel { LT, LE, EQ, GE, GT };

struct Constraint {
  std::vector<Rat> C;
  Rel rel = Rel::LE;
  Rat D = 0;
};

struct Chamber {
  int k = 1;
  std::vector<Constraint> cons;
};

Constraint make_con(const std::vector<Rat>& C, Rel rel, const Rat& D);
bool chamber_contains(const Chamber& q, const std::vector<long long>& x);
std::string chamber_str(const Chamber& q);

// interval-propagation emptiness test over the integer points (sound: "true"
// means provably empty; inconclusive cases return false)
bool chamber_provably_empty(const Chamber& q);

// recession-cone analysis: true iff interval propagation pins the homogeneous
// system { relaxed constraints, sum x_i = 0 } to the origin -- the
// slice-boundedness certificate used by the lattice sums
bool slices_provably_bounded(const Chamber& q);

// lcm of the denominators attached to single-variable bounds after
// eliminating the slice system (the period bound for fitted quasi-polynomials)
long long slice_period_bound(const Chamber& q);

// ---- piecewise quasi-polynomial ---------------------------------------------

struct PqpPiece {
  Chamber chamber;
  KQuasiPoly qp;
};

struct PiecewiseQP {
  int k = 1;
  int trunc_n = 0;
  std::vector<PqpPiece> pieces;
};

MElem pqp_eval(const PiecewiseQP& f, const std::vector<long long>& x);
// common-refinement sum; empty intersections pruned
PiecewiseQP pqp_add(const PiecewiseQP& a, const PiecewiseQP& b);

// ---- weighted lattice sums ----------------------------------------------------

// sum of w(x) over integer points of q intersected with {sum x_i = n}
MElem ehrhart_sum(const Chamber& q, const MPoly& w, long long n);

// Sample ehrhart_sum on [lo, hi], fit low tail + singleton middle + high tail
// with automatic period search over divisors of the slice period bound, and
// cross-validate on held-out points.  Certification failure throws.
PiecewiseQP certify_pqp(const Chamber& q, const MPoly& w, long long lo, long long hi);

// H(n) = sum over x with sum x_i = n of F(x); F must have provably bounded
// slices on every chamber carrying a nonzero quasi-polynomial
PiecewiseQP convolve_fiberwise(const PiecewiseQP& f);

// ---- difference equations and shift operators ---------------------------------

// Verify sum_{i=0..m} (-1)^i binom(m,i) f(n + i*d) = 0 on every complete
// sampled window, then interpolate per residue class mod d (degree <= m-1).
// Samples must cover at least m consecutive steps per residue class present.
QuasiPoly solve_difference(int m, long long d, const std::map<long long, MElem>& samples);

// matrices over the coefficient ring
struct RMat {
  int rows = 0, cols = 0, trunc_n = 0;
  std::vector<std::vector<RElem>> a;
};

RMat rmat_identity(int n, int trunc_n);
RMat rmat_mul(const RMat& x, const RMat& y);
RMat rmat_sub(const RMat& x, const RMat& y);
bool rmat_is_zero(const RMat& x);

// least m >= 1 with (id - J)^m = 0; exceeding cap -> not-unipotent diagnostic
int nilpotency_order(const RMat& j, int cap);

// f(n + d) = J f(n) in the coordinates of `basis`, started from the d values
// f(n0), ..., f(n0 + d - 1).  Returns the per-residue polynomials as a
// QuasiPoly (degree <= nilpotency order - 1) and checks it against direct
// propagation on [check_lo, check_hi].
QuasiPoly shift_to_qp(const RMat& j, const std::vector<std::string>& basis,
                      long long d, long long n0, const std::vector<MElem>& f0,
                      long long check_lo, long long check_hi);

} // namespace ptcalc
