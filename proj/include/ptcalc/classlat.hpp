#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptcalc/rational.hpp"

namespace ptcalc {

// Class lattice for the coordinate-cone model: curve classes live in Z^r with
// the effective cone N^r \ {0}; full classes carry a sheaf/pair flag d and a
// holomorphic-Euler-characteristic coordinate n, i.e. (d, beta, n).

using CurveClass = std::vector<long long>;

struct KClass {
  int d = 0;          // 0 = sheaf class, 1 = pair class
  CurveClass beta;
  long long n = 0;

  bool operator==(const KClass& o) const {
    return d == o.d && beta == o.beta && n == o.n;
  }
  bool operator<(const KClass& o) const {
    if (d != o.d) return d < o.d;
    if (beta != o.beta) return beta < o.beta;
    return n < o.n;
  }
};

KClass kclass_add(const KClass& a, const KClass& b);
std::string kclass_str(const KClass& a);
std::string curve_str(const CurveClass& b);

struct GeometryModel {
  int rank = 1;
  std::vector<long long> c1;    // first Chern vector, pairs with curve classes
  std::vector<Rat> omega;       // default polarization, entries > 0
  std::vector<long long> L;     // ample integral class (period scale), entries > 0
  // Optional replacement for the default symmetrized pairing: a symmetric
  // integer matrix on (d, beta..., n) coordinates, size (rank+2)^2.
  std::optional<std::vector<std::vector<long long>>> euler_override;

  void validate() const;
};

bool is_effective(const CurveClass& beta);

// all effective gamma with gamma = beta or beta - gamma effective;
// in this cone that is every nonzero lattice vector in the box [0, beta]
std::vector<CurveClass> factors(const CurveClass& beta, const GeometryModel& g);

// largest K with a decomposition of beta into K effective summands
long long split_count(const CurveClass& beta);

long long c1_deg(const CurveClass& beta, const GeometryModel& g);
bool is_positive(const CurveClass& beta, const GeometryModel& g);
// positive and all factors positive; hereditary under effective splitting here
bool is_superpositive(const CurveClass& beta, const GeometryModel& g);

Rat omega_deg(const CurveClass& beta, const std::vector<Rat>& omega);
long long ample_deg(const CurveClass& beta, const GeometryModel& g); // L . beta

// Symmetrized pairing.  Default: -(d * (c1.beta') + d' * (c1.beta));
// vanishes on sheaf-class pairs, symmetric, biadditive, independent of n.
// The override, when present, wins.
long long euler_sym(const KClass& a, const KClass& b, const GeometryModel& g);

} // namespace ptcalc
