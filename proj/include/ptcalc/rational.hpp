#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "ptcalc/errors.hpp"

namespace ptcalc {

// Every number in the engine is an exact rational.  No floating point
// anywhere: comparisons, slopes, polynomial coefficients, generating-function
// coefficients are all cpp_rational / cpp_int.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// floor / ceil as exact integers.  cpp_int division truncates toward zero,
// so negative numerators need the usual correction.
inline Int rat_floor(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r); // d > 0 by cpp_rational invariant
  Int q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

inline Int rat_ceil(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r);
  Int q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

inline long long to_ll(const Int& v) { return v.convert_to<long long>(); }

// Canonical text form: "p" for integers, "p/q" otherwise (q > 0, reduced).
// cpp_rational already keeps the reduced form, so .str() is it.
inline std::string rat_str(const Rat& r) { return r.str(); }

// Parse "p" or "p/q".  A zero denominator is an input error; this is the one
// place the "1/0" contract is enforced.  `where` names the offending field so
// CLI errors point at the scenario line.
Rat rat_parse(const std::string& text, const std::string& where);

// Exact binomial coefficient for integer n >= 0, 0 <= k <= n.
Int binom_int(long long n, long long k);

// Factorial as exact integer.
Int factorial_int(long long n);

// Binomial with an arbitrary exact rational top:  x(x-1)...(x-k+1)/k!.
Rat binom_rat(const Rat& x, long long k);

} // namespace ptcalc
