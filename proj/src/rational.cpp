#include "ptcalc/rational.hpp"

namespace ptcalc {

Rat rat_parse(const std::string& text, const std::string& where) {
  // strip surrounding whitespace
  size_t a = text.find_first_not_of(" \t");
  size_t b = text.find_last_not_of(" \t");
  if (a == std::string::npos)
    throw InputError("empty rational at " + where);
  std::string s = text.substr(a, b - a + 1);

  size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      Int n(s);
      return Rat(n);
    }
    Int n(s.substr(0, slash));
    Int d(s.substr(slash + 1));
    if (d == 0)
      throw InputError("zero denominator in rational '" + s + "' at " + where);
    return Rat(n, d);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("malformed rational '" + s + "' at " + where);
  }
}

Int binom_int(long long n, long long k) {
  if (k < 0 || k > n) return Int(0);
  if (k > n - k) k = n - k;
  Int r = 1;
  for (long long i = 0; i < k; ++i) {
    r *= Int(n - i);
    r /= Int(i + 1); // divides exactly at each step
  }
  return r;
}

Int factorial_int(long long n) {
  Int r = 1;
  for (long long i = 2; i <= n; ++i) r *= i;
  return r;
}

Rat binom_rat(const Rat& x, long long k) {
  if (k < 0) return Rat(0);
  Rat r = 1;
  for (long long i = 0; i < k; ++i) r *= (x - Rat(i));
  return r / Rat(factorial_int(k));
}

} // namespace ptcalc
