#include "ptcalc/ring.hpp"

namespace ptcalc {

void relem_check_same(const RElem& a, const RElem& b, const char* op) {
  if (a.c.size() != b.c.size())
    throw InputError(std::string("coefficient-ring mismatch in ") + op +
                     ": truncation " + std::to_string(a.trunc()) + " vs " +
                     std::to_string(b.trunc()));
}

RElem relem_zero(int n) { return RElem(n); }

RElem relem_one(int n) { return RElem(n, Rat(1)); }

RElem relem_scalar(int n, const Rat& r) { return RElem(n, r); }

RElem relem_spow(int n, int k) {
  RElem e(n);
  if (k >= 0 && k <= n) e.c[static_cast<size_t>(k)] = 1;
  return e;
}

RElem operator+(const RElem& a, const RElem& b) {
  relem_check_same(a, b, "+");
  RElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

RElem operator-(const RElem& a, const RElem& b) {
  relem_check_same(a, b, "-");
  RElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

RElem operator-(const RElem& a) {
  RElem r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

RElem operator*(const RElem& a, const RElem& b) {
  relem_check_same(a, b, "*");
  RElem r(a.trunc());
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; i + j < b.c.size(); ++j) {
      if (b.c[j] == 0) continue;
      r.c[i + j] += a.c[i] * b.c[j];
    }
  }
  return r;
}

RElem operator*(const Rat& r, const RElem& a) {
  RElem out = a;
  for (auto& x : out.c) x *= r;
  return out;
}

std::string relem_str(const RElem& a) {
  std::string out;
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    if (!out.empty()) out += " + ";
    out += rat_str(a.c[i]);
    if (i == 1) out += "*s";
    else if (i > 1) out += "*s^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

} // namespace ptcalc
