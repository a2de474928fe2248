#include "ptcalc/melem.hpp"

namespace ptcalc {

MElem melem_zero(int n) { return MElem(n); }

MElem melem_basis(int n, const std::string& sym, const RElem& coeff) {
  MElem e(n);
  if (!coeff.is_zero()) {
    if (coeff.trunc() != n)
      throw InputError("coefficient-ring mismatch building module element at symbol " + sym);
    e.m.emplace(sym, coeff);
  }
  return e;
}

MElem melem_basis(int n, const std::string& sym, const Rat& coeff) {
  return melem_basis(n, sym, relem_scalar(n, coeff));
}

void melem_add_to(MElem& acc, const std::string& sym, const RElem& coeff) {
  if (coeff.is_zero()) return;
  if (coeff.trunc() != acc.trunc_n)
    throw InputError("coefficient-ring mismatch adding to module element at symbol " + sym);
  auto it = acc.m.find(sym);
  if (it == acc.m.end()) {
    acc.m.emplace(sym, coeff);
    return;
  }
  it->second = it->second + coeff;
  if (it->second.is_zero()) acc.m.erase(it);
}

MElem operator+(const MElem& a, const MElem& b) {
  if (a.trunc_n != b.trunc_n)
    throw InputError("coefficient-ring mismatch in module addition");
  MElem r = a;
  for (const auto& [sym, co] : b.m) melem_add_to(r, sym, co);
  return r;
}

MElem operator-(const MElem& a, const MElem& b) { return a + (-b); }

MElem operator-(const MElem& a) {
  MElem r = a;
  for (auto& [sym, co] : r.m) co = -co;
  return r;
}

MElem operator*(const Rat& r, const MElem& a) {
  MElem out(a.trunc_n);
  if (r == 0) return out;
  for (const auto& [sym, co] : a.m) {
    RElem s = r * co;
    if (!s.is_zero()) out.m.emplace(sym, s);
  }
  return out;
}

MElem operator*(const RElem& r, const MElem& a) {
  MElem out(a.trunc_n);
  if (r.is_zero()) return out;
  for (const auto& [sym, co] : a.m) {
    RElem s = r * co;
    if (!s.is_zero()) out.m.emplace(sym, s);
  }
  return out;
}

std::string melem_str(const MElem& a) {
  std::string out;
  for (const auto& [sym, co] : a.m) {
    if (!out.empty()) out += " + ";
    out += "(" + relem_str(co) + ")*" + sym;
  }
  return out.empty() ? "0" : out;
}

} // namespace ptcalc
