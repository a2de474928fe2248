#include "ptcalc/poly.hpp"

#include <numeric>

namespace ptcalc {

// ---- RatPoly ---------------------------------------------------------------

RatPoly ratpoly_const(int k, const Rat& v) {
  RatPoly p;
  p.k = k;
  if (v != 0) p.c.emplace(std::vector<int>(static_cast<size_t>(k), 0), v);
  return p;
}

void ratpoly_add_term(RatPoly& p, const std::vector<int>& e, const Rat& v) {
  if (static_cast<int>(e.size()) != p.k)
    throw InputError("exponent arity mismatch in polynomial term");
  if (v == 0) return;
  auto it = p.c.find(e);
  if (it == p.c.end()) { p.c.emplace(e, v); return; }
  it->second += v;
  if (it->second == 0) p.c.erase(it);
}

Rat ratpoly_eval(const RatPoly& p, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != p.k)
    throw InputError("evaluation arity mismatch");
  Rat acc = 0;
  for (const auto& [e, co] : p.c) {
    Rat t = co;
    for (int i = 0; i < p.k; ++i)
      for (int j = 0; j < e[static_cast<size_t>(i)]; ++j) t *= x[static_cast<size_t>(i)];
    acc += t;
  }
  return acc;
}

int ratpoly_total_degree(const RatPoly& p) {
  int d = -1;
  for (const auto& [e, co] : p.c)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

RatPoly ratpoly_swap2(const RatPoly& p) {
  if (p.k != 2) throw InputError("ratpoly_swap2 needs a bivariate polynomial");
  RatPoly q;
  q.k = 2;
  for (const auto& [e, co] : p.c) q.c.emplace(std::vector<int>{e[1], e[0]}, co);
  return q;
}

static std::string monomial_str(const std::vector<int>& e, const char* base) {
  std::string s;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    s += "*";
    s += base;
    s += std::to_string(i + 1);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

std::string ratpoly_str(const RatPoly& p) {
  std::string out;
  for (const auto& [e, co] : p.c) {
    if (!out.empty()) out += " + ";
    out += rat_str(co) + monomial_str(e, "n");
  }
  return out.empty() ? "0" : out;
}

// ---- MPoly -----------------------------------------------------------------

MPoly mpoly_zero(int k, int tn) { return MPoly(k, tn); }

void mpoly_add_term(MPoly& p, const std::vector<int>& e, const MElem& v) {
  if (static_cast<int>(e.size()) != p.k)
    throw InputError("exponent arity mismatch in polynomial term");
  if (v.is_zero()) return;
  if (v.trunc_n != p.trunc_n)
    throw InputError("coefficient-ring mismatch in polynomial term");
  auto it = p.c.find(e);
  if (it == p.c.end()) { p.c.emplace(e, v); return; }
  it->second = it->second + v;
  if (it->second.is_zero()) p.c.erase(it);
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  if (a.k != b.k || a.trunc_n != b.trunc_n)
    throw InputError("polynomial shape mismatch in +");
  MPoly r = a;
  for (const auto& [e, co] : b.c) mpoly_add_term(r, e, co);
  return r;
}

MPoly operator*(const Rat& r, const MPoly& a) {
  MPoly out(a.k, a.trunc_n);
  if (r == 0) return out;
  for (const auto& [e, co] : a.c) out.c.emplace(e, r * co);
  return out;
}

MElem mpoly_eval(const MPoly& p, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != p.k)
    throw InputError("evaluation arity mismatch");
  MElem acc(p.trunc_n);
  for (const auto& [e, co] : p.c) {
    Rat t = 1;
    for (int i = 0; i < p.k; ++i)
      for (int j = 0; j < e[static_cast<size_t>(i)]; ++j) t *= x[static_cast<size_t>(i)];
    acc = acc + t * co;
  }
  return acc;
}

int mpoly_total_degree(const MPoly& p) {
  int d = -1;
  for (const auto& [e, co] : p.c)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

MPoly mpoly_sub_affine_diag(const MPoly& p, const std::vector<Rat>& a, const Rat& d) {
  if (static_cast<int>(a.size()) != p.k)
    throw InputError("offset arity mismatch in affine substitution");
  MPoly out(p.k, p.trunc_n);
  // expand each term: prod_i (a_i + d*y_i)^{e_i}
  for (const auto& [e, co] : p.c) {
    // running list of (exponent vector, scalar) pairs
    std::vector<std::pair<std::vector<int>, Rat>> parts;
    parts.emplace_back(std::vector<int>(static_cast<size_t>(p.k), 0), Rat(1));
    for (int i = 0; i < p.k; ++i) {
      int ei = e[static_cast<size_t>(i)];
      if (ei == 0) continue;
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (int j = 0; j <= ei; ++j) {
        // binom(ei,j) * a_i^{ei-j} * d^j * y_i^j
        Rat f = Rat(binom_int(ei, j));
        for (int t = 0; t < ei - j; ++t) f *= a[static_cast<size_t>(i)];
        for (int t = 0; t < j; ++t) f *= d;
        if (f == 0) continue;
        for (const auto& [pe, pc] : parts) {
          auto ne = pe;
          ne[static_cast<size_t>(i)] += j;
          next.emplace_back(ne, pc * f);
        }
      }
      parts = std::move(next);
    }
    for (const auto& [pe, pc] : parts) mpoly_add_term(out, pe, pc * co);
  }
  return out;
}

MPoly upoly_compose_affine(const MPoly& p, const Rat& a, const Rat& b) {
  if (p.k != 1) throw InputError("upoly_compose_affine needs univariate input");
  return mpoly_sub_affine_diag(p, {a}, b);
}

MPoly upoly_interpolate(const std::vector<Rat>& xs, const std::vector<MElem>& vs,
                        int trunc_n) {
  if (xs.size() != vs.size() || xs.empty())
    throw InputError("interpolation needs matching nonempty node/value lists");
  size_t n = xs.size();
  // divided differences
  std::vector<MElem> dd = vs;
  for (size_t lvl = 1; lvl < n; ++lvl)
    for (size_t i = n - 1; i >= lvl; --i) {
      Rat dx = xs[i] - xs[i - lvl];
      if (dx == 0) throw InputError("repeated node in interpolation");
      dd[i] = (Rat(1) / dx) * (dd[i] - dd[i - 1]);
    }
  // assemble Newton form dd[0] + dd[1](x-x0) + dd[2](x-x0)(x-x1) + ...
  // the running basis product (x-x0)...(x-x_{i-1}) has rational coefficients
  MPoly acc(1, trunc_n);
  RatPoly rb = ratpoly_const(1, Rat(1));
  for (size_t i = 0; i < n; ++i) {
    // acc += dd[i] * rb
    for (const auto& [e, co] : rb.c) mpoly_add_term(acc, e, co * dd[i]);
    // rb *= (x - xs[i])
    RatPoly nrb;
    nrb.k = 1;
    for (const auto& [e, co] : rb.c) {
      ratpoly_add_term(nrb, {e[0] + 1}, co);
      ratpoly_add_term(nrb, {e[0]}, -xs[i] * co);
    }
    rb = std::move(nrb);
  }
  return acc;
}

MElem upoly_eval(const MPoly& p, const Rat& x) { return mpoly_eval(p, {x}); }

std::string mpoly_str(const MPoly& p) {
  std::string out;
  for (const auto& [e, co] : p.c) {
    if (!out.empty()) out += " + ";
    out += "[" + melem_str(co) + "]" + monomial_str(e, "n");
  }
  return out.empty() ? "0" : out;
}

} // namespace ptcalc
