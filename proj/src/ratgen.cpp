#include "ptcalc/ratgen.hpp"

#include <algorithm>
#include <numeric>

namespace ptcalc {

MElem gf_coeff(const RationalGF& g, long long n) {
  MElem acc = melem_zero(g.trunc_n);
  auto it = g.prefix.find(n);
  if (it != g.prefix.end()) acc = acc + it->second;
  for (const auto& t : g.tails) {
    long long rel = n - t.j;
    if (rel < 0) continue;
    if (rel % t.d != 0) continue;
    long long T = rel / t.d;
    for (const auto& [m, c] : t.Q) {
      if (m > T) continue;
      long long steps = T - m;
      acc = acc + Rat(binom_int(t.e - 1 + steps, steps)) * c;
    }
  }
  return acc;
}

RationalGF gf_add(const RationalGF& a, const RationalGF& b) {
  if (a.trunc_n != b.trunc_n) throw InputError("coefficient-ring mismatch in gf_add");
  RationalGF r = a;
  for (const auto& [n, v] : b.prefix) {
    auto [it, fresh] = r.prefix.emplace(n, v);
    if (!fresh) {
      it->second = it->second + v;
      if (it->second.is_zero()) r.prefix.erase(it);
    }
  }
  r.tails.insert(r.tails.end(), b.tails.begin(), b.tails.end());
  return r;
}

namespace {

// binom(t + i, i) as a univariate rational polynomial in t
RatPoly binom_shift_poly(int i) {
  RatPoly p = ratpoly_const(1, Rat(1));
  for (int s = 1; s <= i; ++s) {
    // p *= (t + s) / s
    RatPoly nxt;
    nxt.k = 1;
    for (const auto& [e, co] : p.c) {
      ratpoly_add_term(nxt, {e[0] + 1}, co / Rat(s));
      ratpoly_add_term(nxt, {e[0]}, Rat(s) * co / Rat(s));
    }
    p = std::move(nxt);
  }
  return p;
}

int upoly_degree(const MPoly& p) {
  int g = -1;
  for (const auto& [e, c] : p.c) g = std::max(g, e[0]);
  return g;
}

MElem upoly_coeff(const MPoly& p, int deg) {
  auto it = p.c.find(std::vector<int>{deg});
  return it == p.c.end() ? melem_zero(p.trunc_n) : it->second;
}

} // namespace

RationalGF qp_tail_to_gf(const QuasiPoly& f, long long n0) {
  RationalGF out;
  out.trunc_n = f.trunc_n;
  for (long long r = 0; r < f.d; ++r) {
    const MPoly& P = f.polys[static_cast<size_t>(r)];
    if (P.is_zero()) continue;
    long long j = n0 + posmod(r - n0, f.d); // first n >= n0 with n == r (mod d)
    // Ptil(t) = P(j + d t), then peel into the binomial basis binom(t+i, i)
    MPoly ptil = upoly_compose_affine(P, Rat(j), Rat(f.d));
    int g = upoly_degree(ptil);
    std::vector<MElem> a(static_cast<size_t>(g + 1), melem_zero(f.trunc_n));
    while (!ptil.is_zero()) {
      int gg = upoly_degree(ptil);
      MElem lead = upoly_coeff(ptil, gg);
      MElem ai = Rat(factorial_int(gg)) * lead;
      a[static_cast<size_t>(gg)] = ai;
      RatPoly basis = binom_shift_poly(gg);
      MPoly sub(1, f.trunc_n);
      for (const auto& [e, co] : basis.c) mpoly_add_term(sub, e, co * ai);
      ptil = ptil + (Rat(-1) * sub);
    }
    // Q(y) = sum_i a_i (1 - y)^(g - i), pole order e = g + 1
    GFTail tail;
    tail.j = j;
    tail.d = f.d;
    tail.e = g + 1;
    for (int i = 0; i <= g; ++i) {
      if (a[static_cast<size_t>(i)].is_zero()) continue;
      int pw = g - i;
      for (int s = 0; s <= pw; ++s) {
        Rat co = Rat(binom_int(pw, s));
        if (s % 2 == 1) co = -co;
        MElem add = co * a[static_cast<size_t>(i)];
        auto [it, fresh] = tail.Q.emplace(s, add);
        if (!fresh) {
          it->second = it->second + add;
          if (it->second.is_zero()) tail.Q.erase(it);
        }
      }
    }
    if (!tail.Q.empty()) out.tails.push_back(std::move(tail));
  }
  return out;
}

// ---- exact pole analysis ----------------------------------------------------

namespace {

using ZPoly = std::map<long long, Rat>; // exponent -> coefficient, zeros absent

void zp_add_to(ZPoly& p, long long e, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = p.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
  ZPoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) zp_add_to(r, ea + eb, ca * cb);
  return r;
}

ZPoly zp_one() { return ZPoly{{0, Rat(1)}}; }

ZPoly zp_geom_factor(long long d) { // 1 - q^d
  ZPoly p;
  zp_add_to(p, 0, Rat(1));
  zp_add_to(p, d, Rat(-1));
  return p;
}

ZPoly zp_pow(const ZPoly& a, int e) {
  ZPoly r = zp_one();
  for (int i = 0; i < e; ++i) r = zp_mul(r, a);
  return r;
}

// exact division; nullopt when the remainder is nonzero
std::optional<ZPoly> zp_div_exact(const ZPoly& a, const ZPoly& b) {
  if (b.empty()) throw InputError("division by the zero polynomial");
  ZPoly rem = a, quot;
  long long db = b.rbegin()->first;
  Rat lb = b.rbegin()->second;
  while (!rem.empty()) {
    long long dr = rem.rbegin()->first;
    if (dr < db) return std::nullopt;
    Rat factor = rem.rbegin()->second / lb;
    long long shift = dr - db;
    zp_add_to(quot, shift, factor);
    for (const auto& [e, c] : b) zp_add_to(rem, e + shift, -factor * c);
  }
  return quot;
}

int zp_mult_of(const ZPoly& a, const ZPoly& f, int cap) {
  ZPoly cur = a;
  for (int m = 0; m <= cap; ++m) {
    auto q = zp_div_exact(cur, f);
    if (!q) return m;
    cur = std::move(*q);
  }
  return cap + 1;
}

} // namespace

std::map<long long, Rat> cyclotomic(long long m) {
  static std::map<long long, ZPoly> memo;
  auto it = memo.find(m);
  if (it != memo.end()) return it->second;
  // (q^m - 1) / prod of lower cyclotomics at the proper divisors
  ZPoly num;
  zp_add_to(num, m, Rat(1));
  zp_add_to(num, 0, Rat(-1));
  for (long long d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto q = zp_div_exact(num, cyclotomic(d));
    if (!q) throw InputError("cyclotomic recursion failed"); // unreachable
    num = std::move(*q);
  }
  memo.emplace(m, num);
  return num;
}

std::vector<PoleInfo> pole_locations(const RationalGF& g) {
  // common denominator exponents: E_d = max pole order among tails of step d
  std::map<long long, int> E;
  for (const auto& t : g.tails) {
    auto [it, fresh] = E.emplace(t.d, t.e);
    if (!fresh) it->second = std::max(it->second, t.e);
  }

  // numerator with module coefficients, common denominator cleared
  std::map<long long, MElem> num;
  auto num_add = [&](long long e, const MElem& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = num.emplace(e, v);
    if (!fresh) {
      it->second = it->second + v;
      if (it->second.is_zero()) num.erase(it);
    }
  };
  auto denom_except = [&](long long skip_d, int skip_e) {
    ZPoly p = zp_one();
    for (const auto& [d, e] : E) {
      int pw = e - (d == skip_d ? skip_e : 0);
      p = zp_mul(p, zp_pow(zp_geom_factor(d), pw));
    }
    return p;
  };

  ZPoly full_den = denom_except(0, 0);
  for (const auto& [n, v] : g.prefix)
    for (const auto& [e, c] : full_den) num_add(n + e, c * v);
  for (const auto& t : g.tails) {
    ZPoly factor = denom_except(t.d, t.e);
    for (const auto& [m, v] : t.Q)
      for (const auto& [e, c] : factor) num_add(t.j + t.d * m + e, c * v);
  }

  std::vector<PoleInfo> out;
  if (num.empty()) return out; // the function is identically zero

  // pole at the origin for Laurent parts
  long long min_exp = num.begin()->first;
  if (min_exp < 0) out.push_back(PoleInfo{0, 0, static_cast<int>(-min_exp)});

  // split into scalar components (symbol, s-power) for the multiplicity scan
  std::vector<ZPoly> comps;
  {
    std::map<std::pair<std::string, int>, ZPoly> bycomp;
    for (const auto& [n, v] : num)
      for (const auto& [sym, re] : v.m)
        for (size_t i = 0; i < re.c.size(); ++i)
          if (re.c[i] != 0)
            zp_add_to(bycomp[{sym, static_cast<int>(i)}], n - min_exp, re.c[i]);
    for (auto& [key, p] : bycomp) comps.push_back(std::move(p));
  }

  // candidate cyclotomic factors: divisors of the geometric steps
  std::vector<long long> ms;
  for (const auto& [d, e] : E)
    for (long long m = 1; m <= d; ++m)
      if (d % m == 0 && std::find(ms.begin(), ms.end(), m) == ms.end())
        ms.push_back(m);
  std::sort(ms.begin(), ms.end());

  for (long long m : ms) {
    int D = 0;
    for (const auto& [d, e] : E)
      if (d % m == 0) D += e;
    ZPoly phi = cyclotomic(m);
    int mv = D;
    for (const auto& c : comps) mv = std::min(mv, zp_mult_of(c, phi, D));
    int order = D - mv;
    if (order <= 0) continue;
    for (long long k = 0; k < m; ++k)
      if (std::gcd(k, m) == 1 || (m == 1 && k == 0))
        out.push_back(PoleInfo{m, k, order});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string gf_str(const RationalGF& g) {
  std::string out;
  bool first = true;
  for (const auto& [n, v] : g.prefix) {
    if (!first) out += " + ";
    out += "(" + melem_str(v) + ")*q^" + std::to_string(n);
    first = false;
  }
  for (const auto& t : g.tails) {
    if (!first) out += " + ";
    first = false;
    std::string qs;
    bool f2 = true;
    for (const auto& [m, c] : t.Q) {
      if (!f2) qs += " + ";
      qs += "(" + melem_str(c) + ")*y^" + std::to_string(m);
      f2 = false;
    }
    out += "q^" + std::to_string(t.j) + "*[" + qs + "] / (1 - q^" +
           std::to_string(t.d) + ")^" + std::to_string(t.e) + "  with y = q^" +
           std::to_string(t.d);
  }
  if (first) out = "0";
  return out;
}

} // namespace ptcalc
