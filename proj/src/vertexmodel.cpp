#include "ptcalc/vertexmodel.hpp"

#include <algorithm>

namespace ptcalc {

ClassKey class_key(const KClass& a) { return ClassKey{a.d, a.beta}; }

std::string classkey_str(const ClassKey& k) {
  std::string s = "(" + std::to_string(k.d) + ";";
  for (size_t i = 0; i < k.beta.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k.beta[i]);
  }
  return s + ")";
}

const BaseSymbol& VertexConfig::symbol(const std::string& name) const {
  auto it = symbols.find(name);
  if (it == symbols.end())
    throw ConfigError("unknown base symbol '" + name + "'");
  return it->second;
}

Rat VertexConfig::weight_value(int i, const KClass& a, const KClass& b) const {
  if (i == 0) return Rat(1);
  ClassKey ka = class_key(a), kb = class_key(b);
  bool swapped = kb < ka;
  std::pair<ClassKey, ClassKey> key = swapped ? std::make_pair(kb, ka)
                                              : std::make_pair(ka, kb);
  const RatPoly* poly = nullptr;
  auto ti = weights.find(i);
  if (ti != weights.end()) {
    auto te = ti->second.find(key);
    if (te != ti->second.end()) poly = &te->second;
  }
  if (!poly) {
    auto tw = weight_wildcard.find(i);
    if (tw != weight_wildcard.end()) poly = &tw->second;
  }
  if (!poly)
    throw ConfigError("missing weight entry w[" + std::to_string(i) + "](" +
                      classkey_str(ka) + ", " + classkey_str(kb) + ")");
  Rat n1 = Rat(swapped ? b.n : a.n);
  Rat n2 = Rat(swapped ? a.n : b.n);
  return ratpoly_eval(*poly, {n1, n2});
}

Rat VertexConfig::pairing_const(const KClass& a) const {
  return Rat(-a.d) * eta_scale;
}

void VertexConfig::validate() const {
  geom.validate();
  if (trunc_n < 0) throw InputError("truncation level must be >= 0");
  if (eta_scale == 0) throw InputError("eta scale must be nonzero");
  for (const auto& [name, sym] : symbols) {
    if (name.empty() || name != sym.name)
      throw InputError("base symbol name mismatch");
    if (sym.hdeg < 0) throw InputError("base symbol hdeg must be >= 0 at " + name);
    if (sym.label.beta.size() != static_cast<size_t>(geom.rank))
      throw InputError("base symbol label rank mismatch at " + name);
  }
  for (const auto& [i, table] : weights) {
    if (i < 1) throw InputError("weight index must be >= 1");
    for (const auto& [key, poly] : table) {
      if (poly.k != 2) throw InputError("weight polynomials take (n1, n2)");
      if (ratpoly_total_degree(poly) > i)
        throw InputError("weight w[" + std::to_string(i) + "](" +
                         classkey_str(key.first) + ", " + classkey_str(key.second) +
                         ") exceeds total degree " + std::to_string(i));
      if (key.first == key.second && !(ratpoly_swap2(poly) == poly))
        throw InputError("weight w[" + std::to_string(i) + "] at an equal-key pair " +
                         classkey_str(key.first) + " must be symmetric in (n1, n2)");
    }
  }
  for (const auto& [i, poly] : weight_wildcard) {
    if (i < 1) throw InputError("weight index must be >= 1");
    if (poly.k != 2) throw InputError("weight polynomials take (n1, n2)");
    if (ratpoly_total_degree(poly) > i)
      throw InputError("wildcard weight w[" + std::to_string(i) + "] exceeds total degree " +
                       std::to_string(i));
    if (!(ratpoly_swap2(poly) == poly))
      throw InputError("wildcard weight w[" + std::to_string(i) +
                       "] must be symmetric in (n1, n2)");
  }
}

ModeElement velem_zero(const VertexConfig& cfg) { return ModeElement(cfg.trunc_n); }

ModeElement velem_symbol(const VertexConfig& cfg, const std::string& name) {
  return velem_symbol_at(cfg, name, cfg.symbol(name).label);
}

ModeElement velem_symbol_at(const VertexConfig& cfg, const std::string& name,
                            const KClass& label) {
  cfg.symbol(name); // existence check
  ModeElement u(cfg.trunc_n);
  VTermKey key;
  key.mono = {name};
  key.tdeg = 0;
  key.label = label;
  u.terms.emplace(key, relem_one(cfg.trunc_n));
  return u;
}

void velem_add_term(ModeElement& u, const VTermKey& key, const RElem& coeff) {
  if (coeff.is_zero()) return;
  if (coeff.trunc() != u.trunc_n)
    throw InputError("coefficient-ring mismatch in operator-calculus term");
  auto it = u.terms.find(key);
  if (it == u.terms.end()) {
    u.terms.emplace(key, coeff);
    return;
  }
  it->second = it->second + coeff;
  if (it->second.is_zero()) u.terms.erase(it);
}

ModeElement operator+(const ModeElement& a, const ModeElement& b) {
  if (a.trunc_n != b.trunc_n)
    throw InputError("coefficient-ring mismatch in operator-calculus addition");
  ModeElement r = a;
  for (const auto& [k, c] : b.terms) velem_add_term(r, k, c);
  return r;
}

ModeElement operator-(const ModeElement& a, const ModeElement& b) { return a + (-b); }

ModeElement operator-(const ModeElement& a) {
  ModeElement r = a;
  for (auto& [k, c] : r.terms) c = -c;
  return r;
}

ModeElement operator*(const Rat& r, const ModeElement& a) {
  ModeElement out(a.trunc_n);
  if (r == 0) return out;
  for (const auto& [k, c] : a.terms) out.terms.emplace(k, r * c);
  return out;
}

ModeElement operator*(const RElem& r, const ModeElement& a) {
  ModeElement out(a.trunc_n);
  for (const auto& [k, c] : a.terms) {
    RElem s = r * c;
    if (!s.is_zero()) out.terms.emplace(k, s);
  }
  return out;
}

int term_base_hdeg(const VertexConfig& cfg, const VTermKey& key) {
  int h = 0;
  for (const auto& s : key.mono) h += cfg.symbol(s).hdeg;
  return h;
}

int term_hdeg(const VertexConfig& cfg, const VTermKey& key) {
  return term_base_hdeg(cfg, key) + 2 * key.tdeg;
}

ModeElement op_D(const ModeElement& u) {
  ModeElement r(u.trunc_n);
  for (const auto& [k, c] : u.terms) {
    VTermKey nk = k;
    nk.tdeg += 1;
    r.terms.emplace(nk, c);
  }
  return r;
}

ModeElement op_R(const ModeElement& u, const VertexConfig& cfg) {
  ModeElement r(u.trunc_n);
  for (const auto& [k, c] : u.terms) {
    if (k.tdeg == 0) continue;
    Rat cc = cfg.pairing_const(k.label) * Rat(k.tdeg);
    if (cc == 0) continue;
    VTermKey nk = k;
    nk.tdeg -= 1;
    velem_add_term(r, nk, cc * c);
  }
  return r;
}

ModeElement proj_e0(const ModeElement& u, const VertexConfig& cfg) {
  ModeElement acc(u.trunc_n);
  for (const auto& [key, coeff] : u.terms) {
    Rat c = cfg.pairing_const(key.label);
    if (c == 0)
      throw InputError("projection undefined: pairing constant vanishes on label " +
                       kclass_str(key.label));
    // finite operator sum, k <= tdeg since R^k kills lower powers of t
    ModeElement single(u.trunc_n);
    single.terms.emplace(key, coeff);
    ModeElement rk = single; // R^k applied
    Rat kfact = 1;
    Rat cpow = 1; // (-c)^k
    for (int k = 0; k <= key.tdeg; ++k) {
      if (k > 0) {
        rk = op_R(rk, cfg);
        kfact *= Rat(k);
        cpow *= -c;
      }
      ModeElement dk = rk; // D^k R^k
      for (int j = 0; j < k; ++j) dk = op_D(dk);
      acc = acc + (Rat(1) / (kfact * cpow)) * dk;
    }
  }
  return acc;
}

ModeElement kernel_part(const ModeElement& u) {
  ModeElement r(u.trunc_n);
  for (const auto& [k, c] : u.terms)
    if (k.tdeg == 0) r.terms.emplace(k, c);
  return r;
}

ModeElement image_part(const ModeElement& u) {
  ModeElement r(u.trunc_n);
  for (const auto& [k, c] : u.terms)
    if (k.tdeg > 0) r.terms.emplace(k, c);
  return r;
}

namespace {

// z-series with ModeElement coefficients, finitely many exponents
using ZSeries = std::map<long long, ModeElement>;

void zseries_add(ZSeries& s, long long e, const ModeElement& u, int trunc_n) {
  if (u.is_zero()) return;
  auto it = s.find(e);
  if (it == s.end()) {
    s.emplace(e, u);
    return;
  }
  it->second = it->second + u;
  if (it->second.is_zero()) s.erase(it);
  (void)trunc_n;
}

ZSeries zseries_dz(const ZSeries& s, int trunc_n) {
  ZSeries r;
  for (const auto& [e, u] : s) {
    if (e == 0) continue;
    zseries_add(r, e - 1, Rat(e) * u, trunc_n);
  }
  return r;
}

} // namespace

std::map<long long, ModeElement> mode_series(const ModeElement& u, const ModeElement& v,
                                             const VertexConfig& cfg) {
  if (u.trunc_n != cfg.trunc_n || v.trunc_n != cfg.trunc_n)
    throw InputError("coefficient-ring mismatch in mode series");
  ZSeries total;
  for (const auto& [ku, cu] : u.terms) {
    for (const auto& [kv, cv] : v.terms) {
      // base terms with t-degree stripped
      int a = ku.tdeg, b = kv.tdeg;
      KClass alpha = ku.label, beta = kv.label;
      long long chi = euler_sym(alpha, beta, cfg.geom);
      Rat sgn = 1;
      if (cfg.parity == VertexConfig::ParityChi && ((chi % 2) != 0)) sgn = -1;

      int hu = 0, hv = 0;
      for (const auto& s : ku.mono) hu += cfg.symbol(s).hdeg;
      for (const auto& s : kv.mono) hv += cfg.symbol(s).hdeg;
      int cap = (hu + hv + cfg.trunc_n) / 2;

      VTermKey merged;
      merged.mono = ku.mono;
      merged.mono.insert(merged.mono.end(), kv.mono.begin(), kv.mono.end());
      std::sort(merged.mono.begin(), merged.mono.end());
      merged.tdeg = 0;
      merged.label = kclass_add(alpha, beta);

      RElem cc = cu * cv;

      // The weight table is stored on unordered pairs, so it can only describe
      // the series for one orientation of each sheaf-sheaf term pair.  The
      // canonical orientation (ascending by label, then monomial) reads the
      // table directly; the reverse orientation is the skew reflection
      // (-1)^{hu hv} e^{zD} B(-z).  Without the reflection both orientations
      // would give the same series and the induced bracket on shift-free
      // classes would be symmetric instead of antisymmetric.
      bool flip = false;
      if (alpha.d == 0 && beta.d == 0) {
        if (beta != alpha) flip = beta < alpha;
        else flip = kv.mono < ku.mono;
      }

      // base series B(z) = sgn * sum_i w_i z^{chi - i} * merged
      ZSeries series;
      if (!flip) {
        for (int i = 0; i <= cap; ++i) {
          Rat w = cfg.weight_value(i, alpha, beta);
          if (w == 0) continue;
          ModeElement coeffel(cfg.trunc_n);
          velem_add_term(coeffel, merged, (sgn * w) * cc);
          zseries_add(series, chi - i, coeffel, cfg.trunc_n);
        }
      } else {
        // e^{zD} makes the reflected series infinite upward; exponents above
        // a + b + 1 only feed modes below k = -2 after the t-degree operators,
        // so cutting there keeps every mode the engine consumes exact
        Rat super = ((hu % 2) != 0 && (hv % 2) != 0) ? Rat(-1) : Rat(1);
        long long maxe = a + b + 1;
        for (int i = 0; i <= cap; ++i) {
          Rat w = cfg.weight_value(i, alpha, beta);
          if (w == 0) continue;
          long long e0 = chi - i;
          Rat refl = (((chi - i) % 2) != 0) ? Rat(-1) : Rat(1);
          Rat mfact = 1;
          for (long long m = 0; e0 + m <= maxe; ++m) {
            if (m > 0) mfact *= Rat(m);
            VTermKey shifted = merged;
            shifted.tdeg = (int)m;
            ModeElement coeffel(cfg.trunc_n);
            velem_add_term(coeffel, shifted, (super * refl * sgn * w / mfact) * cc);
            zseries_add(series, e0 + m, coeffel, cfg.trunc_n);
          }
        }
      }

      // first-argument t-degree: a applications of d/dz
      for (int j = 0; j < a; ++j) series = zseries_dz(series, cfg.trunc_n);
      // second-argument t-degree: b applications of (D - d/dz)
      for (int j = 0; j < b; ++j) {
        ZSeries dz = zseries_dz(series, cfg.trunc_n);
        ZSeries next;
        for (const auto& [e, el] : series) zseries_add(next, e, op_D(el), cfg.trunc_n);
        for (const auto& [e, el] : dz) zseries_add(next, e, -el, cfg.trunc_n);
        series = std::move(next);
      }

      for (const auto& [e, el] : series) zseries_add(total, e, el, cfg.trunc_n);
    }
  }

  // modes: u_k(v) = coefficient of z^{-k-1}
  std::map<long long, ModeElement> modes;
  for (const auto& [e, el] : total)
    if (!el.is_zero()) modes.emplace(-e - 1, el);
  return modes;
}

ModeElement mode_product(const ModeElement& u, const ModeElement& v, long long k,
                         const VertexConfig& cfg) {
  auto modes = mode_series(u, v, cfg);
  auto it = modes.find(k);
  return it == modes.end() ? velem_zero(cfg) : it->second;
}

ModeElement borcherds_bracket(const ModeElement& u, const ModeElement& v,
                              const VertexConfig& cfg) {
  // representative of the bracket on kernel classes: the zero mode, reduced
  // modulo the image of D (t-degree >= 1 span)
  return kernel_part(mode_product(u, v, 0, cfg));
}

namespace {

int uniform_dflag(const ModeElement& u, const char* side) {
  int d = -1;
  for (const auto& [k, c] : u.terms) {
    if (d == -1) d = k.label.d;
    else if (d != k.label.d)
      throw InputError(std::string("bracket ") + side +
                       " argument mixes sheaf and pair labels");
  }
  return d; // -1 for zero element
}

// sum_k (ratio^k / k!) D^k (u_k(v))
ModeElement weighted_bracket(const ModeElement& u, const ModeElement& v, const Rat& ratio,
                             const VertexConfig& cfg) {
  auto modes = mode_series(u, v, cfg);
  ModeElement acc = velem_zero(cfg);
  for (const auto& [k, el] : modes) {
    if (k < 0) continue;
    Rat f = 1;
    for (long long j = 1; j <= k; ++j) f *= ratio / Rat(j);
    ModeElement dk = el;
    for (long long j = 0; j < k; ++j) dk = op_D(dk);
    acc = acc + f * dk;
  }
  return acc;
}

} // namespace

ModeElement lifted_bracket(const ModeElement& u, const ModeElement& v,
                           const VertexConfig& cfg) {
  int du = uniform_dflag(u, "left");
  int dv = uniform_dflag(v, "right");
  if (du == -1 || dv == -1) return velem_zero(cfg);
  if (du == 0 && dv == 0) return mode_product(u, v, 0, cfg);
  if (du == 1 && dv == 0) return weighted_bracket(u, v, Rat(-1), cfg);
  if (du == 0 && dv == 1) return -weighted_bracket(v, u, Rat(-1), cfg);
  throw InputError("lifted bracket between two pair-type arguments; use the "
                   "general-constants form");
}

ModeElement lifted_bracket_general(const ModeElement& u, const ModeElement& v,
                                   const VertexConfig& cfg) {
  // requires uniform labels so the constants are well-defined
  if (u.is_zero() || v.is_zero()) return velem_zero(cfg);
  KClass lu = u.terms.begin()->first.label;
  KClass lv = v.terms.begin()->first.label;
  for (const auto& [k, c] : u.terms)
    if (!(k.label == lu)) throw InputError("general bracket needs a uniform left label");
  for (const auto& [k, c] : v.terms)
    if (!(k.label == lv)) throw InputError("general bracket needs a uniform right label");
  for (const auto& [k, c] : u.terms)
    if (k.tdeg != 0) throw InputError("general bracket arguments must be kernel-type");
  for (const auto& [k, c] : v.terms)
    if (k.tdeg != 0) throw InputError("general bracket arguments must be kernel-type");
  Rat cu = cfg.pairing_const(lu);
  Rat cuv = cfg.pairing_const(kclass_add(lu, lv));
  if (cuv == 0)
    throw InputError("general bracket undefined: pairing constant vanishes on the "
                     "total label; use the degenerate-case forms");
  return weighted_bracket(u, v, -cu / cuv, cfg);
}

ModeElement velem_from_melem(const VertexConfig& cfg, const MElem& m, const KClass& label) {
  if (m.trunc_n != cfg.trunc_n)
    throw InputError("coefficient-ring mismatch bridging a module element");
  ModeElement u(cfg.trunc_n);
  for (const auto& [sym, coeff] : m.m) {
    // invert vterm_render: "A*B@t2" -> mono {A, B}, tdeg 2; "1" -> empty mono.
    // Transferred values round-trip through the module this way.
    VTermKey key;
    key.label = label;
    std::string body = sym;
    auto at = body.rfind("@t");
    if (at != std::string::npos) {
      const std::string digits = body.substr(at + 2);
      if (digits.empty() ||
          digits.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("malformed shift-degree suffix in symbol '" + sym + "'");
      key.tdeg = std::stoi(digits);
      body = body.substr(0, at);
    }
    if (body != "1") {
      size_t start = 0;
      while (start <= body.size()) {
        size_t star = body.find('*', start);
        std::string part = body.substr(start, star == std::string::npos
                                                  ? std::string::npos
                                                  : star - start);
        cfg.symbol(part); // registered-symbol check, throws otherwise
        key.mono.push_back(part);
        if (star == std::string::npos) break;
        start = star + 1;
      }
      std::sort(key.mono.begin(), key.mono.end());
    }
    velem_add_term(u, key, coeff);
  }
  return u;
}

std::string vterm_render(const VTermKey& key) {
  std::string s;
  for (size_t i = 0; i < key.mono.size(); ++i) {
    if (i) s += "*";
    s += key.mono[i];
  }
  if (s.empty()) s = "1";
  if (key.tdeg > 0) s += "@t" + std::to_string(key.tdeg);
  return s;
}

MElem melem_from_velem(const ModeElement& u) {
  MElem m(u.trunc_n);
  for (const auto& [key, coeff] : u.terms)
    melem_add_to(m, vterm_render(key), coeff);
  return m;
}

std::string velem_str(const ModeElement& u) {
  std::string out;
  for (const auto& [key, coeff] : u.terms) {
    if (!out.empty()) out += " + ";
    out += "(" + relem_str(coeff) + ")*" + vterm_render(key) + "[" +
           kclass_str(key.label) + "]";
  }
  return out.empty() ? "0" : out;
}

} // namespace ptcalc
