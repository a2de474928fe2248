#include "ptcalc/wallcross.hpp"

#include <algorithm>
#include <functional>

namespace ptcalc {

namespace {

constexpr long long kNoCap = (1ll << 50);
constexpr size_t kMaxWord = 8;      // exact rewriting coefficients get slow beyond this
constexpr long long kMaxZero = 24;  // zero-class piece guard

bool is_zero_class(const CurveClass& b) {
  return std::all_of(b.begin(), b.end(), [](long long v) { return v == 0; });
}

CurveClass zero_class_of(int rank) {
  return CurveClass(static_cast<size_t>(rank), 0);
}

std::optional<MElem> dt_value_opt(const ScenarioData& s, const CurveClass& beta,
                                  long long n) {
  auto it = s.dt.find(beta);
  if (it == s.dt.end()) return std::nullopt;
  return qp_eval(it->second, n);
}

bool dt_class_nonzero(const ScenarioData& s, const CurveClass& beta) {
  auto it = s.dt.find(beta);
  return it != s.dt.end() && !qp_is_zero(it->second);
}

// multisets of effective summands of `total`, parts non-increasing
void enum_partitions(const GeometryModel& g, const CurveClass& total,
                     const std::function<void(const std::vector<CurveClass>&)>& cb) {
  std::vector<CurveClass> pool = factors(total, g);
  std::sort(pool.begin(), pool.end(), std::greater<CurveClass>());
  std::vector<CurveClass> cur;
  std::function<void(size_t, CurveClass)> rec = [&](size_t idx, CurveClass remaining) {
    if (is_zero_class(remaining)) {
      if (!cur.empty()) cb(cur);
      return;
    }
    if (idx == pool.size()) return;
    const CurveClass& p = pool[idx];
    long long maxc = kNoCap;
    for (size_t i = 0; i < p.size(); ++i)
      if (p[i] > 0) maxc = std::min(maxc, remaining[i] / p[i]);
    for (long long c = maxc; c >= 0; --c) {
      CurveClass next = remaining;
      bool ok = true;
      for (size_t i = 0; i < p.size(); ++i) {
        next[i] -= c * p[i];
        if (next[i] < 0) ok = false;
      }
      if (!ok) continue;
      for (long long t = 0; t < c; ++t) cur.push_back(p);
      rec(idx + 1, next);
      for (long long t = 0; t < c; ++t) cur.pop_back();
    }
  };
  rec(0, total);
}

struct PieceSpec {
  KClass cls;   // d and beta fixed; n filled by the assignment
  long long lo = 0;
  long long hi = kNoCap;
};

// all n-assignments with sum == total, per-piece bounds, and non-increasing n
// along runs of equal (d, beta) so each multiset appears exactly once
void assign_ns(std::vector<PieceSpec>& pieces, long long total,
               const std::function<void(const std::vector<KClass>&)>& cb) {
  size_t k = pieces.size();
  std::vector<long long> slo(k + 1, 0), shi(k + 1, 0);
  for (size_t i = k; i-- > 0;) {
    slo[i] = slo[i + 1] + pieces[i].lo;
    shi[i] = std::min(kNoCap, shi[i + 1] + pieces[i].hi);
  }
  std::vector<KClass> cls(k);
  for (size_t i = 0; i < k; ++i) cls[i] = pieces[i].cls;
  std::function<void(size_t, long long)> rec = [&](size_t i, long long budget) {
    if (i == k) {
      if (budget == 0) cb(cls);
      return;
    }
    long long lo = std::max(pieces[i].lo, budget - shi[i + 1]);
    long long hi = std::min(pieces[i].hi, budget - slo[i + 1]);
    if (i > 0 && pieces[i].cls.d == pieces[i - 1].cls.d &&
        pieces[i].cls.beta == pieces[i - 1].cls.beta)
      hi = std::min(hi, cls[i - 1].n); // canonical multiset ordering
    for (long long v = hi; v >= lo; --v) {
      cls[i].n = v;
      rec(i + 1, budget - v);
    }
  };
  rec(0, total);
}

// left-nested bracket of the word, projected to the shift-free part
MElem eval_word(const VertexConfig& cfg, const std::vector<ModeElement>& elems,
                const Word& w) {
  ModeElement acc = elems[static_cast<size_t>(w[0])];
  for (size_t i = 1; i < w.size(); ++i)
    acc = lifted_bracket(acc, elems[static_cast<size_t>(w[i])], cfg);
  return melem_from_velem(kernel_part(acc));
}

} // namespace

MElem dt_value(const ScenarioData& s, const CurveClass& beta, long long n) {
  auto v = dt_value_opt(s, beta, n);
  if (!v) throw ConfigError("no dt entry for class " + curve_str(beta));
  return *v;
}

MElem dt_wallcross(const ScenarioData& s, const CurveClass& beta, long long n,
                   long long window) {
  const auto& g = s.vcfg.geom;
  if (!is_effective(beta))
    throw InputError("wall crossing is indexed by effective classes; got " +
                     curve_str(beta));
  if (!s.omega_alt)
    throw ConfigError("wallcross needs omega_alt in [geometry]");
  if (window < 1) throw ConfigError("wallcross window must be >= 1");
  const long long W = window;

  StabilityCond tau = stab_sheaf(g.omega);
  StabilityCond taut = stab_sheaf(*s.omega_alt);
  MElem acc = dt_value(s, beta, n); // the one-piece decomposition
  bool zero_ok = dt_class_nonzero(s, zero_class_of(g.rank));

  auto process = [&](const std::vector<KClass>& cls) {
    // piece values first: one zero value kills every ordering
    std::vector<std::optional<MElem>> vals;
    int missing = -1;
    for (size_t i = 0; i < cls.size(); ++i) {
      auto v = dt_value_opt(s, cls[i].beta, cls[i].n);
      if (!v) {
        if (missing < 0) missing = static_cast<int>(i);
      } else if (v->is_zero()) {
        return;
      }
      vals.push_back(std::move(v));
    }
    if (cls.size() > kMaxWord)
      throw InputError("decomposition word of length " + std::to_string(cls.size()) +
                       " is too long for exact rewriting coefficients");
    LieWordSum lw = coeff_Utilde(cls, tau, taut);
    if (lw.terms.empty()) return;
    if (missing >= 0)
      throw ConfigError("no dt entry for class " + curve_str(cls[static_cast<size_t>(missing)].beta) +
                        ", required by a contributing decomposition of " +
                        curve_str(beta) + " at n = " + std::to_string(n));
    for (const auto& c : cls)
      if (c.n == W || c.n == -W)
        throw ConfigError("window too small: a contributing decomposition of " +
                          curve_str(beta) + " at n = " + std::to_string(n) +
                          " reaches |n_i| = " + std::to_string(W) +
                          "; raise the wallcross window");
    std::map<KClass, MElem> byclass;
    for (size_t i = 0; i < cls.size(); ++i) byclass.emplace(cls[i], *vals[i]);
    std::vector<ModeElement> elems;
    for (const auto& c : lw.classes)
      elems.push_back(velem_from_melem(s.vcfg, byclass.at(c), c));
    for (const auto& [word, coeff] : lw.terms)
      acc = acc + coeff * eval_word(s.vcfg, elems, word);
  };

  enum_partitions(g, beta, [&](const std::vector<CurveClass>& parts) {
    long long zmax = 0;
    if (zero_ok) {
      zmax = n + W * static_cast<long long>(parts.size());
      if (zmax < 0) zmax = 0;
      if (zmax > kMaxZero)
        throw InputError("decomposition enumeration too large: the window admits " +
                         std::to_string(zmax) + " zero-class pieces");
    }
    for (long long z = 0; z <= zmax; ++z) {
      if (parts.size() + static_cast<size_t>(z) < 2) continue;
      std::vector<PieceSpec> pieces;
      for (const auto& p : parts) {
        PieceSpec ps;
        ps.cls.d = 0;
        ps.cls.beta = p;
        ps.lo = -W;
        ps.hi = W;
        pieces.push_back(std::move(ps));
      }
      for (long long i = 0; i < z; ++i) {
        PieceSpec ps;
        ps.cls.d = 0;
        ps.cls.beta = zero_class_of(g.rank);
        ps.lo = 1;
        ps.hi = W;
        pieces.push_back(std::move(ps));
      }
      assign_ns(pieces, n, process);
    }
  });
  return acc;
}

namespace {

MElem point_value(const ScenarioData& s) {
  if (s.point_symbol.empty())
    throw ConfigError("the zero-class pair piece needs point_symbol in [vertex]");
  return melem_basis(s.vcfg.trunc_n, s.point_symbol, Rat(1));
}

struct PtParams {
  long long vanish = 0;
  long long tail_start = 0; // first n in the recursion regime
  Rat cutoff = 0;
  int order = 0;
};

PtParams pt_params(const ScenarioData& s, const CurveClass& beta) {
  auto it = s.ptinfo.find(beta);
  if (it == s.ptinfo.end())
    throw ConfigError("no [pt] parameters (vanish/cutoff) for class " + curve_str(beta));
  PtParams p;
  p.vanish = it->second.vanish;
  p.cutoff = it->second.cutoff;
  p.order = it->second.order;
  Rat ob = omega_deg(beta, s.vcfg.geom.omega);
  p.tail_start = to_ll(rat_floor(p.cutoff * ob)) + 1;
  return p;
}

} // namespace

MElem pt_from_decompositions(PtEngine& e, const CurveClass& beta, long long n) {
  const ScenarioData& s = *e.s;
  const auto& g = s.vcfg.geom;
  if (!is_effective(beta))
    throw InputError("pair invariants are indexed by effective classes; got " +
                     curve_str(beta));
  Rat ob = omega_deg(beta, g.omega);
  if (!(ob > 0)) throw InputError("omega degree must be positive for " + curve_str(beta));
  Rat mu = Rat(n) / ob;

  StabilityCond tau = stab_pair(g.omega, slope_posbig());
  StabilityCond taut = stab_pair(g.omega, slope_fin(mu, -1));
  bool zero_ok = dt_class_nonzero(s, zero_class_of(g.rank));
  MElem acc = melem_zero(s.vcfg.trunc_n);

  auto process = [&](const std::vector<KClass>& cls) {
    // cls[0] is the pair piece; sheaf values first, they prune hardest
    std::vector<std::optional<MElem>> vals(cls.size());
    int missing = -1;
    for (size_t i = 1; i < cls.size(); ++i) {
      auto v = dt_value_opt(s, cls[i].beta, cls[i].n);
      if (!v) {
        if (missing < 0) missing = static_cast<int>(i);
      } else if (v->is_zero()) {
        return;
      }
      vals[i] = std::move(v);
    }
    if (cls.size() > kMaxWord)
      throw InputError("decomposition word of length " + std::to_string(cls.size()) +
                       " is too long for exact rewriting coefficients");
    LieWordSum lw = coeff_Utilde(cls, tau, taut);
    if (lw.terms.empty()) return;
    if (missing >= 0)
      throw ConfigError("no dt entry for class " +
                        curve_str(cls[static_cast<size_t>(missing)].beta) +
                        ", required by a contributing decomposition of the pair "
                        "invariant at " + curve_str(beta) + ", n = " + std::to_string(n));
    MElem pv = is_zero_class(cls[0].beta) ? point_value(s)
                                          : pt_value(e, cls[0].beta, cls[0].n);
    if (pv.is_zero()) return;
    vals[0] = std::move(pv);
    std::map<KClass, MElem> byclass;
    for (size_t i = 0; i < cls.size(); ++i) byclass.emplace(cls[i], *vals[i]);
    std::vector<ModeElement> elems;
    for (const auto& c : lw.classes)
      elems.push_back(velem_from_melem(s.vcfg, byclass.at(c), c));
    for (const auto& [word, coeff] : lw.terms)
      acc = acc + coeff * eval_word(s.vcfg, elems, word);
  };

  std::vector<CurveClass> pair_cands;
  pair_cands.push_back(zero_class_of(g.rank));
  for (const auto& f : factors(beta, g))
    if (f != beta) pair_cands.push_back(f);

  for (const auto& bp : pair_cands) {
    bool bp_zero = is_zero_class(bp);
    long long pair_lo = 0, pair_hi = 0;
    if (!bp_zero) {
      pair_lo = pt_params(s, bp).vanish + 1;
      pair_hi = kNoCap;
    }
    CurveClass rest = beta;
    for (size_t i = 0; i < rest.size(); ++i) rest[i] -= bp[i];
    enum_partitions(g, rest, [&](const std::vector<CurveClass>& parts) {
      std::vector<long long> lbs;
      long long lbsum = 0;
      for (const auto& p : parts) {
        long long lb = to_ll(rat_ceil(mu * omega_deg(p, g.omega)));
        lbs.push_back(lb);
        lbsum += lb;
      }
      long long budget = n - pair_lo - lbsum; // room for zero-class pieces
      long long zmax = 0;
      if (zero_ok && budget > 0) {
        zmax = budget;
        if (zmax > kMaxZero)
          throw InputError("decomposition enumeration too large: " +
                           std::to_string(zmax) + " zero-class pieces possible");
      }
      for (long long z = 0; z <= zmax; ++z) {
        std::vector<PieceSpec> pieces;
        {
          PieceSpec ps;
          ps.cls.d = 1;
          ps.cls.beta = bp;
          ps.lo = pair_lo;
          ps.hi = pair_hi;
          pieces.push_back(std::move(ps));
        }
        for (size_t i = 0; i < parts.size(); ++i) {
          PieceSpec ps;
          ps.cls.d = 0;
          ps.cls.beta = parts[i];
          ps.lo = lbs[i];
          ps.hi = kNoCap;
          pieces.push_back(std::move(ps));
        }
        for (long long i = 0; i < z; ++i) {
          PieceSpec ps;
          ps.cls.d = 0;
          ps.cls.beta = zero_class_of(g.rank);
          ps.lo = 1;
          ps.hi = kNoCap;
          pieces.push_back(std::move(ps));
        }
        assign_ns(pieces, n, process);
      }
    });
  }
  return melem_zero(s.vcfg.trunc_n) - acc;
}

MElem pt_value(PtEngine& e, const CurveClass& beta, long long n) {
  const ScenarioData& s = *e.s;
  if (!is_effective(beta))
    throw InputError("pair invariants are indexed by effective classes; got " +
                     curve_str(beta));
  PtParams p = pt_params(s, beta);
  if (n <= p.vanish) return melem_zero(s.vcfg.trunc_n);
  if (n < p.tail_start) {
    auto it = s.middle.find(std::make_pair(beta, n));
    if (it == s.middle.end())
      throw ConfigError("recursion not applicable at " + curve_str(beta) + ", n = " +
                        std::to_string(n) + " (middle region needs an explicit value)");
    return it->second;
  }
  if (e.use_memo) {
    auto it = e.memo.find(std::make_pair(beta, n));
    if (it != e.memo.end()) return it->second;
  }
  MElem v = pt_from_decompositions(e, beta, n);
  if (e.use_memo) e.memo.emplace(std::make_pair(beta, n), v);
  return v;
}

std::string verify_recursion_identity(PtEngine& e, const CurveClass& beta, long long n) {
  const ScenarioData& s = *e.s;
  PtParams p = pt_params(s, beta);
  if (n < p.tail_start)
    throw ConfigError("verification needs the recursion regime: n >= " +
                      std::to_string(p.tail_start) + " for " + curve_str(beta));
  Rat ob = omega_deg(beta, s.vcfg.geom.omega);
  Rat mu = Rat(n) / ob;
  StabilityCond tau = stab_pair(s.vcfg.geom.omega, slope_posbig());
  StabilityCond taut = stab_pair(s.vcfg.geom.omega, slope_fin(mu, -1));
  KClass self{1, beta, n};
  LieWordSum lw = coeff_Utilde({self}, tau, taut);
  Word w0{0};
  if (lw.terms.size() != 1 || lw.terms.count(w0) == 0 || lw.terms.at(w0) != 1)
    throw CertifyError("singleton rewriting coefficient is not 1 at " +
                       kclass_str(self));
  MElem lhs = pt_value(e, beta, n);
  MElem rhs = pt_from_decompositions(e, beta, n);
  if (!(lhs == rhs))
    throw CertifyError("recursion identity fails at " + kclass_str(self) +
                       ": pair value " + melem_str(lhs) + " vs decomposition sum " +
                       melem_str(rhs));
  return "identity holds at " + kclass_str(self) +
         ": singleton coefficient 1, pair value cancels the decomposition sum (" +
         melem_str(lhs) + ")";
}

PtSeriesResult pt_series(PtEngine& e, const CurveClass& beta) {
  const ScenarioData& s = *e.s;
  PtParams p = pt_params(s, beta);
  auto it = s.ptinfo.find(beta);
  long long fit_start = p.tail_start;
  if (it->second.has_tail_from) fit_start = std::max(fit_start, it->second.tail_from);
  long long step = ample_deg(beta, s.vcfg.geom);
  if (step < 1)
    throw ConfigError("ample degree must be >= 1 for " + curve_str(beta));
  int N = s.vcfg.trunc_n;
  int order = p.order > 0 ? p.order : (N + 1) * (3 * (2 + N) + 1);

  PtSeriesResult out;
  out.beta = beta;
  out.vanish_bound = p.vanish;
  out.tail_start = fit_start;
  out.step = step;
  out.order = order;

  std::map<long long, MElem> samples;
  long long hi = fit_start + step * (order + 4);
  for (long long n = fit_start; n <= hi; ++n)
    samples.emplace(n, pt_value(e, beta, n));
  out.tail = solve_difference(order, step, samples);

  out.gf = qp_tail_to_gf(out.tail, fit_start);
  out.gf.trunc_n = s.vcfg.trunc_n;
  for (long long n = p.vanish + 1; n < fit_start; ++n) {
    MElem v = pt_value(e, beta, n);
    if (!v.is_zero()) out.gf.prefix.emplace(n, v);
  }
  out.poles = pole_locations(out.gf);
  return out;
}

} // namespace ptcalc
