#include "ptcalc/quasipoly.hpp"

#include <algorithm>
#include <numeric>

namespace ptcalc {

// ---- univariate quasi-polynomial --------------------------------------------

QuasiPoly qp_zero(int trunc_n) {
  QuasiPoly f;
  f.d = 1;
  f.trunc_n = trunc_n;
  f.polys.assign(1, mpoly_zero(1, trunc_n));
  return f;
}

QuasiPoly qp_constant(const MElem& v) {
  QuasiPoly f = qp_zero(v.trunc_n);
  mpoly_add_term(f.polys[0], {0}, v);
  return f;
}

MElem qp_eval(const QuasiPoly& f, long long n) {
  const MPoly& p = f.polys[static_cast<size_t>(posmod(n, f.d))];
  return upoly_eval(p, Rat(n));
}

bool qp_is_zero(const QuasiPoly& f) {
  for (const auto& p : f.polys)
    if (!p.is_zero()) return false;
  return true;
}

int qp_max_degree(const QuasiPoly& f) {
  int g = -1;
  for (const auto& p : f.polys) g = std::max(g, mpoly_total_degree(p));
  return g;
}

QuasiPoly qp_canon(const QuasiPoly& f) {
  for (long long dd = 1; dd < f.d; ++dd) {
    if (f.d % dd != 0) continue;
    bool ok = true;
    for (long long r = 0; r < f.d && ok; ++r)
      ok = (f.polys[static_cast<size_t>(r)] == f.polys[static_cast<size_t>(r % dd)]);
    if (ok) {
      QuasiPoly g;
      g.d = dd;
      g.trunc_n = f.trunc_n;
      g.polys.assign(f.polys.begin(), f.polys.begin() + dd);
      return g;
    }
  }
  return f;
}

QuasiPoly qp_add(const QuasiPoly& a, const QuasiPoly& b) {
  if (a.trunc_n != b.trunc_n) throw InputError("coefficient-ring mismatch in qp_add");
  long long D = std::lcm(a.d, b.d);
  QuasiPoly r;
  r.d = D;
  r.trunc_n = a.trunc_n;
  r.polys.reserve(static_cast<size_t>(D));
  for (long long i = 0; i < D; ++i)
    r.polys.push_back(a.polys[static_cast<size_t>(i % a.d)] +
                      b.polys[static_cast<size_t>(i % b.d)]);
  return qp_canon(r);
}

std::string qp_str(const QuasiPoly& f) {
  std::string out = "period " + std::to_string(f.d) + ":";
  for (long long r = 0; r < f.d; ++r)
    out += " [n==" + std::to_string(r) + "] " + mpoly_str(f.polys[static_cast<size_t>(r)]) + ";";
  return out;
}

// ---- multivariate quasi-polynomial ------------------------------------------

KQuasiPoly kqp_zero(int k, int trunc_n) {
  KQuasiPoly f;
  f.k = k;
  f.d = 1;
  f.trunc_n = trunc_n;
  return f;
}

MElem kqp_eval(const KQuasiPoly& f, const std::vector<long long>& x) {
  if (static_cast<int>(x.size()) != f.k) throw InputError("evaluation arity mismatch");
  std::vector<long long> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = posmod(x[i], f.d);
  auto it = f.polys.find(r);
  if (it == f.polys.end()) return melem_zero(f.trunc_n);
  std::vector<Rat> xr;
  xr.reserve(x.size());
  for (auto v : x) xr.emplace_back(v);
  return mpoly_eval(it->second, xr);
}

bool kqp_is_zero(const KQuasiPoly& f) {
  for (const auto& [r, p] : f.polys)
    if (!p.is_zero()) return false;
  return true;
}

KQuasiPoly kqp_add(const KQuasiPoly& a, const KQuasiPoly& b) {
  if (a.k != b.k || a.trunc_n != b.trunc_n)
    throw InputError("shape mismatch in kqp_add");
  long long D = std::lcm(a.d, b.d);
  // guard against a silly residue-grid explosion
  double grid = 1;
  for (int i = 0; i < a.k; ++i) grid *= static_cast<double>(D);
  if (grid > 2e6) throw InputError("residue grid too large in kqp_add");
  KQuasiPoly r;
  r.k = a.k;
  r.d = D;
  r.trunc_n = a.trunc_n;
  std::vector<long long> res(static_cast<size_t>(a.k), 0);
  while (true) {
    std::vector<long long> ra(res), rb(res);
    for (auto& v : ra) v %= a.d;
    for (auto& v : rb) v %= b.d;
    auto ia = a.polys.find(ra);
    auto ib = b.polys.find(rb);
    MPoly sum = mpoly_zero(a.k, a.trunc_n);
    if (ia != a.polys.end()) sum = sum + ia->second;
    if (ib != b.polys.end()) sum = sum + ib->second;
    if (!sum.is_zero()) r.polys.emplace(res, sum);
    // odometer over residue grid
    size_t i = 0;
    for (; i < res.size(); ++i) {
      if (res[i] + 1 < D) { ++res[i]; break; }
      res[i] = 0;
    }
    if (i == res.size()) break;
  }
  return r;
}

// ---- chambers ----------------------------------------------------------------

Constraint make_con(const std::vector<Rat>& C, Rel rel, const Rat& D) {
  Constraint c;
  c.C = C;
  c.rel = rel;
  c.D = D;
  return c;
}

bool chamber_contains(const Chamber& q, const std::vector<long long>& x) {
  if (static_cast<int>(x.size()) != q.k) throw InputError("point arity mismatch");
  for (const auto& c : q.cons) {
    Rat lhs = 0;
    for (size_t i = 0; i < c.C.size(); ++i) lhs += c.C[i] * Rat(x[i]);
    bool ok = false;
    switch (c.rel) {
      case Rel::LT: ok = lhs < c.D; break;
      case Rel::LE: ok = lhs <= c.D; break;
      case Rel::EQ: ok = lhs == c.D; break;
      case Rel::GE: ok = lhs >= c.D; break;
      case Rel::GT: ok = lhs > c.D; break;
    }
    if (!ok) return false;
  }
  return true;
}

std::string chamber_str(const Chamber& q) {
  std::string out = "{";
  for (size_t ci = 0; ci < q.cons.size(); ++ci) {
    if (ci) out += ", ";
    const auto& c = q.cons[ci];
    bool first = true;
    for (size_t i = 0; i < c.C.size(); ++i) {
      if (c.C[i] == 0) continue;
      if (!first) out += " + ";
      out += rat_str(c.C[i]) + "*x" + std::to_string(i + 1);
      first = false;
    }
    if (first) out += "0";
    switch (c.rel) {
      case Rel::LT: out += " < "; break;
      case Rel::LE: out += " <= "; break;
      case Rel::EQ: out += " == "; break;
      case Rel::GE: out += " >= "; break;
      case Rel::GT: out += " > "; break;
    }
    out += rat_str(c.D);
  }
  return out + "}";
}

namespace {

// one-sided <= constraint with strictness, used by the propagation engine
struct LeqCon {
  std::vector<Rat> C;
  Rat D;
  bool strict = false;
};

std::vector<LeqCon> to_leq_system(const std::vector<Constraint>& cons, bool homogeneous) {
  std::vector<LeqCon> out;
  for (const auto& c : cons) {
    Rat D = homogeneous ? Rat(0) : c.D;
    auto push = [&](bool negate, bool strict) {
      LeqCon l;
      l.C = c.C;
      if (negate)
        for (auto& v : l.C) v = -v;
      l.D = negate ? -D : D;
      l.strict = strict;
      out.push_back(std::move(l));
    };
    switch (c.rel) {
      case Rel::LT: push(false, !homogeneous); break; // recession cone relaxes strictness
      case Rel::LE: push(false, false); break;
      case Rel::EQ: push(false, false); push(true, false); break;
      case Rel::GE: push(true, false); break;
      case Rel::GT: push(true, !homogeneous); break;
    }
  }
  return out;
}

struct Bound {
  bool has = false;
  Rat v = 0;
};

// integer-aware interval propagation on a <=-system; returns false if a
// contradiction (provable emptiness over Z) was found
bool propagate_box(const std::vector<LeqCon>& sys, int k, std::vector<Bound>& lo,
                   std::vector<Bound>& hi, bool integral) {
  lo.assign(static_cast<size_t>(k), Bound{});
  hi.assign(static_cast<size_t>(k), Bound{});
  bool changed = true;
  int rounds = 0;
  while (changed && rounds < 256) {
    changed = false;
    ++rounds;
    for (const auto& c : sys) {
      // constant constraints: 0 <= D check
      bool allzero = true;
      for (const auto& v : c.C)
        if (v != 0) { allzero = false; break; }
      if (allzero) {
        if (c.strict ? !(Rat(0) < c.D) : !(Rat(0) <= c.D)) return false;
        continue;
      }
      for (int j = 0; j < k; ++j) {
        Rat cj = c.C[static_cast<size_t>(j)];
        if (cj == 0) continue;
        // rest = min over the box of sum_{i != j} C_i x_i
        Rat rest = 0;
        bool restok = true;
        for (int i = 0; i < k && restok; ++i) {
          if (i == j) continue;
          Rat ci = c.C[static_cast<size_t>(i)];
          if (ci == 0) continue;
          const Bound& b = (ci > 0) ? lo[static_cast<size_t>(i)] : hi[static_cast<size_t>(i)];
          if (!b.has) restok = false;
          else rest += ci * b.v;
        }
        if (!restok) continue;
        Rat bound = (c.D - rest) / cj;
        if (cj > 0) {
          // x_j <= bound (strict if c.strict)
          Rat nb = bound;
          if (integral) {
            Int f = rat_floor(bound);
            if (c.strict && Rat(f) == bound) f -= 1;
            nb = Rat(f);
          } else if (c.strict) {
            // keep the closed relaxation; membership filters handle strictness
          }
          if (!hi[static_cast<size_t>(j)].has || nb < hi[static_cast<size_t>(j)].v) {
            hi[static_cast<size_t>(j)].has = true;
            hi[static_cast<size_t>(j)].v = nb;
            changed = true;
          }
        } else {
          // x_j >= bound
          Rat nb = bound;
          if (integral) {
            Int f = rat_ceil(bound);
            if (c.strict && Rat(f) == bound) f += 1;
            nb = Rat(f);
          }
          if (!lo[static_cast<size_t>(j)].has || nb > lo[static_cast<size_t>(j)].v) {
            lo[static_cast<size_t>(j)].has = true;
            lo[static_cast<size_t>(j)].v = nb;
            changed = true;
          }
        }
        if (lo[static_cast<size_t>(j)].has && hi[static_cast<size_t>(j)].has &&
            lo[static_cast<size_t>(j)].v > hi[static_cast<size_t>(j)].v)
          return false;
      }
    }
  }
  return true;
}

Chamber with_slice(const Chamber& q, long long n) {
  Chamber r = q;
  Constraint s;
  s.C.assign(static_cast<size_t>(q.k), Rat(1));
  s.rel = Rel::EQ;
  s.D = Rat(n);
  r.cons.push_back(std::move(s));
  return r;
}

} // namespace

bool chamber_provably_empty(const Chamber& q) {
  auto sys = to_leq_system(q.cons, false);
  std::vector<Bound> lo, hi;
  return !propagate_box(sys, q.k, lo, hi, true);
}

bool slices_provably_bounded(const Chamber& q) {
  // recession system: relaxed homogeneous constraints plus sum x_i = 0
  Chamber rec = q;
  Constraint s;
  s.C.assign(static_cast<size_t>(q.k), Rat(1));
  s.rel = Rel::EQ;
  s.D = 0;
  rec.cons.push_back(std::move(s));
  auto sys = to_leq_system(rec.cons, true);
  std::vector<Bound> lo, hi;
  if (!propagate_box(sys, q.k, lo, hi, false))
    return true; // empty recession cone certainly pins slices
  for (int i = 0; i < q.k; ++i) {
    if (!lo[static_cast<size_t>(i)].has || lo[static_cast<size_t>(i)].v != 0) return false;
    if (!hi[static_cast<size_t>(i)].has || hi[static_cast<size_t>(i)].v != 0) return false;
  }
  return true;
}

namespace {

// signed row over (x_1..x_k, n): rows of the slice-elimination system
struct FmRow {
  std::vector<Rat> C; // size k (x coefficients)
  Rat N = 0;          // n coefficient
  Rat D = 0;          // right-hand side:  C.x + N*n <= D  (strictness irrelevant here)
};

} // namespace

long long slice_period_bound(const Chamber& q) {
  // Build C.x + N*n <= D rows from the chamber plus the slice equality
  // sum x = n, then Fourier-Motzkin eliminate the x variables, collecting the
  // denominator of every implied single-variable slope bound along the way.
  std::vector<FmRow> rows;
  auto add_row = [&](const std::vector<Rat>& C, const Rat& N, const Rat& D) {
    FmRow r;
    r.C = C;
    r.N = N;
    r.D = D;
    rows.push_back(std::move(r));
  };
  for (const auto& c : q.cons) {
    std::vector<Rat> neg = c.C;
    for (auto& v : neg) v = -v;
    switch (c.rel) {
      case Rel::LT:
      case Rel::LE: add_row(c.C, 0, c.D); break;
      case Rel::GT:
      case Rel::GE: add_row(neg, 0, -c.D); break;
      case Rel::EQ: add_row(c.C, 0, c.D); add_row(neg, 0, -c.D); break;
    }
  }
  {
    std::vector<Rat> ones(static_cast<size_t>(q.k), Rat(1));
    std::vector<Rat> negones(static_cast<size_t>(q.k), Rat(-1));
    add_row(ones, Rat(-1), 0);
    add_row(negones, Rat(1), 0);
  }

  Int period = 1;
  auto collect = [&](const std::vector<FmRow>& rs) {
    for (const auto& r : rs)
      for (int j = 0; j < q.k; ++j) {
        Rat a = r.C[static_cast<size_t>(j)];
        if (a == 0) continue;
        Rat slope = r.N / a;
        period = boost::multiprecision::lcm(period, rat_den(slope));
      }
  };
  collect(rows);

  for (int v = 0; v < q.k; ++v) {
    std::vector<FmRow> uppers, lowers, rest;
    for (const auto& r : rows) {
      Rat a = r.C[static_cast<size_t>(v)];
      if (a > 0) uppers.push_back(r);
      else if (a < 0) lowers.push_back(r);
      else rest.push_back(r);
    }
    // pairwise combinations cancel variable v
    if (uppers.size() * lowers.size() > 4096)
      throw InputError("constraint system too large for slice elimination");
    for (const auto& u : uppers)
      for (const auto& l : lowers) {
        Rat au = u.C[static_cast<size_t>(v)];
        Rat al = -l.C[static_cast<size_t>(v)];
        FmRow nr;
        nr.C.resize(static_cast<size_t>(q.k));
        for (int j = 0; j < q.k; ++j)
          nr.C[static_cast<size_t>(j)] =
              u.C[static_cast<size_t>(j)] * al + l.C[static_cast<size_t>(j)] * au;
        nr.N = u.N * al + l.N * au;
        nr.D = u.D * al + l.D * au;
        rest.push_back(std::move(nr));
      }
    rows = std::move(rest);
    collect(rows);
  }
  long long p = to_ll(period);
  if (p <= 0) p = 1;
  return p;
}

// ---- piecewise quasi-polynomial -----------------------------------------------

MElem pqp_eval(const PiecewiseQP& f, const std::vector<long long>& x) {
  const PqpPiece* hit = nullptr;
  for (const auto& p : f.pieces) {
    if (!chamber_contains(p.chamber, x)) continue;
    if (hit) throw InputError("chamber decomposition overlaps at a lattice point");
    hit = &p;
  }
  if (!hit) throw InputError("chamber decomposition misses a lattice point");
  return kqp_eval(hit->qp, x);
}

PiecewiseQP pqp_add(const PiecewiseQP& a, const PiecewiseQP& b) {
  if (a.k != b.k || a.trunc_n != b.trunc_n)
    throw InputError("shape mismatch in pqp_add");
  PiecewiseQP r;
  r.k = a.k;
  r.trunc_n = a.trunc_n;
  for (const auto& pa : a.pieces)
    for (const auto& pb : b.pieces) {
      Chamber c;
      c.k = a.k;
      c.cons = pa.chamber.cons;
      c.cons.insert(c.cons.end(), pb.chamber.cons.begin(), pb.chamber.cons.end());
      if (chamber_provably_empty(c)) continue;
      PqpPiece piece;
      piece.chamber = std::move(c);
      piece.qp = kqp_add(pa.qp, pb.qp);
      r.pieces.push_back(std::move(piece));
    }
  return r;
}

// ---- weighted lattice sums -----------------------------------------------------

MElem ehrhart_sum(const Chamber& q, const MPoly& w, long long n) {
  if (w.k != q.k) throw InputError("weight arity mismatch in lattice sum");
  if (!slices_provably_bounded(q))
    throw ConfigError("lattice sum over a chamber with unbounded slices: " +
                      chamber_str(q));
  Chamber s = with_slice(q, n);
  auto sys = to_leq_system(s.cons, false);
  std::vector<Bound> lo, hi;
  MElem acc = melem_zero(w.trunc_n);
  if (!propagate_box(sys, q.k, lo, hi, true)) return acc; // provably empty slice
  for (int i = 0; i < q.k; ++i)
    if (!lo[static_cast<size_t>(i)].has || !hi[static_cast<size_t>(i)].has)
      throw ConfigError("interval propagation failed to bound a slice of " +
                        chamber_str(q));
  // enumerate the first k-1 coordinates; the slice equality fixes the last
  std::vector<long long> x(static_cast<size_t>(q.k), 0);
  std::vector<long long> blo(static_cast<size_t>(q.k)), bhi(static_cast<size_t>(q.k));
  for (int i = 0; i < q.k; ++i) {
    blo[static_cast<size_t>(i)] = to_ll(rat_ceil(lo[static_cast<size_t>(i)].v));
    bhi[static_cast<size_t>(i)] = to_ll(rat_floor(hi[static_cast<size_t>(i)].v));
  }
  std::vector<Rat> xr(static_cast<size_t>(q.k));
  auto rec = [&](auto&& self, int idx, long long partial) -> void {
    if (idx == q.k - 1) {
      long long last = n - partial;
      if (last < blo[static_cast<size_t>(idx)] || last > bhi[static_cast<size_t>(idx)]) return;
      x[static_cast<size_t>(idx)] = last;
      if (!chamber_contains(q, x)) return;
      for (int i = 0; i < q.k; ++i) xr[static_cast<size_t>(i)] = Rat(x[static_cast<size_t>(i)]);
      acc = acc + mpoly_eval(w, xr);
      return;
    }
    for (long long v = blo[static_cast<size_t>(idx)]; v <= bhi[static_cast<size_t>(idx)]; ++v) {
      x[static_cast<size_t>(idx)] = v;
      self(self, idx + 1, partial + v);
    }
  };
  if (q.k == 1) {
    // only the slice point itself
    x[0] = n;
    if (x[0] >= blo[0] && x[0] <= bhi[0] && chamber_contains(q, x))
      acc = acc + mpoly_eval(w, {Rat(n)});
  } else {
    rec(rec, 0, 0);
  }
  return acc;
}

namespace {

// interpolate through the points (ns[i], vals[i]) and return the polynomial,
// or nothing if there are not enough points
std::optional<MPoly> fit_points(const std::vector<long long>& ns,
                                const std::vector<MElem>& vals, int trunc_n) {
  if (ns.empty()) return std::nullopt;
  std::vector<Rat> xs;
  xs.reserve(ns.size());
  for (auto n : ns) xs.emplace_back(n);
  return upoly_interpolate(xs, vals, trunc_n);
}

} // namespace

PiecewiseQP certify_pqp(const Chamber& q, const MPoly& w, long long lo, long long hi) {
  if (hi < lo) throw InputError("empty sampling range in certify_pqp");
  int trunc_n = w.trunc_n;
  // degree bound: slice dimension (k-1) plus the weight degree
  int gdeg = std::max(0, mpoly_total_degree(w)) + std::max(0, q.k - 1);
  long long period_bound = slice_period_bound(q);

  std::map<long long, MElem> g;
  for (long long n = lo; n <= hi; ++n) g.emplace(n, ehrhart_sum(q, w, n));

  std::vector<long long> divisors;
  for (long long d = 1; d <= period_bound; ++d)
    if (period_bound % d == 0) divisors.push_back(d);

  const long long holdout = 2;

  // Fit a quasi-polynomial of period d against the top (dir=+1) or bottom
  // (dir=-1) of the sample range; returns the fitted qp and the last verified
  // boundary (inclusive), scanning inward until the first mismatch.
  auto try_tail = [&](long long d, int dir, QuasiPoly& out, long long& boundary) {
    long long needed = d * (gdeg + 1 + holdout);
    if (hi - lo + 1 < needed + d) return false;
    out.d = d;
    out.trunc_n = trunc_n;
    out.polys.assign(static_cast<size_t>(d), mpoly_zero(1, trunc_n));
    for (long long r = 0; r < d; ++r) {
      // collect the extreme points of this residue class
      std::vector<long long> ns;
      long long start = (dir > 0) ? hi : lo;
      for (long long n = start; n >= lo && n <= hi; n -= dir * 1) {
        if (posmod(n, d) == r) ns.push_back(n);
        if (ns.size() >= static_cast<size_t>(gdeg + 1 + holdout)) break;
      }
      if (ns.size() < static_cast<size_t>(gdeg + 1 + holdout)) return false;
      // hold out the extreme few, fit on the rest
      std::vector<long long> fit_ns(ns.begin() + holdout, ns.end());
      std::vector<MElem> fit_vs;
      for (auto n : fit_ns) fit_vs.push_back(g.at(n));
      auto poly = fit_points(fit_ns, fit_vs, trunc_n);
      if (!poly) return false;
      out.polys[static_cast<size_t>(r)] = *poly;
    }
    // scan inward from the extreme end, verifying every sample (held-out
    // points included) until the first failure
    long long last_ok = (dir > 0) ? hi + 1 : lo - 1;
    for (long long n = (dir > 0) ? hi : lo; n >= lo && n <= hi; n -= dir) {
      if (qp_eval(out, n) != g.at(n)) break;
      last_ok = n;
    }
    if (last_ok < lo || last_ok > hi) return false;
    // require the verified stretch to cover the fitted window
    if (dir > 0 && hi - last_ok + 1 < needed) return false;
    if (dir < 0 && last_ok - lo + 1 < needed) return false;
    boundary = last_ok;
    out = [&] {
      QuasiPoly c = qp_canon(out);
      return c;
    }();
    return true;
  };

  QuasiPoly hi_qp, lo_qp;
  long long t_hi = 0, t_lo = 0;
  bool have_hi = false;
  for (long long d : divisors)
    if (try_tail(d, +1, hi_qp, t_hi)) { have_hi = true; break; }
  if (!have_hi)
    throw CertifyError("no quasi-polynomial high tail of period dividing " +
                       std::to_string(period_bound) + " fits the samples on [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");

  bool have_lo = false;
  if (t_hi > lo) {
    // fit the low tail against [lo, t_hi - 1] only
    long long hi2 = t_hi - 1;
    auto try_low = [&](long long d) {
      long long needed = d * (gdeg + 1 + holdout);
      if (hi2 - lo + 1 < needed) return false;
      QuasiPoly cand;
      cand.d = d;
      cand.trunc_n = trunc_n;
      cand.polys.assign(static_cast<size_t>(d), mpoly_zero(1, trunc_n));
      for (long long r = 0; r < d; ++r) {
        std::vector<long long> ns;
        for (long long n = lo; n <= hi2; ++n) {
          if (posmod(n, d) == r) ns.push_back(n);
          if (ns.size() >= static_cast<size_t>(gdeg + 1 + holdout)) break;
        }
        if (ns.size() < static_cast<size_t>(gdeg + 1 + holdout)) return false;
        std::vector<long long> fit_ns(ns.begin() + holdout, ns.end());
        std::vector<MElem> fit_vs;
        for (auto n : fit_ns) fit_vs.push_back(g.at(n));
        auto poly = fit_points(fit_ns, fit_vs, trunc_n);
        if (!poly) return false;
        cand.polys[static_cast<size_t>(r)] = *poly;
      }
      long long last_ok = lo - 1;
      for (long long n = lo; n <= hi2; ++n) {
        if (qp_eval(cand, n) != g.at(n)) break;
        last_ok = n;
      }
      if (last_ok < lo) return false;
      if (last_ok - lo + 1 < needed) return false;
      lo_qp = qp_canon(cand);
      t_lo = last_ok;
      return true;
    };
    for (long long d : divisors)
      if (try_low(d)) { have_lo = true; break; }
    if (!have_lo)
      throw CertifyError("no quasi-polynomial low tail fits the samples below n=" +
                         std::to_string(t_hi));
  } else {
    // the high tail reached the bottom of the range; emit it as the low tail too
    lo_qp = hi_qp;
    t_lo = t_hi - 1;
    have_lo = true;
  }

  auto univ = [&](const QuasiPoly& f) {
    KQuasiPoly kq;
    kq.k = 1;
    kq.d = f.d;
    kq.trunc_n = trunc_n;
    for (long long r = 0; r < f.d; ++r)
      if (!f.polys[static_cast<size_t>(r)].is_zero())
        kq.polys.emplace(std::vector<long long>{r}, f.polys[static_cast<size_t>(r)]);
    return kq;
  };

  PiecewiseQP out;
  out.k = 1;
  out.trunc_n = trunc_n;
  { // low tail chamber n <= t_lo
    PqpPiece piece;
    piece.chamber.k = 1;
    piece.chamber.cons.push_back(make_con({Rat(1)}, Rel::LE, Rat(t_lo)));
    piece.qp = univ(lo_qp);
    out.pieces.push_back(std::move(piece));
  }
  for (long long n = t_lo + 1; n < t_hi; ++n) {
    PqpPiece piece;
    piece.chamber.k = 1;
    piece.chamber.cons.push_back(make_con({Rat(1)}, Rel::EQ, Rat(n)));
    piece.qp = univ(qp_constant(g.at(n)));
    out.pieces.push_back(std::move(piece));
  }
  { // high tail chamber n >= t_hi
    PqpPiece piece;
    piece.chamber.k = 1;
    piece.chamber.cons.push_back(make_con({Rat(1)}, Rel::GE, Rat(t_hi)));
    piece.qp = univ(hi_qp);
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

PiecewiseQP convolve_fiberwise(const PiecewiseQP& f) {
  PiecewiseQP acc;
  acc.k = 1;
  acc.trunc_n = f.trunc_n;
  { // start from the everywhere-zero decomposition
    PqpPiece z;
    z.chamber.k = 1;
    z.qp = kqp_zero(1, f.trunc_n);
    acc.pieces.push_back(std::move(z));
  }

  for (const auto& piece : f.pieces) {
    if (kqp_is_zero(piece.qp)) continue;
    if (!slices_provably_bounded(piece.chamber))
      throw ConfigError("convolution input carries a nonzero quasi-polynomial on a "
                        "chamber with unbounded slices: " + chamber_str(piece.chamber));
    long long d = piece.qp.d;
    for (const auto& [res, poly] : piece.qp.polys) {
      if (poly.is_zero()) continue;
      long long s = 0; // residue total: the mapped sub-lattice hits n == s (mod d)
      for (auto r : res) s += r;

      // chamber in m-coordinates (x = res + d*m):  (d C) . m  rel  D - C.res
      Chamber qm;
      qm.k = f.k;
      for (const auto& c : piece.chamber.cons) {
        Constraint nc;
        nc.rel = c.rel;
        nc.C.resize(c.C.size());
        Rat shift = 0;
        for (size_t i = 0; i < c.C.size(); ++i) {
          nc.C[i] = Rat(d) * c.C[i];
          shift += c.C[i] * Rat(res[i]);
        }
        nc.D = c.D - shift;
        qm.cons.push_back(std::move(nc));
      }

      std::vector<Rat> offs;
      offs.reserve(res.size());
      for (auto r : res) offs.emplace_back(r);
      MPoly wm = mpoly_sub_affine_diag(poly, offs, Rat(d));

      // internal sampling window for the t-certification
      long long pb = slice_period_bound(qm);
      int gd = std::max(0, mpoly_total_degree(wm)) + std::max(0, f.k - 1);
      long long off_sum = 0;
      for (const auto& c : qm.cons) {
        Int a = rat_ceil(c.D < 0 ? -c.D : c.D);
        long long al = to_ll(a);
        off_sum += std::min(al, 50ll);
      }
      long long len = pb * (gd + 6) + 48 + 4 * off_sum;
      if (len > 1500) len = 1500;
      PiecewiseQP in_t = certify_pqp(qm, wm, -len, len);

      // map each t-piece back to n = s + d*t, keeping interval-shaped
      // chambers so the n-line is covered without gaps
      PiecewiseQP mapped;
      mapped.k = 1;
      mapped.trunc_n = f.trunc_n;
      for (const auto& tp : in_t.pieces) {
        PqpPiece np;
        np.chamber.k = 1;
        for (const auto& c : tp.chamber.cons) {
          // the t-decomposition is our own canonical one: every constraint is
          // 1*t rel a, and closed lower bounds / singletons would leave real
          // gaps once the line is rescaled to n, so rewrite them half-open
          if (c.C.size() != 1 || c.C[0] != 1)
            throw InputError("unexpected chamber shape in convolution mapping");
          // t rel a  ->  (1/d) n rel a + s/d
          Rat cn = Rat(1) / Rat(d);
          Rat Dn = c.D + Rat(s) / Rat(d);
          switch (c.rel) {
            case Rel::LT:
            case Rel::LE:
              np.chamber.cons.push_back(make_con({cn}, c.rel, Dn));
              break;
            case Rel::EQ: // {t == a} -> (a-1, a]
              np.chamber.cons.push_back(make_con({cn}, Rel::GT, Dn - 1));
              np.chamber.cons.push_back(make_con({cn}, Rel::LE, Dn));
              break;
            case Rel::GE: // {t >= a} -> (a-1, oo)
              np.chamber.cons.push_back(make_con({cn}, Rel::GT, Dn - 1));
              break;
            case Rel::GT:
              np.chamber.cons.push_back(make_con({cn}, Rel::GT, Dn));
              break;
          }
        }
        // quasi-polynomial in n: period d * e, nonzero only on n == s (mod d)
        KQuasiPoly kn;
        kn.k = 1;
        kn.d = d * tp.qp.d;
        kn.trunc_n = f.trunc_n;
        for (const auto& [tres, tpoly] : tp.qp.polys) {
          long long b = tres[0];
          // residues rho mod (d*e) with rho == s (mod d) and (rho-s)/d == b (mod e)
          long long rho = posmod(s + d * b, kn.d);
          MPoly pn = upoly_compose_affine(tpoly, Rat(-s) / Rat(d), Rat(1) / Rat(d));
          kn.polys.emplace(std::vector<long long>{rho}, pn);
        }
        np.qp = std::move(kn);
        mapped.pieces.push_back(std::move(np));
      }
      acc = pqp_add(acc, mapped);
    }
  }
  return acc;
}

// ---- difference equations -------------------------------------------------------

QuasiPoly solve_difference(int m, long long d, const std::map<long long, MElem>& samples) {
  if (m < 1) throw InputError("difference order must be >= 1");
  if (d < 1) throw InputError("difference step must be >= 1");
  if (samples.empty()) throw InputError("no samples for solve_difference");
  int trunc_n = samples.begin()->second.trunc_n;

  // binomial weights (-1)^i binom(m, i)
  std::vector<Rat> wbin;
  for (int i = 0; i <= m; ++i) {
    Rat w = Rat(binom_int(m, i));
    if (i % 2 == 1) w = -w;
    wbin.push_back(w);
  }

  // group by residue class mod d
  std::map<long long, std::vector<long long>> byres;
  for (const auto& [n, v] : samples) {
    if (v.trunc_n != trunc_n) throw InputError("mixed coefficient rings in samples");
    byres[posmod(n, d)].push_back(n);
  }

  QuasiPoly out;
  out.d = d;
  out.trunc_n = trunc_n;
  out.polys.assign(static_cast<size_t>(d), mpoly_zero(1, trunc_n));

  for (auto& [r, ns] : byres) {
    std::sort(ns.begin(), ns.end());
    for (size_t i = 0; i + 1 < ns.size(); ++i)
      if (ns[i + 1] - ns[i] != d)
        throw InputError("samples in residue class " + std::to_string(r) +
                         " are not consecutive steps of " + std::to_string(d));
    if (ns.size() < static_cast<size_t>(m))
      throw InputError("residue class " + std::to_string(r) + " has fewer than " +
                       std::to_string(m) + " samples");
    // annihilator on every complete window
    for (size_t i = 0; i + static_cast<size_t>(m) < ns.size(); ++i) {
      MElem acc = melem_zero(trunc_n);
      for (int j = 0; j <= m; ++j)
        acc = acc + wbin[static_cast<size_t>(j)] *
                        samples.at(ns[i + static_cast<size_t>(j)]);
      if (!acc.is_zero())
        throw CertifyError("sequence is not quasi-polynomial of order " +
                           std::to_string(m) + " and step " + std::to_string(d) +
                           ": difference check fails on the window starting at n=" +
                           std::to_string(ns[i]));
    }
    // interpolate through the first m points, then confirm on every sample
    std::vector<long long> fit_ns(ns.begin(), ns.begin() + m);
    std::vector<MElem> fit_vs;
    for (auto n : fit_ns) fit_vs.push_back(samples.at(n));
    auto poly = fit_points(fit_ns, fit_vs, trunc_n);
    for (auto n : ns)
      if (upoly_eval(*poly, Rat(n)) != samples.at(n))
        throw CertifyError("interpolant fails to reproduce the sample at n=" +
                           std::to_string(n));
    out.polys[static_cast<size_t>(r)] = *poly;
  }
  return qp_canon(out);
}

// ---- matrices over the coefficient ring -------------------------------------------

RMat rmat_identity(int n, int trunc_n) {
  RMat m;
  m.rows = m.cols = n;
  m.trunc_n = trunc_n;
  m.a.assign(static_cast<size_t>(n), std::vector<RElem>(static_cast<size_t>(n), relem_zero(trunc_n)));
  for (int i = 0; i < n; ++i) m.a[static_cast<size_t>(i)][static_cast<size_t>(i)] = relem_one(trunc_n);
  return m;
}

RMat rmat_mul(const RMat& x, const RMat& y) {
  if (x.cols != y.rows || x.trunc_n != y.trunc_n)
    throw InputError("matrix shape mismatch");
  RMat r;
  r.rows = x.rows;
  r.cols = y.cols;
  r.trunc_n = x.trunc_n;
  r.a.assign(static_cast<size_t>(r.rows),
             std::vector<RElem>(static_cast<size_t>(r.cols), relem_zero(x.trunc_n)));
  for (int i = 0; i < x.rows; ++i)
    for (int l = 0; l < x.cols; ++l) {
      if (x.a[static_cast<size_t>(i)][static_cast<size_t>(l)].is_zero()) continue;
      for (int j = 0; j < y.cols; ++j)
        r.a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            r.a[static_cast<size_t>(i)][static_cast<size_t>(j)] +
            x.a[static_cast<size_t>(i)][static_cast<size_t>(l)] *
                y.a[static_cast<size_t>(l)][static_cast<size_t>(j)];
    }
  return r;
}

RMat rmat_sub(const RMat& x, const RMat& y) {
  if (x.rows != y.rows || x.cols != y.cols || x.trunc_n != y.trunc_n)
    throw InputError("matrix shape mismatch");
  RMat r = x;
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      r.a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          x.a[static_cast<size_t>(i)][static_cast<size_t>(j)] -
          y.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return r;
}

bool rmat_is_zero(const RMat& x) {
  for (const auto& row : x.a)
    for (const auto& v : row)
      if (!v.is_zero()) return false;
  return true;
}

int nilpotency_order(const RMat& j, int cap) {
  if (j.rows != j.cols) throw InputError("nilpotency needs a square matrix");
  RMat delta = rmat_sub(rmat_identity(j.rows, j.trunc_n), j);
  RMat pw = delta;
  for (int m = 1; m <= cap; ++m) {
    if (rmat_is_zero(pw)) return m;
    pw = rmat_mul(pw, delta);
  }
  if (rmat_is_zero(pw)) return cap + 1;
  throw CertifyError("shift operator is not unipotent: (id - J)^" +
                     std::to_string(cap + 1) + " is still nonzero");
}

namespace {

std::vector<RElem> melem_coords(const MElem& v, const std::vector<std::string>& basis) {
  std::vector<RElem> out(basis.size(), relem_zero(v.trunc_n));
  MElem copy = v;
  for (size_t i = 0; i < basis.size(); ++i) {
    auto it = copy.m.find(basis[i]);
    if (it != copy.m.end()) {
      out[i] = it->second;
      copy.m.erase(it);
    }
  }
  if (!copy.m.empty())
    throw InputError("module value uses symbol '" + copy.m.begin()->first +
                     "' outside the shift basis");
  return out;
}

MElem coords_melem(const std::vector<RElem>& v, const std::vector<std::string>& basis,
                   int trunc_n) {
  MElem out(trunc_n);
  for (size_t i = 0; i < basis.size(); ++i) melem_add_to(out, basis[i], v[i]);
  return out;
}

std::vector<RElem> rmat_apply(const RMat& m, const std::vector<RElem>& v) {
  std::vector<RElem> out(static_cast<size_t>(m.rows), relem_zero(m.trunc_n));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      out[static_cast<size_t>(i)] =
          out[static_cast<size_t>(i)] +
          m.a[static_cast<size_t>(i)][static_cast<size_t>(j)] * v[static_cast<size_t>(j)];
  return out;
}

} // namespace

QuasiPoly shift_to_qp(const RMat& j, const std::vector<std::string>& basis,
                      long long d, long long n0, const std::vector<MElem>& f0,
                      long long check_lo, long long check_hi) {
  if (d < 1) throw InputError("shift step must be >= 1");
  if (f0.size() != static_cast<size_t>(d))
    throw InputError("initial block must hold exactly d values");
  if (j.rows != j.cols || j.rows != static_cast<int>(basis.size()))
    throw InputError("shift matrix must be square on the chosen basis");
  int mord = nilpotency_order(j, 256);
  RMat delta = rmat_sub(j, rmat_identity(j.rows, j.trunc_n)); // J - id

  // binom(t, i) as polynomials in t
  std::vector<RatPoly> tb;
  tb.push_back(ratpoly_const(1, Rat(1)));
  for (int i = 1; i < mord; ++i) {
    RatPoly prev = tb.back();
    RatPoly next;
    next.k = 1;
    // next = prev * (t - (i-1)) / i
    for (const auto& [e, co] : prev.c) {
      ratpoly_add_term(next, {e[0] + 1}, co / Rat(i));
      ratpoly_add_term(next, {e[0]}, -Rat(i - 1) * co / Rat(i));
    }
    tb.push_back(std::move(next));
  }

  QuasiPoly out;
  out.d = d;
  out.trunc_n = j.trunc_n;
  out.polys.assign(static_cast<size_t>(d), mpoly_zero(1, j.trunc_n));
  for (long long r = 0; r < d; ++r) {
    auto v = melem_coords(f0[static_cast<size_t>(r)], basis);
    // poly in t: sum_i binom(t, i) (J - id)^i f0_r
    MPoly pt(1, j.trunc_n);
    std::vector<RElem> cur = v;
    for (int i = 0; i < mord; ++i) {
      MElem term = coords_melem(cur, basis, j.trunc_n);
      for (const auto& [e, co] : tb[static_cast<size_t>(i)].c)
        mpoly_add_term(pt, e, co * term);
      cur = rmat_apply(delta, cur);
    }
    // substitute t = (n - n0 - r) / d
    MPoly pn = upoly_compose_affine(pt, Rat(-(n0 + r)) / Rat(d), Rat(1) / Rat(d));
    out.polys[static_cast<size_t>(posmod(n0 + r, d))] = pn;
  }

  // confirm against direct propagation on the requested range (from n0 up)
  long long from = std::max(check_lo, n0);
  std::vector<std::vector<RElem>> state;
  for (long long r = 0; r < d; ++r)
    state.push_back(melem_coords(f0[static_cast<size_t>(r)], basis));
  for (long long base = n0; base + d - 1 <= check_hi; base += d) {
    for (long long r = 0; r < d; ++r) {
      long long n = base + r;
      if (n < from) continue;
      MElem direct = coords_melem(state[static_cast<size_t>(r)], basis, j.trunc_n);
      if (qp_eval(out, n) != direct)
        throw CertifyError("shift propagation mismatch at n=" + std::to_string(n));
    }
    for (long long r = 0; r < d; ++r)
      state[static_cast<size_t>(r)] = rmat_apply(j, state[static_cast<size_t>(r)]);
  }
  return qp_canon(out);
}

} // namespace ptcalc
