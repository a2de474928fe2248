// Acceptance gate: one self-contained check per shipped guarantee, one
// pass/fail line each, nonzero exit if anything fails.  Budgets are pinned
// next to each check; every comparison is exact rational equality.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ptcalc/ratgen.hpp"
#include "ptcalc/report.hpp"
#include "ptcalc/scenario.hpp"
#include "ptcalc/wallcross.hpp"

using namespace ptcalc;
using namespace ptoracle;

namespace {

int g_failures = 0;

// run one criterion, time it, print the line.  budget_s == 0 means untimed.
void criterion(int id, const std::string& name, double budget_s,
               const std::function<std::string()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok && budget_s > 0 && secs > budget_s) {
    ok = false;
    detail += " [budget exceeded]";
  }
  std::ostringstream line;
  line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " -- "
       << detail << " (" << std::fixed << std::setprecision(2) << secs << "s";
  if (budget_s > 0)
    line << ", budget " << std::setprecision(0) << budget_s << "s";
  line << ")";
  std::cout << line.str() << "\n";
  if (!ok) ++g_failures;
}

std::mt19937_64 g_rng(271828183);

long long ri(long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(g_rng);
}

Rat rq(long long maxnum, long long maxden) {
  return Rat(ri(-maxnum, maxnum), ri(1, maxden));
}

void expect(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

// ---- criteria 1-3: wall-crossing coefficients ---------------------------------

std::string crit1() {
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rat> omega = {Rat(ri(1, 4)), Rat(ri(1, 4))};
    CurveClass beta = {ri(0, 3), ri(0, 3)};
    if (!is_effective(beta)) beta[0] = 1;
    long long n = ri(-6, 6);
    Rat cp = rq(3, 3), cm = rq(3, 3);
    if (cp == cm) cp += 1;
    StabilityCond tau = stab_pair(omega, slope_fin(cp, 0));
    StabilityCond taut = stab_pair(omega, slope_fin(cm, 0));
    KClass pairc{1, beta, n};
    LieWordSum lw = coeff_Utilde({pairc}, tau, taut);
    expect(lw.classes == std::vector<KClass>{pairc}, "singleton class list wrong");
    expect(lw.terms.size() == 1, "singleton term count wrong");
    expect(lw.terms.count(Word{0}) == 1 && lw.terms.at(Word{0}) == Rat(1),
           "singleton coefficient is not 1");
  }
  return "20 randomized pair-stability configs, coefficient exactly 1";
}

// rank-2 pool with exactly three interior slope walls between the two
// polarizations; filled in by crit2_3 and reused by its wall count check
struct WallPool {
  std::vector<Rat> omega = {Rat(1), Rat(1)};
  std::vector<Rat> omega_alt = {Rat(2), Rat(1)};
  std::vector<KClass> classes = {
      KClass{0, {1, 0}, 3}, KClass{0, {1, 0}, 4}, KClass{0, {1, 0}, 5},
      KClass{0, {0, 1}, 2}, KClass{0, {0, 1}, 3}};
};

size_t count_interior_walls(const WallPool& p) {
  // wall between a and b: n_a * (omega(t).beta_b) = n_b * (omega(t).beta_a),
  // linear in t along omega(t) = omega + t*(omega_alt - omega)
  std::set<Rat> walls;
  for (size_t i = 0; i < p.classes.size(); ++i)
    for (size_t j = i + 1; j < p.classes.size(); ++j) {
      const KClass& a = p.classes[i];
      const KClass& b = p.classes[j];
      Rat c0 = 0, c1 = 0;
      for (size_t r = 0; r < 2; ++r) {
        Rat diff = p.omega_alt[r] - p.omega[r];
        c0 += Rat(a.n) * p.omega[r] * Rat(b.beta[r]) - Rat(b.n) * p.omega[r] * Rat(a.beta[r]);
        c1 += Rat(a.n) * diff * Rat(b.beta[r]) - Rat(b.n) * diff * Rat(a.beta[r]);
      }
      if (c1 == 0) continue;
      Rat t = -c0 / c1;
      if (t > 0 && t < 1) walls.insert(t);
    }
  return walls.size();
}

std::string crit2_3(size_t& rho_checks) {
  WallPool pool;
  size_t walls = count_interior_walls(pool);
  expect(walls >= 3, "pool has fewer than 3 interior slope walls");
  StabilityCond tau = stab_sheaf(pool.omega);
  StabilityCond taut = stab_sheaf(pool.omega_alt);

  size_t multisets = 0;
  rho_checks = 0;
  std::vector<int> pick;
  std::function<void(size_t)> rec = [&](size_t from) {
    if (!pick.empty()) {
      std::vector<KClass> ms;
      for (int i : pick) ms.push_back(pool.classes[static_cast<size_t>(i)]);
      LieWordSum lu = coeff_Utilde(ms, tau, taut);
      TensorWordSum expanded = lie_expand(lu);
      TensorWordSum usum = oracle_word_sum(ms, tau, taut);
      expect(expanded == usum, "lie expansion differs from the U-word sum");
      TensorWordSum braided = oracle_rho(usum);
      expect(braided == tws_scale(Rat(static_cast<long long>(ms.size())), usum),
             "left-bracketing does not scale the U-sum by its degree");
      ++multisets;
      ++rho_checks;
    }
    if (pick.size() == 5) return;
    for (size_t i = from; i < pool.classes.size(); ++i) {
      pick.push_back(static_cast<int>(i));
      rec(i);
      pick.pop_back();
    }
  };
  rec(0);
  std::ostringstream os;
  os << multisets << " multisets over " << walls << " interior walls, round trip exact";
  return os.str();
}

// ---- criteria 4-5: operator calculus -------------------------------------------

VertexConfig calc_cfg() {
  VertexConfig cfg;
  cfg.geom.rank = 1;
  cfg.geom.c1 = {1};
  cfg.geom.omega = {Rat(1)};
  cfg.geom.L = {1};
  cfg.trunc_n = 2;
  cfg.eta_scale = Rat(3);
  cfg.symbols["A"] = BaseSymbol{"A", 2, KClass{0, {1}, 0}};
  cfg.symbols["P"] = BaseSymbol{"P", 0, KClass{1, {0}, 0}};
  for (int i = 1; i <= 20; ++i) // deep modes show up once D raises t-degrees
    cfg.weight_wildcard[i] = ratpoly_const(2, Rat(1, i));
  cfg.validate();
  return cfg;
}

const std::vector<std::vector<std::string>>& calc_monos() {
  static const std::vector<std::vector<std::string>> monos = {
      {}, {"A"}, {"P"}, {"A", "A"}, {"A", "P"}, {"P", "P"}};
  return monos;
}

RElem random_relem(int trunc) {
  RElem r = relem_scalar(trunc, rq(5, 3));
  for (int k = 1; k <= trunc; ++k)
    if (ri(0, 1)) r = r + rq(5, 3) * relem_spow(trunc, k);
  return r;
}

ModeElement random_velem(const VertexConfig& cfg, const KClass& label, int max_tdeg) {
  ModeElement u(cfg.trunc_n);
  long long nterms = ri(1, 4);
  for (long long i = 0; i < nterms; ++i) {
    VTermKey key;
    key.mono = calc_monos()[static_cast<size_t>(ri(0, 5))];
    key.tdeg = static_cast<int>(ri(0, max_tdeg));
    key.label = label;
    velem_add_term(u, key, random_relem(cfg.trunc_n));
  }
  return u;
}

void check_calculus(const VertexConfig& cfg, const ModeElement& u, const Rat& c) {
  ModeElement comm = op_R(op_D(u), cfg) - op_D(op_R(u, cfg));
  expect(comm == c * u, "[R,D] is not c*id");
  ModeElement pi = proj_e0(u, cfg);
  expect(proj_e0(pi, cfg) == pi, "projection is not idempotent");
  expect(op_R(pi, cfg).is_zero(), "R does not kill the projection");
  ModeElement ker = kernel_part(u);
  ModeElement img = image_part(u);
  expect(ker + img == u, "kernel/image parts do not sum back");
  for (const auto& [k, coeff] : img.terms)
    expect(k.tdeg >= 1, "image part has a t-degree-0 term");
  for (const auto& [k, coeff] : ker.terms)
    expect(k.tdeg == 0, "kernel part has a shifted term");
  expect(pi == ker, "projection differs from the t-degree-0 part");
}

std::string crit4() {
  VertexConfig cfg = calc_cfg();
  KClass label{1, {1}, 1};
  Rat c = cfg.pairing_const(label);
  expect(c == Rat(-3), "pairing constant is off");
  size_t basis = 0;
  for (const auto& mono : calc_monos())
    for (int tdeg = 0; tdeg <= 12; ++tdeg) {
      ModeElement u(cfg.trunc_n);
      VTermKey key;
      key.mono = mono;
      key.tdeg = tdeg;
      key.label = label;
      velem_add_term(u, key, relem_one(cfg.trunc_n));
      check_calculus(cfg, u, c);
      ++basis;
    }
  for (int trial = 0; trial < 100; ++trial)
    check_calculus(cfg, random_velem(cfg, label, 12), c);
  std::ostringstream os;
  os << basis << " basis elements (t-degree <= 12) and 100 random elements";
  return os.str();
}

std::string crit5() {
  VertexConfig cfg = calc_cfg();
  for (int trial = 0; trial < 100; ++trial) {
    KClass lu{1, {1}, ri(-3, 3)};
    KClass lv{0, {1}, ri(-3, 3)};
    KClass lw{0, {1}, ri(-3, 3)};
    ModeElement u = random_velem(cfg, lu, 2);
    ModeElement v = random_velem(cfg, lv, 2);
    ModeElement w = random_velem(cfg, lw, 2);
    ModeElement lhs = lifted_bracket(u, v + op_D(w), cfg);
    ModeElement rhs = lifted_bracket(u, v, cfg);
    expect(lhs == rhs, "bracket changed under v -> v + D(w)");
  }
  return "100 randomized (u,v,w), bracket invariant under shifts of v";
}

// ---- criteria 6-7: lattice sums ------------------------------------------------

MElem amod(const Rat& v) { return melem_basis(0, "A", v); }

MPoly weight_poly(const std::vector<std::pair<std::vector<int>, Rat>>& terms) {
  MPoly p(2, 0);
  for (const auto& [e, v] : terms) mpoly_add_term(p, e, amod(v));
  return p;
}

std::string crit6() {
  struct Fixture {
    const char* name;
    Chamber q;
    MPoly w;
  };
  std::vector<Fixture> fixtures;
  {
    Fixture f;
    f.name = "octant";
    f.q.k = 2;
    f.q.cons = {make_con({Rat(1), Rat(0)}, Rel::GE, Rat(0)),
                make_con({Rat(0), Rat(1)}, Rel::GE, Rat(0))};
    f.w = weight_poly({{{0, 0}, Rat(1)}, {{1, 0}, Rat(1)}});
    fixtures.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "shifted cone";
    f.q.k = 2;
    f.q.cons = {make_con({Rat(1), Rat(0)}, Rel::GE, Rat(2)),
                make_con({Rat(0), Rat(1)}, Rel::GE, Rat(-1))};
    f.w = weight_poly({{{1, 0}, Rat(1)}, {{0, 1}, Rat(2)}});
    fixtures.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "half-open";
    f.q.k = 2;
    f.q.cons = {make_con({Rat(1), Rat(0)}, Rel::GE, Rat(0)),
                make_con({Rat(0), Rat(1)}, Rel::GE, Rat(0)),
                make_con({Rat(-1), Rat(2)}, Rel::LT, Rat(0))};
    f.w = weight_poly({{{0, 0}, Rat(1)}});
    fixtures.push_back(std::move(f));
  }
  for (const auto& f : fixtures) {
    PiecewiseQP cert = certify_pqp(f.q, f.w, -210, 210);
    for (long long n = -200; n <= 200; ++n)
      expect(pqp_eval(cert, {n}) == oracle_slice_sum(f.q, f.w, n, 205),
             std::string(f.name) + " mismatch at n = " + std::to_string(n));
  }
  return "3 fixtures (octant, shifted cone, half-open period-2), n in [-200,200]";
}

std::string crit7() {
  struct Fixture {
    const char* name;
    PiecewiseQP f;
  };
  auto box = [](long long x1lo, long long x1hi, long long x2lo, long long x2hi) {
    Chamber q;
    q.k = 2;
    q.cons = {make_con({Rat(1), Rat(0)}, Rel::GE, Rat(x1lo)),
              make_con({Rat(1), Rat(0)}, Rel::LE, Rat(x1hi)),
              make_con({Rat(0), Rat(1)}, Rel::GE, Rat(x2lo)),
              make_con({Rat(0), Rat(1)}, Rel::LE, Rat(x2hi))};
    return q;
  };
  std::vector<Fixture> fixtures;
  {
    Fixture fx;
    fx.name = "box";
    fx.f.k = 2;
    fx.f.trunc_n = 0;
    KQuasiPoly w = kqp_zero(2, 0);
    w.d = 1;
    w.polys[{0, 0}] = weight_poly({{{0, 0}, Rat(1)}, {{1, 1}, Rat(1)}});
    fx.f.pieces.push_back(PqpPiece{box(0, 3, 0, 4), w});
    fixtures.push_back(std::move(fx));
  }
  {
    Fixture fx;
    fx.name = "octant";
    fx.f.k = 2;
    fx.f.trunc_n = 0;
    Chamber q;
    q.k = 2;
    q.cons = {make_con({Rat(1), Rat(0)}, Rel::GE, Rat(0)),
              make_con({Rat(0), Rat(1)}, Rel::GE, Rat(0))};
    KQuasiPoly w = kqp_zero(2, 0);
    w.d = 1;
    w.polys[{0, 0}] = weight_poly({{{1, 0}, Rat(1)}});
    fx.f.pieces.push_back(PqpPiece{q, w});
    fixtures.push_back(std::move(fx));
  }
  {
    Fixture fx;
    fx.name = "period-2 weights";
    fx.f.k = 2;
    fx.f.trunc_n = 0;
    KQuasiPoly w = kqp_zero(2, 0);
    w.d = 2;
    w.polys[{0, 0}] = weight_poly({{{0, 0}, Rat(1)}});
    w.polys[{1, 0}] = weight_poly({{{0, 1}, Rat(1)}});
    w.polys[{0, 1}] = weight_poly({{{0, 0}, Rat(2)}});
    w.polys[{1, 1}] = weight_poly({{{1, 0}, Rat(1)}, {{0, 1}, Rat(1)}});
    fx.f.pieces.push_back(PqpPiece{box(0, 5, 0, 5), w});
    fixtures.push_back(std::move(fx));
  }
  for (const auto& fx : fixtures) {
    PiecewiseQP h = convolve_fiberwise(fx.f);
    for (long long n = -200; n <= 200; ++n)
      expect(pqp_eval(h, {n}) == oracle_fiber_sum(fx.f, n, 210),
             std::string(fx.name) + " mismatch at n = " + std::to_string(n));
  }
  return "3 fixtures including period-2 weights, |n| <= 200";
}

// ---- criterion 8: difference and shift solvers ---------------------------------

MPoly upoly_from(const std::vector<Rat>& cs) {
  MPoly p(1, 0);
  for (size_t i = 0; i < cs.size(); ++i)
    if (cs[i] != 0) mpoly_add_term(p, {static_cast<int>(i)}, amod(cs[i]));
  return p;
}

std::string crit8() {
  // (a) order-7 solutions are per-residue degree <= 6
  auto sample = [](const QuasiPoly& f, long long lo, long long hi) {
    std::map<long long, MElem> s;
    for (long long n = lo; n <= hi; ++n) s.emplace(n, qp_eval(f, n));
    return s;
  };
  std::vector<QuasiPoly> inputs;
  {
    QuasiPoly f;
    f.d = 1;
    f.trunc_n = 0;
    f.polys = {upoly_from({Rat(1, 2), Rat(0), Rat(-3), Rat(0), Rat(0), Rat(0), Rat(1)})};
    inputs.push_back(f); // degree 6
  }
  {
    QuasiPoly f;
    f.d = 2;
    f.trunc_n = 0;
    f.polys = {upoly_from({Rat(2), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(1, 3)}),
               upoly_from({Rat(0), Rat(1), Rat(0), Rat(0), Rat(0), Rat(-1)})};
    inputs.push_back(f); // period 2, degrees 6 and 5
  }
  {
    QuasiPoly f;
    f.d = 1;
    f.trunc_n = 0;
    f.polys = {upoly_from({Rat(1), Rat(-2), Rat(0), Rat(5)})};
    inputs.push_back(f); // degree 3
  }
  for (const auto& f : inputs) {
    QuasiPoly got = solve_difference(7, f.d, sample(f, 0, 20 * f.d));
    expect(qp_max_degree(got) <= 6, "order-7 solution exceeds degree 6");
    for (long long n = 0; n <= 20 * f.d; ++n)
      expect(qp_eval(got, n) == qp_eval(f, n), "order-7 solution misses a sample");
  }
  {
    // sharpness: a degree-7 sequence does not satisfy an order-7 equation
    QuasiPoly f;
    f.d = 1;
    f.trunc_n = 0;
    f.polys = {upoly_from({Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)})};
    bool threw = false;
    try {
      solve_difference(7, 1, sample(f, 0, 25));
    } catch (const CertifyError&) {
      threw = true;
    }
    expect(threw, "degree-7 input slipped through an order-7 fit");
  }

  // (b) truncated-ring shift model: nilpotency within (N+1)(3(2+N)+1)
  std::vector<int> orders;
  for (int N = 0; N <= 3; ++N) {
    int D = 3 * (2 + N);
    int dim = D + 1;
    int bound = (N + 1) * (3 * (2 + N) + 1);
    RMat j;
    j.rows = j.cols = dim;
    j.trunc_n = N;
    j.a.assign(static_cast<size_t>(dim),
               std::vector<RElem>(static_cast<size_t>(dim), relem_zero(N)));
    for (int r = 0; r < dim; ++r)
      for (int cc = 0; cc < dim; ++cc) {
        RElem v = relem_zero(N);
        if (r == cc) v = v + relem_one(N);
        if (r < cc) v = v + relem_scalar(N, Rat(binom_int(cc, r))); // shift, upper part
        if (N >= 1 && r == cc + 1) v = v + relem_spow(N, 1);        // nilpotent mixing
        j.a[static_cast<size_t>(r)][static_cast<size_t>(cc)] = v;
      }
    int m = nilpotency_order(j, bound); // throws past the cap
    expect(m <= bound, "nilpotency order exceeds the pinned bound");
    orders.push_back(m);
  }
  std::ostringstream os;
  os << "3 order-7 fits (degree <= 6) + degree-7 reject; shift nilpotency";
  for (size_t i = 0; i < orders.size(); ++i)
    os << (i ? "," : "") << " " << orders[i] << "<=" << (i + 1) * (3 * (2 + i) + 1);
  return os.str();
}

// ---- criterion 9: generating-function round trip --------------------------------

std::string crit9() {
  for (int trial = 0; trial < 50; ++trial) {
    long long d = ri(1, 4);
    int trunc = static_cast<int>(ri(0, 1));
    QuasiPoly f;
    f.d = d;
    f.trunc_n = trunc;
    for (long long r = 0; r < d; ++r) {
      MPoly p(1, trunc);
      long long deg = ri(0, 3);
      for (long long i = 0; i <= deg; ++i) {
        RElem coeff = random_relem(trunc);
        MElem v = melem_basis(trunc, "A", coeff);
        if (!v.is_zero()) mpoly_add_term(p, {static_cast<int>(i)}, v);
      }
      f.polys.push_back(p);
    }
    long long n0 = ri(0, 8);
    RationalGF g = qp_tail_to_gf(f, n0);

    // half the trials get explicit prefix corrections below the tail
    std::map<long long, MElem> extra;
    if (ri(0, 1)) {
      RationalGF pre;
      pre.trunc_n = trunc;
      for (long long n = 0; n < n0; ++n)
        if (ri(0, 1)) {
          MElem v = melem_basis(trunc, "A", random_relem(trunc));
          pre.prefix[n] = v;
          extra[n] = v;
        }
      g = gf_add(g, pre);
    }

    for (long long n = 0; n <= 200; ++n) {
      MElem want = n >= n0 ? qp_eval(f, n) : melem_zero(trunc);
      auto it = extra.find(n);
      if (it != extra.end()) want = want + it->second;
      expect(gf_coeff(g, n) == want, "round trip mismatch at n = " + std::to_string(n));
    }
    for (const auto& p : pole_locations(g)) {
      bool origin = p.m == 0 && p.k == 0;
      bool unity = p.m >= 1 && p.k >= 0 && p.k < p.m && std::gcd(p.k, p.m) == 1;
      expect(p.order >= 1 && (origin || unity), "pole off the unit circle and origin");
    }
  }
  return "50 random eventually-quasi-polynomial sequences to 200 coefficients";
}

// ---- criteria 10-12: end-to-end recursion ---------------------------------------

struct Instance {
  PtEngine* e;
  CurveClass beta;
  long long n;
};

std::string crit10(ScenarioData& fano, PtEngine& e, std::vector<Instance>& instances) {
  CurveClass beta{1};
  expect(fano.dt.count(beta) == 1, "input table misses the irreducible class");
  const QuasiPoly& input = fano.dt.at(beta);
  expect(input.d == 2, "input table period is not 2");
  expect(qp_max_degree(input) <= 6, "input table degree exceeds 6");

  PtSeriesResult r = pt_series(e, beta);
  for (const auto& t : r.gf.tails) {
    expect(t.d == 1 || t.d == 2, "tail step outside {1,2}");
    expect(t.e <= 7, "tail pole order exceeds 7");
  }
  for (long long n = 1; n <= 100; ++n) {
    expect(gf_coeff(r.gf, n) == pt_from_decompositions(e, beta, n),
           "series coefficient differs from the recursion at n = " + std::to_string(n));
    instances.push_back(Instance{&e, beta, n});
  }
  std::ostringstream os;
  os << "denominator divides q^a (1-q^2)^7 (" << r.gf.tails.size()
     << " tails), recursion matched for n = 1..100";
  return os.str();
}

std::string crit11(ScenarioData& split2, PtEngine& e, std::vector<Instance>& instances) {
  CurveClass beta{2};
  expect(split_count(beta) == 2, "class does not have split count 2");
  for (long long n = 4; n <= 7; ++n) {
    MElem engine = pt_from_decompositions(e, beta, n);
    MElem flat = oracle_flat_pt_rhs(e, beta, n, 8, 10);
    expect(engine == flat, "flat-window oracle differs at n = " + std::to_string(n));
    instances.push_back(Instance{&e, beta, n});
  }
  return "flat-window oracle agrees at n = 4..7 on the split-count-2 class";
}

std::string crit12(const std::vector<Instance>& instances) {
  expect(!instances.empty(), "no instances were collected");
  for (const auto& inst : instances)
    verify_recursion_identity(*inst.e, inst.beta, inst.n); // throws on failure
  std::ostringstream os;
  os << "rearranged identity is 0 on all " << instances.size() << " instances";
  return os.str();
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: ptcalc_accept <fixtures-dir>\n";
    return 2;
  }
  std::string fixtures = argv[1];

  criterion(1, "pair singleton normalization", 1.0, crit1);

  size_t rho_checks = 0;
  double crit2_secs = 0;
  {
    auto t0 = std::chrono::steady_clock::now();
    criterion(2, "Lie rewriting round trip", 60.0, [&] { return crit2_3(rho_checks); });
    crit2_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  criterion(3, "left-bracketing primitivity", 60.0, [&] {
    // checked inside the criterion-2 run; this line reports that shared work
    expect(rho_checks > 0, "criterion 2 did not run");
    std::ostringstream os;
    os << rho_checks << " U-sums scale under left-bracketing (in the criterion-2 run, "
       << std::fixed << std::setprecision(2) << crit2_secs << "s)";
    return os.str();
  });

  criterion(4, "operator calculus identities", 5.0, crit4);
  criterion(5, "bracket lift independence", 5.0, crit5);
  criterion(6, "lattice sum certification", 10.0, crit6);
  criterion(7, "fiberwise convolution closure", 10.0, crit7);
  criterion(8, "difference and shift solvers", 5.0, crit8);
  criterion(9, "generating-function round trip and poles", 10.0, crit9);

  std::vector<Instance> instances;
  ScenarioData fano, split2;
  bool loaded = true;
  try {
    fano = scenario_load(fixtures + "/fano_rank1.scn");
    split2 = scenario_load(fixtures + "/split2.scn");
  } catch (const std::exception& e) {
    loaded = false;
    std::cout << "[FAIL] criterion 10: fixture load -- " << e.what() << "\n";
    std::cout << "[FAIL] criterion 11: fixture load -- " << e.what() << "\n";
    std::cout << "[FAIL] criterion 12: fixture load -- " << e.what() << "\n";
    g_failures += 3;
  }
  if (loaded) {
    PtEngine efano(fano), esplit(split2);
    criterion(10, "irreducible end-to-end pipeline", 30.0,
              [&] { return crit10(fano, efano, instances); });
    criterion(11, "split-class recursion cross-check", 60.0,
              [&] { return crit11(split2, esplit, instances); });
    criterion(12, "rearranged identity vanishes", 0,
              [&] { return crit12(instances); });
  }

  if (g_failures == 0) {
    std::cout << "all criteria passed\n";
    return 0;
  }
  std::cout << g_failures << " criteria failed\n";
  return 1;
}
