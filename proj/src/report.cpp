#include "ptcalc/report.hpp"

#include <chrono>
#include <ostream>

#include "ptcalc/version.hpp"

namespace ptcalc {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

namespace {

const char* kind_name(ScenarioQuery::Kind k) {
  switch (k) {
    case ScenarioQuery::Kind::Coeffs: return "coeffs";
    case ScenarioQuery::Kind::Wallcross: return "wallcross";
    case ScenarioQuery::Kind::Ptgen: return "ptgen";
    case ScenarioQuery::Kind::Expand: return "expand";
    case ScenarioQuery::Kind::Verify: return "verify";
  }
  return "?";
}

std::string word_indices(const Word& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s;
}

std::string pole_str(const PoleInfo& p) {
  if (p.m == 0) return "origin order " + std::to_string(p.order);
  return "root " + std::to_string(p.k) + "/" + std::to_string(p.m) + " order " +
         std::to_string(p.order);
}

void run_coeffs(const ScenarioData& s, const ScenarioQuery& q, std::ostream& out) {
  StabilityCond tau = stability_from_spec(s, q.tau_spec, "query tau");
  StabilityCond taut = stability_from_spec(s, q.tautilde_spec, "query tautilde");
  out << "  seq:";
  for (const auto& c : q.classes) out << " " << kclass_str(c);
  out << "\n";
  out << "  S = " << rat_str(coeff_S(q.classes, tau, taut)) << "\n";
  out << "  U = " << rat_str(coeff_U(q.classes, tau, taut)) << "\n";
  LieWordSum lw = coeff_Utilde(q.classes, tau, taut);
  out << "  classes:";
  for (size_t i = 0; i < lw.classes.size(); ++i)
    out << " " << i << "=" << kclass_str(lw.classes[i]);
  out << "\n";
  if (lw.terms.empty()) {
    out << "  utilde: 0\n";
    return;
  }
  for (const auto& [w, c] : lw.terms)
    out << "  utilde[" << word_indices(w) << "] = " << rat_str(c) << "\n";
}

void run_wallcross(const ScenarioData& s, const ScenarioQuery& q, const RunOptions& opt,
                   std::ostream& out) {
  out << "  window: " << s.window << "\n";
  out << "  dt(omega) = " << melem_str(dt_value(s, q.beta, q.n)) << "\n";
  MElem v = dt_wallcross(s, q.beta, q.n, s.window);
  out << "  dt(omega_alt) = " << melem_str(v) << "\n";
  if (opt.oracle) {
    MElem w = dt_wallcross(s, q.beta, q.n, 2 * s.window);
    if (!(w == v))
      throw CertifyError("wallcross at " + curve_str(q.beta) + ", n = " +
                         std::to_string(q.n) + " changes when the window doubles: " +
                         melem_str(v) + " vs " + melem_str(w));
    out << "  oracle: window " << (2 * s.window) << " agrees\n";
  }
}

void run_ptgen(PtEngine& e, const ScenarioQuery& q, std::ostream& out) {
  PtSeriesResult r = pt_series(e, q.beta);
  out << "  vanish: n <= " << r.vanish_bound << "\n";
  if (r.tail_start > r.vanish_bound + 1)
    out << "  middle: " << (r.vanish_bound + 1) << " <= n <= " << (r.tail_start - 1)
        << "\n";
  else
    out << "  middle: none\n";
  out << "  tail from n = " << r.tail_start << ", step " << r.step << ", order "
      << r.order << "\n";
  out << "  tail: " << qp_str(r.tail) << "\n";
  out << "  gf: " << gf_str(r.gf) << "\n";
  if (r.poles.empty()) {
    out << "  poles: none\n";
  } else {
    out << "  poles:";
    for (size_t i = 0; i < r.poles.size(); ++i)
      out << (i ? "; " : " ") << pole_str(r.poles[i]);
    out << "\n";
  }
}

void run_expand(const ScenarioData& s, PtEngine& e, const ScenarioQuery& q,
                const RunOptions& opt, std::ostream& out) {
  long long nmax = q.nmax >= 0 ? q.nmax : s.default_nmax;
  if (opt.n_max) nmax = *opt.n_max;
  RationalGF gf;
  if (q.has_inline) {
    gf.trunc_n = s.vcfg.trunc_n;
    gf.tails.push_back(q.inline_tail);
  } else {
    gf = pt_series(e, q.beta).gf;
  }
  for (long long n = 0; n <= nmax; ++n)
    out << "  a[" << n << "] = " << melem_str(gf_coeff(gf, n)) << "\n";
}

void run_verify(PtEngine& e, const ScenarioQuery& q, std::ostream& out) {
  out << "  " << verify_recursion_identity(e, q.beta, q.n) << "\n";
}

} // namespace

void run_report(const ScenarioData& s, const RunOptions& opt, std::ostream& out,
                std::ostream* timing) {
  out << "ptcalc " << kVersion << "\n";
  out << "scenario " << s.path << " hash " << hex64(fnv1a64(s.raw)) << "\n";

  PtEngine engine(s, opt.memo);
  int ran = 0;
  auto t0all = std::chrono::steady_clock::now();
  for (const auto& q : s.queries) {
    if (opt.only && q.kind != *opt.only) continue;
    ++ran;
    out << "\n[" << kind_name(q.kind) << ":" << q.line << "]";
    if (q.kind == ScenarioQuery::Kind::Coeffs)
      out << " tau=" << q.tau_spec << " tautilde=" << q.tautilde_spec;
    if (q.has_beta) out << " beta=" << curve_str(q.beta);
    if (q.has_n) out << " n=" << q.n;
    out << "\n";
    auto t0 = std::chrono::steady_clock::now();
    switch (q.kind) {
      case ScenarioQuery::Kind::Coeffs: run_coeffs(s, q, out); break;
      case ScenarioQuery::Kind::Wallcross: run_wallcross(s, q, opt, out); break;
      case ScenarioQuery::Kind::Ptgen: run_ptgen(engine, q, out); break;
      case ScenarioQuery::Kind::Expand: run_expand(s, engine, q, opt, out); break;
      case ScenarioQuery::Kind::Verify: run_verify(engine, q, out); break;
    }
    if (timing) {
      auto ms = std::chrono::duration_cast<std::chrono::microseconds>(
                    std::chrono::steady_clock::now() - t0).count();
      *timing << "# [" << kind_name(q.kind) << ":" << q.line << "] "
              << (static_cast<double>(ms) / 1000.0) << " ms\n";
    }
  }
  if (opt.only && ran == 0)
    throw InputError("scenario has no " + std::string(kind_name(*opt.only)) +
                     " queries");
  out << "\nqueries run: " << ran << "\n";
  if (timing) {
    auto ms = std::chrono::duration_cast<std::chrono::microseconds>(
                  std::chrono::steady_clock::now() - t0all).count();
    *timing << "# total " << (static_cast<double>(ms) / 1000.0) << " ms\n";
  }
}

} // namespace ptcalc
