#include "ptcalc/stability.hpp"

namespace ptcalc {

SlopeVal slope_fin(const Rat& q, int eps) {
  SlopeVal s;
  s.kind = SlopeVal::FIN;
  s.q = q;
  s.eps = eps;
  return s;
}

SlopeVal slope_posbig() {
  SlopeVal s;
  s.kind = SlopeVal::POSBIG;
  return s;
}

SlopeVal slope_inf() {
  SlopeVal s;
  s.kind = SlopeVal::INF;
  return s;
}

std::string slope_str(const SlopeVal& s) {
  switch (s.kind) {
    case SlopeVal::POSBIG: return "+big";
    case SlopeVal::INF: return "inf";
    default: break;
  }
  std::string out = rat_str(s.q);
  if (s.eps > 0) out += "+eps";
  if (s.eps < 0) out += "-eps";
  return out;
}

bool sheaf_in_cone(const CurveClass& beta, long long n) {
  if (is_effective(beta)) return true;
  for (auto b : beta)
    if (b != 0) return false; // mixed-sign classes are never allowed
  return n > 0;
}

ExtendedRational slope_mu(const CurveClass& beta, long long n,
                          const std::vector<Rat>& omega) {
  if (!sheaf_in_cone(beta, n))
    throw InputError("slope undefined outside the cone at class (0;" +
                     curve_str(beta) + ";" + std::to_string(n) + ")");
  ExtendedRational r;
  if (!is_effective(beta)) {
    r.is_inf = true;
    return r;
  }
  r.q = Rat(n) / omega_deg(beta, omega);
  return r;
}

SlopeVal StabilityCond::eval(const KClass& a) const {
  if (type == Pair && a.d > 0) return c;
  if (a.d != 0)
    throw InputError("sheaf stability evaluated on a pair class " + kclass_str(a));
  ExtendedRational m = slope_mu(a.beta, a.n, omega);
  if (m.is_inf) return slope_inf();
  return slope_fin(m.q);
}

std::string StabilityCond::str() const {
  std::string s = (type == Sheaf) ? "mu[omega=(" : "pair[omega=(";
  for (size_t i = 0; i < omega.size(); ++i) {
    if (i) s += ",";
    s += rat_str(omega[i]);
  }
  s += ")";
  if (type == Pair) s += ", c=" + slope_str(c);
  return s + "]";
}

StabilityCond stab_sheaf(const std::vector<Rat>& omega) {
  StabilityCond t;
  t.type = StabilityCond::Sheaf;
  t.omega = omega;
  return t;
}

StabilityCond stab_pair(const std::vector<Rat>& omega, const SlopeVal& c) {
  StabilityCond t;
  t.type = StabilityCond::Pair;
  t.omega = omega;
  t.c = c;
  return t;
}

std::optional<SeesawWitness> check_weak_stability(const StabilityCond& tau,
                                                  const std::vector<KClass>& sample) {
  auto in_domain = [&](const KClass& a) {
    if (a.d != 0) return tau.type == StabilityCond::Pair;
    return sheaf_in_cone(a.beta, a.n);
  };
  for (const auto& a : sample)
    for (const auto& b : sample) {
      KClass ab = kclass_add(a, b);
      if (!in_domain(a) || !in_domain(b) || !in_domain(ab)) continue;
      SlopeVal ta = tau.eval(a), tab = tau.eval(ab), tb = tau.eval(b);
      bool up = ta <= tab && tab <= tb;
      bool down = ta >= tab && tab >= tb;
      if (!up && !down) {
        SeesawWitness w;
        w.a = a;
        w.b = b;
        w.detail = "slopes " + slope_str(ta) + ", " + slope_str(tab) + ", " +
                   slope_str(tb) + " are not monotone";
        return w;
      }
    }
  return std::nullopt;
}

} // namespace ptcalc
