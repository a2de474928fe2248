#include "ptcalc/classlat.hpp"

namespace ptcalc {

KClass kclass_add(const KClass& a, const KClass& b) {
  if (a.beta.size() != b.beta.size())
    throw InputError("class rank mismatch in addition");
  KClass r;
  r.d = a.d + b.d;
  r.beta.resize(a.beta.size());
  for (size_t i = 0; i < a.beta.size(); ++i) r.beta[i] = a.beta[i] + b.beta[i];
  r.n = a.n + b.n;
  return r;
}

std::string curve_str(const CurveClass& b) {
  std::string s = "(";
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(b[i]);
  }
  return s + ")";
}

std::string kclass_str(const KClass& a) {
  std::string s = "(" + std::to_string(a.d) + ";";
  for (size_t i = 0; i < a.beta.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a.beta[i]);
  }
  return s + ";" + std::to_string(a.n) + ")";
}

void GeometryModel::validate() const {
  if (rank < 1) throw InputError("geometry rank must be >= 1");
  auto need = static_cast<size_t>(rank);
  if (c1.size() != need) throw InputError("c1 length must equal rank");
  if (omega.size() != need) throw InputError("omega length must equal rank");
  if (L.size() != need) throw InputError("L length must equal rank");
  for (const auto& w : omega)
    if (w <= 0) throw InputError("omega entries must be positive");
  for (auto l : L)
    if (l <= 0) throw InputError("L entries must be positive");
  if (euler_override) {
    size_t m = need + 2;
    if (euler_override->size() != m)
      throw InputError("euler override must be a (rank+2) square matrix");
    for (size_t i = 0; i < m; ++i) {
      if ((*euler_override)[i].size() != m)
        throw InputError("euler override must be a (rank+2) square matrix");
      for (size_t j = 0; j < m; ++j)
        if ((*euler_override)[i][j] != (*euler_override)[j][i])
          throw InputError("euler override must be symmetric");
    }
  }
}

bool is_effective(const CurveClass& beta) {
  bool nonzero = false;
  for (auto b : beta) {
    if (b < 0) return false;
    if (b > 0) nonzero = true;
  }
  return nonzero;
}

std::vector<CurveClass> factors(const CurveClass& beta, const GeometryModel& g) {
  if (static_cast<size_t>(g.rank) != beta.size())
    throw InputError("class rank mismatch in factors");
  if (!is_effective(beta))
    throw InputError("factors requires an effective class, got " + curve_str(beta));
  std::vector<CurveClass> out;
  CurveClass cur(beta.size(), 0);
  // odometer over the box [0, beta]
  while (true) {
    if (is_effective(cur)) out.push_back(cur);
    size_t i = 0;
    for (; i < cur.size(); ++i) {
      if (cur[i] < beta[i]) { ++cur[i]; break; }
      cur[i] = 0;
    }
    if (i == cur.size()) break;
  }
  return out;
}

long long split_count(const CurveClass& beta) {
  long long s = 0;
  for (auto b : beta) {
    if (b < 0) throw InputError("split_count requires an effective class");
    s += b;
  }
  if (s == 0) throw InputError("split_count requires a nonzero class");
  return s;
}

long long c1_deg(const CurveClass& beta, const GeometryModel& g) {
  if (beta.size() != g.c1.size()) throw InputError("class rank mismatch in c1 pairing");
  long long s = 0;
  for (size_t i = 0; i < beta.size(); ++i) s += g.c1[i] * beta[i];
  return s;
}

bool is_positive(const CurveClass& beta, const GeometryModel& g) {
  return c1_deg(beta, g) > 0;
}

bool is_superpositive(const CurveClass& beta, const GeometryModel& g) {
  if (!is_effective(beta)) return false;
  for (const auto& f : factors(beta, g))
    if (!is_positive(f, g)) return false;
  return true;
}

Rat omega_deg(const CurveClass& beta, const std::vector<Rat>& omega) {
  if (beta.size() != omega.size())
    throw InputError("class rank mismatch in omega pairing");
  Rat s = 0;
  for (size_t i = 0; i < beta.size(); ++i) s += omega[i] * Rat(beta[i]);
  return s;
}

long long ample_deg(const CurveClass& beta, const GeometryModel& g) {
  if (beta.size() != g.L.size()) throw InputError("class rank mismatch in L pairing");
  long long s = 0;
  for (size_t i = 0; i < beta.size(); ++i) s += g.L[i] * beta[i];
  return s;
}

long long euler_sym(const KClass& a, const KClass& b, const GeometryModel& g) {
  if (a.beta.size() != static_cast<size_t>(g.rank) ||
      b.beta.size() != static_cast<size_t>(g.rank))
    throw InputError("class rank mismatch in pairing");
  if (g.euler_override) {
    // coordinates (d, beta..., n); the override matrix is symmetric integer
    std::vector<long long> va, vb;
    va.push_back(a.d);
    for (auto x : a.beta) va.push_back(x);
    va.push_back(a.n);
    vb.push_back(b.d);
    for (auto x : b.beta) vb.push_back(x);
    vb.push_back(b.n);
    long long s = 0;
    for (size_t i = 0; i < va.size(); ++i)
      for (size_t j = 0; j < vb.size(); ++j)
        s += va[i] * (*g.euler_override)[i][j] * vb[j];
    return s;
  }
  return -(static_cast<long long>(a.d) * c1_deg(b.beta, g) +
           static_cast<long long>(b.d) * c1_deg(a.beta, g));
}

} // namespace ptcalc
