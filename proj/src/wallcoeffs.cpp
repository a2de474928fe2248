#include "ptcalc/wallcoeffs.hpp"

#include <algorithm>

namespace ptcalc {

namespace {

KClass seq_sum(const ClassSeq& seq, size_t from, size_t to) { // [from, to)
  KClass s = seq[from];
  for (size_t i = from + 1; i < to; ++i) s = kclass_add(s, seq[i]);
  return s;
}

} // namespace

Rat coeff_S(const ClassSeq& seq, const StabilityCond& tau, const StabilityCond& tautilde) {
  size_t n = seq.size();
  if (n == 0) throw InputError("S needs a nonempty class sequence");
  if (n == 1) return Rat(1);
  // prefix sums once; suffix = total - prefix is not available for classes,
  // so keep explicit suffix sums too
  std::vector<KClass> pre(n), suf(n);
  pre[0] = seq[0];
  for (size_t i = 1; i < n; ++i) pre[i] = kclass_add(pre[i - 1], seq[i]);
  suf[n - 1] = seq[n - 1];
  for (size_t i = n - 1; i-- > 0;) suf[i] = kclass_add(seq[i], suf[i + 1]);

  int r = 0;
  for (size_t i = 0; i + 1 < n; ++i) {
    SlopeVal ti = tau.eval(seq[i]);
    SlopeVal tj = tau.eval(seq[i + 1]);
    SlopeVal pi = tautilde.eval(pre[i]);
    SlopeVal si = tautilde.eval(suf[i + 1]);
    bool case_a = (ti <= tj) && (pi > si);
    bool case_b = (ti > tj) && (pi <= si);
    if (case_a) ++r;
    else if (!case_b) return Rat(0);
  }
  return (r % 2 == 0) ? Rat(1) : Rat(-1);
}

Rat coeff_U(const ClassSeq& seq, const StabilityCond& tau, const StabilityCond& tautilde) {
  size_t n = seq.size();
  if (n == 0) throw InputError("U needs a nonempty class sequence");
  if (n > 62) throw InputError("class sequence too long");

  SlopeVal t_total = tautilde.eval(seq_sum(seq, 0, n));

  // small cache of S values on block-sum sequences; blocks repeat across splits
  std::map<ClassSeq, Rat> s_cache;
  auto s_val = [&](const ClassSeq& blocks) {
    auto it = s_cache.find(blocks);
    if (it != s_cache.end()) return it->second;
    Rat v = coeff_S(blocks, tau, tautilde);
    s_cache.emplace(blocks, v);
    return v;
  };

  Rat total = 0;
  // outer split: group the sequence into m consecutive blocks via a junction
  // bitmask; bit i set = cut between positions i and i+1
  const unsigned long long cuts = 1ull << (n - 1);
  for (unsigned long long amask = 0; amask < cuts; ++amask) {
    std::vector<size_t> astop; // exclusive block ends
    for (size_t i = 0; i + 1 < n; ++i)
      if (amask & (1ull << i)) astop.push_back(i + 1);
    astop.push_back(n);

    // block sums + the equal-slope requirement inside each block
    size_t m = astop.size();
    std::vector<KClass> bsum(m);
    std::vector<long long> blen(m);
    bool ok = true;
    size_t start = 0;
    for (size_t b = 0; b < m && ok; ++b) {
      bsum[b] = seq_sum(seq, start, astop[b]);
      blen[b] = static_cast<long long>(astop[b] - start);
      SlopeVal tb = tau.eval(bsum[b]);
      for (size_t j = start; j < astop[b]; ++j)
        if (!(tau.eval(seq[j]) == tb)) { ok = false; break; }
      start = astop[b];
    }
    if (!ok) continue;

    Rat fact_weight = 1;
    for (size_t b = 0; b < m; ++b) fact_weight /= Rat(factorial_int(blen[b]));

    // inner split: group the m blocks into l consecutive groups
    const unsigned long long gcuts = 1ull << (m - 1);
    for (unsigned long long bmask = 0; bmask < gcuts; ++bmask) {
      std::vector<size_t> gstop;
      for (size_t i = 0; i + 1 < m; ++i)
        if (bmask & (1ull << i)) gstop.push_back(i + 1);
      gstop.push_back(m);
      size_t l = gstop.size();

      bool gok = true;
      Rat sprod = 1;
      size_t gstart = 0;
      for (size_t gi = 0; gi < l && gok; ++gi) {
        KClass gsum = bsum[gstart];
        for (size_t b = gstart + 1; b < gstop[gi]; ++b) gsum = kclass_add(gsum, bsum[b]);
        if (!(tautilde.eval(gsum) == t_total)) { gok = false; break; }
        ClassSeq blocks(bsum.begin() + static_cast<long>(gstart),
                        bsum.begin() + static_cast<long>(gstop[gi]));
        Rat s = s_val(blocks);
        if (s == 0) { gok = false; break; }
        sprod *= s;
        gstart = gstop[gi];
      }
      if (!gok) continue;

      Rat sign = (l % 2 == 1) ? Rat(1) : Rat(-1); // (-1)^{l-1}
      total += sign / Rat(l) * sprod * fact_weight;
    }
  }
  return total;
}

namespace {

// left-bracketing expansion of one word: [[..[x1,x2],..],xt] as tensor words
std::map<Word, Rat> dynkin_expand_word(const Word& w) {
  std::map<Word, Rat> acc;
  acc.emplace(Word{w[0]}, Rat(1));
  for (size_t i = 1; i < w.size(); ++i) {
    std::map<Word, Rat> next;
    for (const auto& [word, co] : acc) {
      Word right = word;
      right.push_back(w[i]); // word * x
      Word left;
      left.push_back(w[i]); // x * word
      left.insert(left.end(), word.begin(), word.end());
      next[right] += co;
      next[left] -= co;
    }
    acc = std::move(next);
  }
  for (auto it = acc.begin(); it != acc.end();)
    it = (it->second == 0) ? acc.erase(it) : std::next(it);
  return acc;
}

} // namespace

TensorWordSum lie_expand(const LieWordSum& l) {
  TensorWordSum t;
  t.classes = l.classes;
  for (const auto& [w, co] : l.terms) {
    if (co == 0) continue;
    for (const auto& [ew, ec] : dynkin_expand_word(w)) {
      Rat& slot = t.terms[ew];
      slot += co * ec;
      if (slot == 0) t.terms.erase(ew);
    }
  }
  return t;
}

LieWordSum coeff_Utilde(const std::vector<KClass>& multiset,
                        const StabilityCond& tau, const StabilityCond& tautilde) {
  size_t n = multiset.size();
  if (n == 0) throw InputError("Utilde needs a nonempty class multiset");

  // distinct-class list + the index multiset over it
  std::vector<KClass> classes = multiset;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  Word idx;
  for (const auto& a : multiset) {
    auto it = std::lower_bound(classes.begin(), classes.end(), a);
    idx.push_back(static_cast<int>(it - classes.begin()));
  }
  std::sort(idx.begin(), idx.end());

  // P = sum over distinct orderings w of U(w) * w
  TensorWordSum P;
  P.classes = classes;
  do {
    ClassSeq seq;
    for (int i : idx) seq.push_back(classes[static_cast<size_t>(i)]);
    Rat u = coeff_U(seq, tau, tautilde);
    if (u != 0) P.terms.emplace(idx, u);
  } while (std::next_permutation(idx.begin(), idx.end()));

  // primitivity: rho(P) = n * P, rho = left-bracketing expansion per word.
  // This certifies P lies in the free Lie algebra, so dividing by n yields a
  // bracket-word rewriting whose expansion recovers P exactly.
  TensorWordSum rhoP;
  rhoP.classes = classes;
  for (const auto& [w, co] : P.terms)
    for (const auto& [ew, ec] : dynkin_expand_word(w)) {
      Rat& slot = rhoP.terms[ew];
      slot += co * ec;
      if (slot == 0) rhoP.terms.erase(ew);
    }
  TensorWordSum nP;
  nP.classes = classes;
  for (const auto& [w, co] : P.terms) nP.terms.emplace(w, Rat(n) * co);
  if (!(rhoP == nP))
    throw CertifyError("wall-crossing transform is not Lie-rewritable: "
                       "primitivity check failed for a multiset of size " +
                       std::to_string(n));

  LieWordSum out;
  out.classes = classes;
  for (const auto& [w, co] : P.terms) out.terms.emplace(w, co / Rat(n));
  return out;
}

Rat coeff_Utilde_word(const ClassSeq& seq, const StabilityCond& tau,
                      const StabilityCond& tautilde) {
  LieWordSum l = coeff_Utilde(seq, tau, tautilde);
  // find the word matching seq's ordering
  Word w;
  for (const auto& a : seq) {
    auto it = std::lower_bound(l.classes.begin(), l.classes.end(), a);
    w.push_back(static_cast<int>(it - l.classes.begin()));
  }
  auto it = l.terms.find(w);
  return it == l.terms.end() ? Rat(0) : it->second;
}

std::string word_str(const TensorWordSum& t) {
  std::string out;
  for (const auto& [w, co] : t.terms) {
    if (!out.empty()) out += " + ";
    out += "(" + rat_str(co) + ")";
    for (int i : w) out += "." + kclass_str(t.classes[static_cast<size_t>(i)]);
  }
  return out.empty() ? "0" : out;
}

} // namespace ptcalc
