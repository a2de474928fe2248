#pragma once

#include <map>
#include <set>

#include "ptcalc/classlat.hpp"
#include "ptcalc/melem.hpp"
#include "ptcalc/poly.hpp"

namespace ptcalc {

// Desk-scale graded operator calculus.  Elements are finite sums of terms
//     coeff * (commutative monomial in named base symbols) * t^m
// carrying a class label (d, beta, n).  t tracks the one-parameter shift
// operator D (multiplication by t), R is the lowering operator with
// [R, D] = c * id where c is the pairing constant of the term's label, and
// the state-field assignment sends a pair of degree-0 terms to a finite
// z-series whose coefficients are weight-table polynomials evaluated at the
// labels' n-components.

struct BaseSymbol {
  std::string name;
  int hdeg = 0;   // homological degree of the symbol
  KClass label;   // intrinsic class of the bare symbol
};

// weight-table key ingredient: class modulo its n-component
struct ClassKey {
  int d = 0;
  CurveClass beta;
  bool operator<(const ClassKey& o) const {
    if (d != o.d) return d < o.d;
    return beta < o.beta;
  }
  bool operator==(const ClassKey& o) const { return d == o.d && beta == o.beta; }
};
ClassKey class_key(const KClass& a);
std::string classkey_str(const ClassKey& k);

struct VertexConfig {
  GeometryModel geom;
  int trunc_n = 0;                       // coefficient-ring truncation
  enum Parity { ParityChi = 0, ParityEven = 1 };
  Parity parity = ParityChi;             // sign rule for the merge product
  Rat eta_scale = 1;                     // scales the pairing constant -d
  std::map<std::string, BaseSymbol> symbols;

  // w_i tables, i >= 1 (w_0 is identically 1).  Keys are unordered pairs of
  // ClassKey; the stored polynomial takes (n1, n2) in the canonical key
  // order.  A wildcard entry (per i) backs any pair without an exact match.
  std::map<int, std::map<std::pair<ClassKey, ClassKey>, RatPoly>> weights;
  std::map<int, RatPoly> weight_wildcard;

  const BaseSymbol& symbol(const std::string& name) const;
  // evaluated weight w_i(a, b) at the labels' n-components
  Rat weight_value(int i, const KClass& a, const KClass& b) const;
  // pairing constant of a label; the e-eta cap pairing is rank-like: -d,
  // scaled by eta_scale
  Rat pairing_const(const KClass& a) const;
  void validate() const;
};

struct VTermKey {
  std::vector<std::string> mono; // sorted symbol names, with multiplicity
  int tdeg = 0;
  KClass label;

  bool operator<(const VTermKey& o) const {
    if (mono != o.mono) return mono < o.mono;
    if (tdeg != o.tdeg) return tdeg < o.tdeg;
    return label < o.label;
  }
  bool operator==(const VTermKey& o) const {
    return mono == o.mono && tdeg == o.tdeg && label == o.label;
  }
};

struct ModeElement {
  int trunc_n = 0;
  std::map<VTermKey, RElem> terms; // coefficients never zero

  ModeElement() = default;
  explicit ModeElement(int tn) : trunc_n(tn) {}
  bool is_zero() const { return terms.empty(); }
  bool operator==(const ModeElement& o) const {
    return trunc_n == o.trunc_n && terms == o.terms;
  }
};

ModeElement velem_zero(const VertexConfig& cfg);
// bare registered symbol with its intrinsic label
ModeElement velem_symbol(const VertexConfig& cfg, const std::string& name);
// symbol with an explicit label (transferred values carry the class they
// arrived at, not the symbol's intrinsic one)
ModeElement velem_symbol_at(const VertexConfig& cfg, const std::string& name,
                            const KClass& label);
void velem_add_term(ModeElement& u, const VTermKey& key, const RElem& coeff);
ModeElement operator+(const ModeElement& a, const ModeElement& b);
ModeElement operator-(const ModeElement& a, const ModeElement& b);
ModeElement operator-(const ModeElement& a);
ModeElement operator*(const Rat& r, const ModeElement& a);
ModeElement operator*(const RElem& r, const ModeElement& a);

int term_base_hdeg(const VertexConfig& cfg, const VTermKey& key); // monomial part only
int term_hdeg(const VertexConfig& cfg, const VTermKey& key);      // + 2*tdeg

// shift operator: multiply by t (raises tdeg, hdeg by 2)
ModeElement op_D(const ModeElement& u);
// lowering operator: p t^m -> c(label) * m * p t^{m-1}
ModeElement op_R(const ModeElement& u, const VertexConfig& cfg);

// projection to the kernel of R along the image of D, via the finite
// operator sum  sum_k 1/(k! (-c)^k) D^k R^k ; needs c(label) != 0 on every
// term (pair-type labels)
ModeElement proj_e0(const ModeElement& u, const VertexConfig& cfg);
// complementary split u = kernel_part + image_part (t-degree 0 vs >= 1);
// this is the unique decomposition the projector realizes
ModeElement kernel_part(const ModeElement& u);
ModeElement image_part(const ModeElement& u);

// full mode series of the state-field assignment: k -> u_k(v) (negative k
// allowed).  The weight table describes the series for canonically ordered
// sheaf-sheaf term pairs (ascending by label, then monomial); the reverse
// orientation is the skew reflection (-1)^{hh'} e^{zD} B(-z), so the induced
// bracket on shift-free classes is antisymmetric up to shifts.  For reflected
// pairs the e^{zD} tail is cut so that modes k >= -2 stay exact; deeper
// negative modes are not represented.
std::map<long long, ModeElement> mode_series(const ModeElement& u, const ModeElement& v,
                                             const VertexConfig& cfg);
// single mode u_k(v)
ModeElement mode_product(const ModeElement& u, const ModeElement& v, long long k,
                         const VertexConfig& cfg);

// representative bracket on kernel parts: u_0(v) reduced mod image of D
ModeElement borcherds_bracket(const ModeElement& u, const ModeElement& v,
                              const VertexConfig& cfg);

// lifted brackets; dispatch requires every term of an argument to share one
// d-flag.  (d_u, d_v) = (0,0): u_0(v); (1,0): sum_k ((-1)^k/k!) D^k u_k(v);
// (0,1): minus the (1,0) form with the arguments swapped.
ModeElement lifted_bracket(const ModeElement& u, const ModeElement& v,
                           const VertexConfig& cfg);
// general-constants form sum_k (1/k!) (-c_u / c_uv)^k D^k u_k(v); requires
// uniform labels and c_uv != 0
ModeElement lifted_bracket_general(const ModeElement& u, const ModeElement& v,
                                   const VertexConfig& cfg);

// bridges to the plain symbol module.  Backward: term keys are rendered as
// canonical strings ("A*B@t2"), the labels dropped (callers track them).
// Forward: rendered monomial strings parse back to term keys (every factor
// must be a registered symbol), so transferred values round-trip.
ModeElement velem_from_melem(const VertexConfig& cfg, const MElem& m, const KClass& label);
MElem melem_from_velem(const ModeElement& u);
std::string vterm_render(const VTermKey& key);

std::string velem_str(const ModeElement& u);

} // namespace ptcalc
