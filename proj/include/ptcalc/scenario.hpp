#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptcalc/quasipoly.hpp"
#include "ptcalc/ratgen.hpp"
#include "ptcalc/stability.hpp"
#include "ptcalc/vertexmodel.hpp"

namespace ptcalc {

// Scenario files: line-oriented text with [section] headers and key = value
// lines; '#' starts a comment.  Sections: [geometry], [vertex], [dt], [pt],
// [options], [queries].  The grammar is documented in the README; every
// parse error carries file:line plus the field path.

struct ScenarioQuery {
  enum class Kind { Coeffs, Wallcross, Ptgen, Expand, Verify };
  Kind kind = Kind::Coeffs;
  int line = 0; // source line, for error paths

  // coeffs
  std::vector<KClass> classes;
  std::string tau_spec;       // "omega" | "omega_alt" | "posbig" | "pair:<q>" | "pair_below:<q>"
  std::string tautilde_spec;

  // wallcross / ptgen / expand / verify
  CurveClass beta;
  bool has_beta = false;
  long long n = 0;
  bool has_n = false;
  long long nmax = -1; // -1 = use the [options] default

  // inline generating function for expand
  bool has_inline = false;
  GFTail inline_tail;
};

struct PtClassInfo {
  long long vanish = 0; // values vanish for n <= vanish
  Rat cutoff = 0;       // recursion applies for n > cutoff * (omega . beta)
  int order = 0;        // difference-equation order override; 0 = default
  // where the certified tail fit starts; the recursion can be valid earlier
  // than the quasi-polynomial regime (sub-class transients), so this may
  // exceed the cutoff bound.  Unset = the cutoff bound itself.
  bool has_tail_from = false;
  long long tail_from = 0;
};

struct ScenarioData {
  std::string path;
  std::string raw; // raw file bytes, hashed into reports

  VertexConfig vcfg; // carries the geometry model
  std::optional<std::vector<Rat>> omega_alt;

  long long window = 6;       // wall-crossing enumeration window
  long long default_nmax = 10;

  std::map<CurveClass, QuasiPoly> dt;              // sheaf-side input table
  std::map<CurveClass, PtClassInfo> ptinfo;
  std::map<std::pair<CurveClass, long long>, MElem> middle;
  std::string point_symbol;

  std::vector<ScenarioQuery> queries;
};

// trunc_override replaces the [vertex] trunc before any values are parsed
ScenarioData scenario_parse(const std::string& text, const std::string& path,
                            std::optional<int> trunc_override = {});
ScenarioData scenario_load(const std::string& path,
                           std::optional<int> trunc_override = {});

// stability condition named by a query spec string
StabilityCond stability_from_spec(const ScenarioData& s, const std::string& spec,
                                  const std::string& where);

// shared literal parsers (exposed for tests)
CurveClass parse_curve_class(const std::string& text, int rank, const std::string& where);
KClass parse_kclass(const std::string& text, int rank, const std::string& where);
// polynomial expression over the named variables, exact rational coefficients
RatPoly parse_poly_expr(const std::string& text, const std::vector<std::string>& vars,
                        const std::string& where);

} // namespace ptcalc
