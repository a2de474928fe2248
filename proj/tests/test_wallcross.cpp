#include "doctest.h"

#include <sstream>

#include "ptcalc/scenario.hpp"
#include "ptcalc/wallcross.hpp"

using namespace ptcalc;
using doctest::Contains;

namespace {

// rank-2 geometry with two polarizations; the (1,1) class splits as
// (1,0) + (0,1) and the two pieces change slope order between the walls
const char* kRank2 = R"([geometry]
rank = 2
c1 = (1,1)
omega = (1,1)
omega_alt = (2,1)
ample = (1,1)

[vertex]
trunc = 0
parity = chi
eta_scale = 1
symbol = A hdeg=2 label=(0;1,0;0)
symbol = B hdeg=2 label=(0;0,1;0)
symbol = D hdeg=2 label=(0;1,1;0)
w[1]((0;1,0),(0;0,1)) = 2
w[1](*,*) = 1
w[2](*,*) = 0

[dt]
dt (0,0) 0/1 = A:(0)
dt (1,0) 0/1 = A:(1)
dt (0,1) 0/1 = B:(1)
dt (1,1) 0/1 = D:(n+1)

[options]
window = 6
)";

// rank-1 geometry, irreducible class, period-2 input table
const char* kFano = R"([geometry]
rank = 1
c1 = (1)
omega = (1)
omega_alt = (3)
ample = (2)

[vertex]
trunc = 2
parity = chi
eta_scale = 1
symbol = A hdeg=2 label=(0;1;0)
symbol = P hdeg=0 label=(1;0;0)
point_symbol = P
w[1](*,*) = 1
w[2](*,*) = 0

[dt]
dt (0) 0/1 = A:(0)
dt (1) 0/2 = A:(n^2+2)
dt (1) 1/2 = A:(n)

[pt]
vanish (1) = 0
cutoff (1) = 0
order (1) = 7

[options]
window = 6
)";

// splittable class with explicit middle values feeding the recursion
const char* kSplit2Head = R"([geometry]
rank = 1
c1 = (1)
omega = (1)
ample = (1)

[vertex]
trunc = 2
parity = chi
eta_scale = 1
symbol = A hdeg=2 label=(0;1;0)
symbol = P hdeg=0 label=(1;0;0)
point_symbol = P
w[1](*,*) = 1
w[2](*,*) = n1+n2
w[3](*,*) = 0
w[4](*,*) = 0

[dt]
dt (0) 0/1 = A:(0)
dt (1) 0/1 = A:(1)
dt (2) 0/1 = A:(n)

[pt]
vanish (1) = 0
cutoff (1) = 2
middle (1) 1 = A*P:(1)
)";

const char* kSplit2Tail = R"(vanish (2) = 0
cutoff (2) = 0
order (2) = 8
tailfrom (2) = 6

[options]
window = 6
)";

ScenarioData split2_with_middle2(const std::string& value) {
  return scenario_parse(std::string(kSplit2Head) + "middle (1) 2 = " + value + "\n" +
                            kSplit2Tail,
                        "split2.scn");
}

} // namespace

TEST_CASE("dt_value reads the residue-keyed input table") {
  ScenarioData s = scenario_parse(kFano, "fano.scn");
  CHECK(melem_str(dt_value(s, {1}, 4)) == "(18)*A");   // even residue: n^2+2
  CHECK(melem_str(dt_value(s, {1}, 3)) == "(3)*A");    // odd residue: n
  CHECK(dt_value(s, {0}, 5).is_zero());
  CHECK_THROWS_WITH_AS(dt_value(s, {2}, 1), Contains("no dt entry for class (2)"),
                       ConfigError);
}

TEST_CASE("re-expanding at the same polarization is the identity") {
  ScenarioData s = scenario_parse(kRank2, "r2.scn");
  s.omega_alt = s.vcfg.geom.omega;
  for (long long n = 0; n <= 3; ++n) {
    CAPTURE(n);
    CHECK(dt_wallcross(s, {1, 1}, n, s.window) == dt_value(s, {1, 1}, n));
  }
}

TEST_CASE("crossing to the second polarization turns on a product term") {
  ScenarioData s = scenario_parse(kRank2, "r2.scn");
  // at n = 0 the two pieces never flip slope order, so nothing changes
  CHECK(dt_wallcross(s, {1, 1}, 0, s.window) == dt_value(s, {1, 1}, 0));
  // at n = 3 the (1,0)+(0,1) decompositions contribute -1 times the A,B product
  MElem want = melem_basis(0, "A*B", Rat(-1)) + melem_basis(0, "D", Rat(4));
  CHECK(dt_wallcross(s, {1, 1}, 3, s.window) == want);

  CHECK_THROWS_WITH_AS(dt_wallcross(s, {1, 1}, 3, 0), Contains("window"), ConfigError);
  CHECK_THROWS_WITH_AS(dt_wallcross(s, {-1, 1}, 3, 6), Contains("effective"), InputError);
}

TEST_CASE("a contributing decomposition on the window edge aborts") {
  ScenarioData s = scenario_parse(kRank2, "r2.scn");
  // the (2,1) summand-level assignment sits exactly on a window of 2
  CHECK_THROWS_WITH_AS(dt_wallcross(s, {1, 1}, 3, 2), Contains("window too small"),
                       ConfigError);
}

TEST_CASE("pair values: vanishing region, middle table, recursion") {
  ScenarioData s = split2_with_middle2("A*P:(2+s)");
  PtEngine e(s);
  // class (1): vanishes at n <= 0, explicit middles at 1 and 2, recursion above
  CHECK(pt_value(e, {1}, 0).is_zero());
  CHECK(pt_value(e, {1}, -3).is_zero());
  CHECK(melem_str(pt_value(e, {1}, 1)) == "(1)*A*P");
  RElem two_plus_s = relem_scalar(2, Rat(2)) + relem_spow(2, 1);
  CHECK(pt_value(e, {1}, 2) == melem_basis(2, "A*P", two_plus_s));

  // a hole in the middle table is a configuration error, not a zero
  ScenarioData s2 = scenario_parse(std::string(kSplit2Head) + kSplit2Tail, "s2.scn");
  PtEngine e2(s2);
  CHECK_THROWS_WITH_AS(pt_value(e2, {1}, 2), Contains("recursion not applicable"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(pt_value(e2, {-1}, 2), Contains("effective"), InputError);
  // class (3) has no [pt] parameters at all
  CHECK_THROWS_WITH_AS(pt_value(e2, {3}, 2), Contains("no [pt] parameters"), ConfigError);
}

TEST_CASE("middle values feed the recursion of larger classes") {
  ScenarioData good = split2_with_middle2("A*P:(2+s)");
  ScenarioData bad = split2_with_middle2("A*P:(999)");
  PtEngine eg(good), eb(bad);
  // the (2), n = 6 decompositions contain a pair piece (1) at n = 2
  CHECK(pt_value(eg, {2}, 6) != pt_value(eb, {2}, 6));
}

TEST_CASE("recursion identity verifies on the irreducible class") {
  ScenarioData s = scenario_parse(kFano, "fano.scn");
  PtEngine e(s);
  std::string msg = verify_recursion_identity(e, {1}, 4);
  CHECK(msg.find("identity holds at (1;1;4)") != std::string::npos);
  CHECK(msg.find("(18)*A*P") != std::string::npos);
  // below the recursion regime there is nothing to verify
  CHECK_THROWS_WITH_AS(verify_recursion_identity(e, {1}, 0),
                       Contains("needs the recursion regime"), ConfigError);
}

TEST_CASE("a poisoned cache is caught by the identity check") {
  ScenarioData s = scenario_parse(kFano, "fano.scn");
  PtEngine e(s);
  e.memo[{CurveClass{1}, 4}] = melem_basis(2, "A*P", Rat(7));
  CHECK_THROWS_WITH_AS(verify_recursion_identity(e, {1}, 4),
                       Contains("recursion identity fails"), CertifyError);
}

TEST_CASE("memoized and unmemoized runs agree") {
  ScenarioData s = split2_with_middle2("A*P:(2+s)");
  PtEngine fast(s, true), slow(s, false);
  for (long long n = 1; n <= 7; ++n) {
    CAPTURE(n);
    CHECK(pt_value(fast, {2}, n) == pt_value(slow, {2}, n));
  }
  CHECK(fast.memo.size() > 0);
  CHECK(slow.memo.empty());
}

TEST_CASE("the certified series reproduces the recursion values") {
  ScenarioData s = scenario_parse(kFano, "fano.scn");
  PtEngine e(s);
  PtSeriesResult r = pt_series(e, {1});
  CHECK(r.vanish_bound == 0);
  for (long long n = 0; n <= 20; ++n) {
    CAPTURE(n);
    CHECK(gf_coeff(r.gf, n) == pt_value(e, {1}, n));
  }
  // in the tail regime the quasi-polynomial is the value itself
  for (long long n = r.tail_start; n <= r.tail_start + 9; ++n) {
    CAPTURE(n);
    CHECK(qp_eval(r.tail, n) == pt_value(e, {1}, n));
  }
}

TEST_CASE("an undersized difference order fails certification") {
  std::string text = kFano;
  auto pos = text.find("order (1) = 7");
  REQUIRE(pos != std::string::npos);
  // the tail has degree 2 per residue, so order 2 cannot fit it
  text.replace(pos, 13, "order (1) = 2");
  ScenarioData s = scenario_parse(text, "fano3.scn");
  PtEngine e(s);
  CHECK_THROWS_WITH_AS(pt_series(e, {1}),
                       Contains("difference check fails on the window starting at"),
                       CertifyError);
}
