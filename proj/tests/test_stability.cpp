#include "doctest.h"
#include "oracles.hpp"

using namespace ptcalc;

TEST_CASE("slope values are totally ordered with infinitesimal refinement") {
  SlopeVal below = slope_fin(Rat(1), -1);
  SlopeVal at = slope_fin(Rat(1));
  SlopeVal above = slope_fin(Rat(1), 1);
  SlopeVal two = slope_fin(Rat(2));
  SlopeVal big = slope_posbig();
  SlopeVal inf = slope_inf();

  CHECK(below < at);
  CHECK(at < above);
  CHECK(above < two); // the infinitesimal never reaches the next rational
  CHECK(two < big);
  CHECK(big < inf);
  CHECK(at == slope_fin(Rat(1)));
  CHECK(at <= at);
  CHECK(inf >= big);
  CHECK_FALSE(inf < inf);
}

TEST_CASE("sheaf slopes") {
  std::vector<Rat> omega = {Rat(1), Rat(2)};
  auto m = slope_mu({1, 1}, 6, omega);
  CHECK_FALSE(m.is_inf);
  CHECK(m.q == Rat(2));
  auto z = slope_mu({0, 0}, 3, omega);
  CHECK(z.is_inf);
  // outside the cone: zero class with n <= 0
  CHECK_THROWS_AS(slope_mu({0, 0}, 0, omega), InputError);
  CHECK_THROWS_AS(slope_mu({1, -1}, 0, omega), InputError);
}

TEST_CASE("cone membership") {
  CHECK(sheaf_in_cone({1, 0}, -5));
  CHECK(sheaf_in_cone({0, 0}, 1));
  CHECK_FALSE(sheaf_in_cone({0, 0}, 0));
  CHECK_FALSE(sheaf_in_cone({0, 0}, -1));
  CHECK_FALSE(sheaf_in_cone({-1, 2}, 0));
}

TEST_CASE("sheaf stability evaluates sheaf classes only") {
  StabilityCond tau = stab_sheaf({Rat(1), Rat(1)});
  CHECK(tau.eval(KClass{0, {1, 1}, 4}) == slope_fin(Rat(2)));
  CHECK(tau.eval(KClass{0, {0, 0}, 2}) == slope_inf());
  CHECK_THROWS_AS(tau.eval(KClass{1, {1, 0}, 0}), InputError);
}

TEST_CASE("pair stability sends pair classes to the wall constant") {
  StabilityCond tp = stab_pair({Rat(1)}, slope_posbig());
  CHECK(tp.eval(KClass{1, {1}, 7}) == slope_posbig());
  CHECK(tp.eval(KClass{0, {2}, 6}) == slope_fin(Rat(3)));

  StabilityCond tb = stab_pair({Rat(1)}, slope_fin(Rat(5) / 2, -1));
  CHECK(tb.eval(KClass{1, {3}, 0}) == slope_fin(Rat(5) / 2, -1));
  CHECK(tb.eval(KClass{1, {3}, 0}) < tb.eval(KClass{0, {2}, 5}));
}

TEST_CASE("weak stability seesaw holds on mixed samples") {
  std::vector<KClass> sample = {
      KClass{0, {1, 0}, 3},  KClass{0, {0, 1}, -2}, KClass{0, {1, 1}, 0},
      KClass{0, {0, 0}, 2},  KClass{1, {1, 0}, 1},  KClass{1, {0, 1}, 4},
      KClass{0, {2, 1}, -1},
  };
  auto w1 = check_weak_stability(stab_sheaf({Rat(1), Rat(2)}), sample);
  CHECK_FALSE(w1.has_value());
  auto w2 = check_weak_stability(stab_pair({Rat(2), Rat(1)}, slope_posbig()), sample);
  CHECK_FALSE(w2.has_value());
  auto w3 = check_weak_stability(stab_pair({Rat(1), Rat(1)}, slope_fin(Rat(7) / 3, -1)), sample);
  CHECK_FALSE(w3.has_value());
}

TEST_CASE("stability text forms are stable") {
  CHECK(slope_str(slope_fin(Rat(3) / 2)) == "3/2");
  CHECK(slope_str(slope_fin(Rat(2), -1)) == "2-eps");
  CHECK(slope_str(slope_posbig()) == "+big");
  CHECK(slope_str(slope_inf()) == "inf");
}
