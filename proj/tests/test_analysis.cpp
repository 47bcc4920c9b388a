#include <doctest.h>

#include <cmath>
#include <limits>

#include "tricav/analysis.hpp"

using namespace tricav;
using namespace tricav::analysis;
using doctest::Approx;

namespace {

ThreeSlabSystem thin_sic() {
  ThreeSlabSystem s;
  s.materials = {Material::sic(), Material::sic(), Material::sic()};
  s.geometry = {1e-6, 0.5e-6, 1e-6, 1e-6, 1e-6};
  s.T1 = 250.0;
  s.T2 = 300.0;
  s.T3 = 350.0;
  s.Te = 300.0;
  return s;
}

ThreeSlabSystem sapphire() {
  ThreeSlabSystem s;
  s.materials = {Material::sapphire_like(), Material::sapphire_like(), Material::sapphire_like()};
  const double inf = std::numeric_limits<double>::infinity();
  s.geometry = {inf, 1e-6, inf, 2e-6, 3e-6};
  return s;
}

const Accuracy coarse = Accuracy::with(1e-3);

}  // namespace

TEST_CASE("equilibrium temperature at global equilibrium") {
  ThreeSlabSystem s = thin_sic();
  s.T1 = s.T3 = s.Te = 300.0;
  CHECK(equilibrium_temperature(s, {}, 1e-3, coarse).T2 == Approx(300.0).epsilon(1e-5));
}

TEST_CASE("equilibrium temperature lies strictly between the reservoirs") {
  const ThreeSlabSystem s = thin_sic();
  const auto r = equilibrium_temperature(s, {}, 0.05, coarse);
  CHECK(r.T2 > 250.0);
  CHECK(r.T2 < 350.0);
  CHECK(r.T_lo < r.T2);
  CHECK(r.T2 < r.T_hi);
  CHECK_THROWS_AS(equilibrium_temperature(s, std::pair{100.0, 200.0}, 0.05, coarse), SolverError);
}

TEST_CASE("T2 profile rows carry failures instead of aborting") {
  const ThreeSlabSystem s = thin_sic();
  // The second point would push slab 2 into slab 3.
  const auto rows = teq_profile(s, {0.0, 5e-6}, 0.5, coarse);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].d12 == Approx(1e-6));
  CHECK(!rows[1].error.empty());
  CHECK(std::isnan(rows[1].T2));
}

TEST_CASE("nonadditivity") {
  ThreeSlabSystem s = sapphire();
  s.materials[1] = Material::vacuum();
  CHECK(std::abs(nonadditivity(s, 300.0, Accuracy::with(1e-8))) <= 1e-6);
  const double v = nonadditivity(sapphire(), 300.0, Accuracy::with(1e-6));
  CHECK(v > 0.0);
  CHECK(v < 0.5);
}

TEST_CASE("nonadditivity map ordering and maximum search determinism") {
  const ThreeSlabSystem s = sapphire();
  const auto pts = nonadditivity_map(s, {1e-6, 2e-6}, {1e-6, 3e-6, 5e-6}, 300.0, coarse);
  REQUIRE(pts.size() == 6);
  CHECK(pts[1].d12 == 1e-6);
  CHECK(pts[1].d23 == 3e-6);
  CHECK(pts[3].d12 == 2e-6);
  for (const auto& p : pts) CHECK(p.value == Approx((p.P_additive - p.P) / p.P).epsilon(1e-12));

  MaxSearch search;
  search.d_min = 0.3e-6;
  search.d_max = 30e-6;
  search.grid = 4;
  search.refine_rounds = 1;
  search.log_tol = 0.05;
  const auto a = nonadditivity_max(s, 1e-6, 300.0, search, coarse);
  const auto b = nonadditivity_max(s, 1e-6, 300.0, search, coarse);
  CHECK(a.value == b.value);
  CHECK(a.d12 == b.d12);
  CHECK(a.d23 == b.d23);
  CHECK(a.value > 0.05);
}

TEST_CASE("grids") {
  CHECK(Grid{1.0, 3.0, 3, false}.values() == std::vector<double>{1.0, 2.0, 3.0});
  const auto lg = Grid{1e-8, 1e-4, 5, true}.values();
  CHECK(lg[2] == Approx(1e-6).epsilon(1e-12));
  CHECK(Grid{2.0, 2.0, 1, false}.values() == std::vector<double>{2.0});
  CHECK_THROWS_AS(Grid({1.0, 2.0, 1, false}).validate(), ValidationError);
  CHECK_THROWS_AS(Grid({-1.0, 2.0, 3, true}).validate(), ValidationError);
}

TEST_CASE("with_parameter") {
  const ThreeSlabSystem s = thin_sic();
  const auto m = with_parameter(s, "z2_m", 0.25e-6);
  CHECK(m.geometry.d12 == Approx(1.25e-6));
  CHECK(m.geometry.d23 == Approx(0.75e-6));
  const auto f = with_parameter(s, "d12_fixed_D_m", 0.4e-6);
  CHECK(f.geometry.d12 + f.geometry.d23 == Approx(2e-6));
  CHECK(with_parameter(s, "T3_K", 123.0).T3 == 123.0);
  CHECK_THROWS_AS(with_parameter(s, "no_such_parameter", 1.0), ValidationError);
}

TEST_CASE("pressure sweeps") {
  const ThreeSlabSystem s = sapphire();
  SweepSpec one{"d12_m", {2e-6, 2e-6, 1, false}, "pressure_eq"};
  const auto t1 = sweep(one, s, coarse);
  REQUIRE(t1.rows.size() == 1);
  CHECK(t1.rows[0].values[0] == pressure_eq_slab1(s, s.T1, coarse));

  SweepSpec fwd{"d12_m", {1e-6, 3e-6, 3, false}, "pressure_additive"};
  SweepSpec rev{"d12_m", {3e-6, 1e-6, 3, false}, "pressure_additive"};
  const auto a = sweep(fwd, s, coarse);
  const auto b = sweep(rev, s, coarse);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.columns == sweep_columns("pressure_additive"));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.rows[i].parameter == Approx(b.rows[2 - i].parameter));
    for (std::size_t j = 0; j < a.rows[i].values.size(); ++j)
      CHECK(a.rows[i].values[j] == Approx(b.rows[2 - i].values[j]).epsilon(1e-12));
  }
  // Larger gap, weaker attraction.
  CHECK(std::abs(a.rows[0].values[0]) > std::abs(a.rows[2].values[0]));
  const auto again = sweep(fwd, s, coarse);
  for (std::size_t i = 0; i < 3; ++i) CHECK(again.rows[i].values == a.rows[i].values);

  SweepSpec bad{"d12_m", {1e-6, 3e-6, 2, false}, "no_such_observable"};
  CHECK_THROWS_AS(sweep(bad, s, coarse), ValidationError);
}
