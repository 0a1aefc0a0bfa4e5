#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ebro/errors.hpp"
#include "ebro/evidence.hpp"
#include "ebro/exact.hpp"
#include "ebro/models/benchmarks.hpp"
#include "oracles.hpp"

using namespace ebro;
using Catch::Approx;

namespace {

UncertainVariable mv1_variable(const std::string& name = "u") {
  return {name, {{-5, -4}, {-3, 0}, {1, 3}}, {0.1, 0.25, 0.65}};
}

}  // namespace

TEST_CASE("bpa axioms are enforced", "[evidence]") {
  CHECK_NOTHROW(UncertainSpace({mv1_variable()}));
  CHECK_THROWS_AS(UncertainSpace({{"a", {{0, 1}, {1, 2}}, {0.5, 0.6}}}), InvalidSpace);
  CHECK_THROWS_AS(UncertainSpace({{"a", {{0, 1}, {1, 2}}, {1.0, 0.0}}}), InvalidSpace);
  CHECK_THROWS_AS(UncertainSpace({{"a", {{1, 0}}, {1.0}}}), InvalidSpace);
  CHECK_THROWS_AS(UncertainSpace({{"a", {{0, 1}}, {0.5, 0.5}}}), InvalidSpace);
  CHECK_THROWS_AS(UncertainSpace(std::vector<UncertainVariable>{}), InvalidSpace);
}

TEST_CASE("overlapping intervals are allowed", "[evidence]") {
  UncertainSpace s({{"rho", {{0.1, 0.2}, {0.25, 0.3}, {0.1, 0.3}}, {0.5, 0.35, 0.15}}});
  CHECK(s.focal_count() == 3);
}

TEST_CASE("focal elements enumerate the product with the last variable fastest", "[evidence]") {
  UncertainSpace s({mv1_variable("a"), {"b", {{0, 1}, {2, 3}}, {0.4, 0.6}}});
  const auto fe = build_focal_elements(s);
  REQUIRE(fe.size() == 6);
  CHECK(fe[0].index == CellIndex{0, 0});
  CHECK(fe[1].index == CellIndex{0, 1});
  CHECK(fe[2].index == CellIndex{1, 0});
  CHECK(fe[5].bpa == Approx(0.65 * 0.6));
  double total = 0.0;
  for (std::size_t k = 0; k < fe.size(); ++k) {
    total += fe[k].bpa;
    CHECK(linear_index(s, fe[k].index) == k);
  }
  CHECK(total == Approx(1.0).margin(1e-12));
}

TEST_CASE("unit hypercube cells are width-proportional", "[evidence]") {
  UnitHypercubeMap map(UncertainSpace({mv1_variable()}));
  // widths 1, 3, 2 out of 6
  CHECK(map.boundary(0, 1) == Approx(1.0 / 6.0));
  CHECK(map.boundary(0, 2) == Approx(4.0 / 6.0));
  CHECK(map.boundary(0, 3) == 1.0);
  CHECK(map.to_physical(0, 0, 0.0) == -5.0);
  CHECK(map.to_physical(0, 1, 2.5 / 6.0) == Approx(-1.5));
  CHECK(map.to_physical(0, 2, 1.0) == 3.0);
}

TEST_CASE("shared boundaries resolve to the upper cell except at the end", "[evidence]") {
  UnitHypercubeMap map(UncertainSpace({mv1_variable()}));
  CHECK(map.locate(0, 0.0) == 0);
  CHECK(map.locate(0, map.boundary(0, 1)) == 1);
  CHECK(map.locate(0, 1.0) == 2);
  // inside a box the closure maps onto the box's own cells
  CHECK(map.locate(0, map.boundary(0, 1), CellRange{0, 1}) == 0);
  CHECK(map.locate(0, map.boundary(0, 2), CellRange{1, 2}) == 1);
  CHECK_THROWS_AS(map.locate(0, 1.5), DomainError);
  CHECK_THROWS_AS(map.locate(0, 0.9, CellRange{0, 1}), DomainError);
}

TEST_CASE("physical and unit coordinates round-trip", "[evidence]") {
  UncertainSpace s({mv1_variable("a"), {"b", {{0.5, 0.6}, {0.65, 0.75}, {0.6, 0.8}, {0.8, 0.95}}, {0.2, 0.5, 0.2, 0.1}}});
  UnitHypercubeMap map(s);
  SpaceGenerator gen(7);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x{gen.uniform(0, 1), gen.uniform(0, 1)};
    const auto p = map.to_physical(x);
    const auto back = map.to_unit(p.u, p.cells);
    CHECK(std::abs(back[0] - x[0]) <= 1e-12);
    CHECK(std::abs(back[1] - x[1]) <= 1e-12);
  }
}

TEST_CASE("exact Bel and Pl match enumeration on MV1", "[evidence]") {
  const auto m = models::benchmark("MV1", 2);
  const std::vector<double> d{1.0, 1.0};
  const std::vector<double> nus{5, 16, 20, 25, 34, 41, 50};
  const auto r = exact_bel_pl(m, d, nus, GlobalSearchConfig::inner_defaults());
  CHECK(r.optimizations == 18);
  const auto vars = oracle_mv1_space(2);
  for (std::size_t k = 0; k < nus.size(); ++k) {
    const auto o = separable_bel_pl(vars, d, nus[k], mv1_term);
    CHECK(r.curve.points[k].bel == Approx(o.bel).margin(1e-12));
    CHECK(r.curve.points[k].pl == Approx(o.pl).margin(1e-12));
    CHECK(r.curve.points[k].bel == Approx(1.0 - r.pl_not_a[k]).margin(1e-12));
  }
  // nu = 20: only the corner cells reaching 25 or more miss Bel
  CHECK(r.curve.at(20)->bel == Approx(0.81));
  CHECK(r.curve.at(20)->pl == Approx(0.99));
}

TEST_CASE("a focal element whose extremum equals nu counts inside A", "[evidence]") {
  std::vector<FocalExtrema> e{{{0}, 0.4, 1.0, 2.0, {}, {}}, {{1}, 0.6, 2.0, 3.0, {}, {}}};
  const auto c = curve_from_extrema(e, {2.0});
  CHECK(c.points[0].bel == Approx(0.4));
  CHECK(c.points[0].pl == Approx(1.0));
}

TEST_CASE("curve CSV round-trips and keeps its invariants", "[evidence]") {
  BeliefCurve c;
  c.points = {{1.0, 0.1, 0.3, 0.0, 0.0, true}, {2.0, 0.25, 0.9, 0.01, 0.01, false}, {3.0, 1.0, 1.0, 0, 0, true}};
  std::stringstream ss;
  write_curve_csv(ss, c);
  CHECK(ss.str().rfind("nu,bel,pl,bel_err,pl_err,exact_flag\n", 0) == 0);
  const auto back = read_curve_csv(ss);
  REQUIRE(back.points.size() == 3);
  CHECK(back.points[1].pl == 0.9);
  CHECK_FALSE(back.points[1].exact);
  CHECK_NOTHROW(back.check());
  BeliefCurve bad = c;
  bad.points[2].bel = 0.05;
  CHECK_THROWS_AS(bad.check(), std::logic_error);
}
