#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ebro/decompose.hpp"
#include "ebro/exact.hpp"
#include "ebro/models/toy.hpp"

using namespace ebro;
using Catch::Approx;

namespace {

LinkFix toy_fix() {
  // min/max of the toy problem: d = 0, u21 = u22 = 0.5, h = 1, g = 4.5
  LinkFix f;
  f.d_bar = {0.0, 0.0, 0.0};
  f.u_star = {1.0, 0.5, 0.5, 1.0};
  f.nu_h = {1.0};
  f.nu_max = 4.5;
  return f;
}

}  // namespace

TEST_CASE("toy problem recomposes into g", "[decompose]") {
  const auto m = models::toy_decomposable();
  CHECK_NOTHROW(m.check_recomposition(100, 3, 1e-12));
  CHECK(m.g(std::vector<double>{0, 0, 0}, std::vector<double>{0, 0, 0, 0}) == 2.0);
  CHECK(m.space.focal_count() == 81);
  auto broken = m;
  broken.branches[0].own_index = {0};
  CHECK_THROWS_AS(broken.check_recomposition(), std::logic_error);
  auto wrong = m;
  wrong.reference = [](std::span<const double>, std::span<const double>) { return 0.0; };
  CHECK_THROWS_AS(wrong.check_recomposition(), std::logic_error);
}

TEST_CASE("link fixing recovers the toy min/max", "[decompose]") {
  const auto m = models::toy_decomposable();
  const auto fix = fix_links(m, GlobalSearchConfig::outer_defaults(), GlobalSearchConfig::inner_defaults());
  CHECK(fix.nu_max == Approx(4.5).margin(1e-6));
  REQUIRE(fix.nu_h.size() == 1);
  CHECK(fix.nu_h[0] == Approx(1.0).margin(1e-3));
  for (double d : fix.d_bar) CHECK(std::abs(d) <= 1e-3);
}

TEST_CASE("constrained extrema of f2 on the link manifold", "[decompose]") {
  const auto m = models::toy_decomposable();
  const auto fix = toy_fix();
  const auto cfg = GlobalSearchConfig::inner_defaults();
  // u32 in [0.5, 1]; with u21 + u22 = 1 the quadratic part lies in [-1, -0.5]
  const auto hi = constrained_extrema(m, fix.d_bar, 1.0, 0, CellIndex{2}, Sense::Maximize, cfg);
  const auto lo = constrained_extrema(m, fix.d_bar, 1.0, 0, CellIndex{2}, Sense::Minimize, cfg);
  REQUIRE(hi.feasible);
  REQUIRE(lo.feasible);
  CHECK(hi.value == Approx(2.5).margin(1e-4));
  CHECK(lo.value == Approx(1.5).margin(1e-4));
  CHECK(hi.violation < 1e-6);
  CHECK(hi.u_link[0] + hi.u_link[1] == Approx(1.0).margin(1e-6));
}

TEST_CASE("decomposed curve uses 6 max-side optimizations against 162", "[decompose]") {
  for (auto v : {models::ToyVariant::A, models::ToyVariant::B}) {
    const auto m = models::toy_decomposable(v);
    const auto dc = decomposed_curve(m, toy_fix(), {2.0, 3.0, 4.0, 4.6}, GlobalSearchConfig::inner_defaults());
    CHECK(dc.max_side_optimizations == 6);
    CHECK(dc.optimizations == 12);
    CHECK(2 * m.space.focal_count() == 162);
    CHECK(dc.branches.size() == 2);
    CHECK(dc.curve.points.back().bel == Approx(1.0).margin(1e-9));
    CHECK_NOTHROW(dc.curve.check());
  }
}

TEST_CASE("the two bpa variants give different curves", "[decompose]") {
  const std::vector<double> nus{3.0, 3.5};
  const auto a = decomposed_curve(models::toy_decomposable(models::ToyVariant::A), toy_fix(), nus,
                                  GlobalSearchConfig::inner_defaults());
  const auto b = decomposed_curve(models::toy_decomposable(models::ToyVariant::B), toy_fix(), nus,
                                  GlobalSearchConfig::inner_defaults());
  CHECK(a.curve.points[1].bel != Approx(b.curve.points[1].bel));
}

TEST_CASE("a single component reproduces the exact curve", "[decompose]") {
  const auto toy = models::toy_decomposable();
  DecomposableModel one;
  one.name = "whole";
  one.design_bounds = toy.design_bounds;
  one.space = toy.space;
  one.f1_design_index = {0, 1, 2};
  one.f1_uncertain_index = {0, 1, 2, 3};
  one.f1 = [](Span d, Span u, Span) { return models::toy_g(d, u); };
  one.reference = models::toy_g;
  LinkFix fix;
  fix.d_bar = {0.3, -0.2, 0.1};
  const std::vector<double> nus{2.0, 2.5, 3.0, 3.5, 4.0};
  const auto cfg = GlobalSearchConfig::inner_defaults();
  const auto dc = decomposed_curve(one, fix, nus, cfg);
  const auto ex = exact_bel_pl(one.monolithic(), fix.d_bar, one.space, nus, cfg);
  REQUIRE(dc.curve.points.size() == ex.curve.points.size());
  for (std::size_t k = 0; k < nus.size(); ++k) {
    CHECK(dc.curve.points[k].bel == Approx(ex.curve.points[k].bel).margin(1e-12));
    CHECK(dc.curve.points[k].pl == Approx(ex.curve.points[k].pl).margin(1e-12));
  }
  CHECK(dc.optimizations == ex.optimizations);
}
