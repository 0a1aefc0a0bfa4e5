#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "ebro/decompose.hpp"
#include "ebro/ebt.hpp"
#include "ebro/exact.hpp"
#include "ebro/models/benchmarks.hpp"
#include "oracles.hpp"

using namespace ebro;

namespace {

UncertainSpace to_space(const std::vector<OracleVariable>& vars) {
  std::vector<UncertainVariable> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    UncertainVariable v{"u" + std::to_string(i), {}, vars[i].bpa};
    for (const auto& c : vars[i].cells) v.intervals.push_back({c.lo, c.hi});
    out.push_back(std::move(v));
  }
  return UncertainSpace(std::move(out));
}

std::vector<OracleVariable> random_vars(SpaceGenerator& gen, std::size_t n) {
  std::vector<OracleVariable> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back(gen.variable(gen.index(1, 4)));
  return vars;
}

SystemModel random_mv1(const UncertainSpace& space) {
  SystemModel m;
  m.name = "random";
  m.space = space;
  m.function = models::mv1;
  m.design_bounds = {std::vector<double>(space.dimension(), 1.0), std::vector<double>(space.dimension(), 5.0)};
  return m;
}

GlobalSearchConfig quick_search() {
  auto c = GlobalSearchConfig::inner_defaults();
  c.max_evaluations = 400;
  return c;
}

}  // namespace

TEST_CASE("generated masses satisfy the bpa axioms and broken ones are rejected", "[properties]") {
  SpaceGenerator gen(101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto vars = random_vars(gen, gen.index(1, 4));
    CHECK_NOTHROW(to_space(vars));
    auto bad = vars;
    const std::size_t i = gen.index(0, bad.size() - 1);
    bad[i].bpa[0] += gen.uniform(0.01, 0.5);
    CHECK_THROWS_AS(to_space(bad), InvalidSpace);
    auto negative = vars;
    negative[i].bpa[0] = -0.1;
    CHECK_THROWS_AS(to_space(negative), InvalidSpace);
  }
}

TEST_CASE("exact curves are monotone, ordered and complementary", "[properties]") {
  SpaceGenerator gen(202);
  for (int trial = 0; trial < 12; ++trial) {
    const auto vars = random_vars(gen, gen.index(1, 3));
    const auto m = random_mv1(to_space(vars));
    std::vector<double> d;
    for (std::size_t i = 0; i < vars.size(); ++i) d.push_back(gen.uniform(1.0, 5.0));
    std::vector<double> nus;
    for (int k = 0; k < 8; ++k) nus.push_back(gen.uniform(0.0, 60.0 * vars.size()));
    const auto r = exact_bel_pl(m, d, nus, quick_search());
    const auto& pts = r.curve.points;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(pts[k].bel <= pts[k].pl + 1e-12);
      CHECK(std::abs(pts[k].bel - (1.0 - r.pl_not_a[k])) <= 1e-9);
      const auto oracle = separable_bel_pl(vars, d, pts[k].nu, mv1_term);
      CHECK(std::abs(pts[k].bel - oracle.bel) <= 1e-9);
      CHECK(std::abs(pts[k].pl - oracle.pl) <= 1e-9);
      if (k > 0) {
        CHECK(pts[k - 1].nu <= pts[k].nu);
        CHECK(pts[k - 1].bel <= pts[k].bel + 1e-12);
        CHECK(pts[k - 1].pl <= pts[k].pl + 1e-12);
      }
    }
  }
}

TEST_CASE("unit hypercube mapping round-trips on random spaces", "[properties]") {
  SpaceGenerator gen(303);
  for (int trial = 0; trial < 30; ++trial) {
    const auto space = to_space(random_vars(gen, gen.index(1, 5)));
    const UnitHypercubeMap map(space);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x;
      for (std::size_t i = 0; i < space.dimension(); ++i) x.push_back(gen.uniform(0.0, 1.0));
      const auto p = map.to_physical(x);
      const auto back = map.to_unit(p.u, p.cells);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-12);
    }
  }
}

TEST_CASE("tree generations conserve mass on random spaces", "[properties]") {
  SpaceGenerator gen(404);
  for (int trial = 0; trial < 6; ++trial) {
    const auto vars = random_vars(gen, gen.index(2, 3));
    const auto m = random_mv1(to_space(vars));
    std::vector<double> d;
    for (std::size_t i = 0; i < vars.size(); ++i) d.push_back(gen.uniform(1.0, 5.0));
    EbtConfig c;
    c.tau_c = gen.uniform(0.8, 1.0);
    c.filter_accuracy = gen.uniform(0.0, 0.15);
    c.seed = trial + 1;
    c.optimizer = quick_search();
    EbtEngine engine(m, d, m.space, c);
    double worst = 0.0;
    engine.on_generation = [&](const std::vector<Box>& frontier, const std::vector<Box>& settled) {
      double total = 0.0;
      for (const auto& b : frontier) total += b.bpa;
      for (const auto& b : settled) total += b.bpa;
      worst = std::max(worst, std::abs(total - 1.0));
    };
    const auto tree = engine.build(gen.uniform(5.0, 40.0 * vars.size()));
    CHECK(worst <= 1e-9);
    CHECK(tree.filtered_mass <= c.filter_accuracy + 1e-12);
    CHECK(tree.bel <= tree.pl_a + 1e-12);
  }
}

TEST_CASE("random two-component sums recompose", "[properties]") {
  SpaceGenerator gen(505);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = gen.uniform(-3, 3), b = gen.uniform(-3, 3), c = gen.uniform(-3, 3);
    DecomposableModel m;
    m.name = "random";
    m.design_bounds = {{-1.0, -1.0}, {1.0, 1.0}};
    m.space = to_space(random_vars(gen, 4));
    m.f1_design_index = {0};
    m.f1_uncertain_index = {0};
    m.f1 = [a](Span d, Span u, Span h) { return a * d[0] * u[0] + h[0] * h[0]; };
    Branch br;
    br.name = "f2";
    br.design_index = {1};
    br.link_index = {1, 2};
    br.own_index = {3};
    br.f = [b](Span d, Span u, Span u3) { return b * d[0] - u[0] * u[1] + std::sin(u3[0]); };
    br.h = [c](Span d, Span u) { return c * d[0] + u[0] - u[1]; };
    m.branches.push_back(br);
    m.reference = [a, c, b](Span d, Span u) {
      const double h = c * d[1] + u[1] - u[2];
      return a * d[0] * u[0] + h * h + b * d[1] - u[1] * u[2] + std::sin(u[3]);
    };
    CHECK_NOTHROW(m.check_recomposition(100, trial + 1, 1e-9));
  }
}
