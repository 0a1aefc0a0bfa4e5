#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ebro/ebt.hpp"
#include "ebro/exact.hpp"
#include "ebro/models/benchmarks.hpp"
#include "oracles.hpp"

using namespace ebro;
using Catch::Approx;

namespace {

std::vector<double> grid(double lo, double hi, int count) {
  std::vector<double> v;
  for (int k = 1; k <= count; ++k) v.push_back(lo + (hi - lo) * k / (count + 1.0));
  return v;
}

}  // namespace

TEST_CASE("splitting cuts an interval boundary and conserves mass", "[ebt]") {
  const auto m = models::benchmark("MV1", 2);
  UnitHypercubeMap map(m.space);
  const auto root = root_box(map);
  CHECK(root.bpa == Approx(1.0));
  const auto [l, r] = split_box(root, map);
  CHECK(l.bpa + r.bpa == Approx(1.0).margin(1e-15));
  CHECK(l.level == 1);
  CHECK(l.index == 0);
  CHECK(r.index == 1);
  // widths 1,3,2: the boundary nearest the midpoint is 4/6
  CHECK(l.cells[0] == CellRange{0, 2});
  CHECK(r.cells[0] == CellRange{2, 3});
  Box single;
  single.cells = {{1, 2}, {0, 1}};
  CHECK_THROWS_AS(split_box(single, map), CannotSplit);
}

TEST_CASE("EBT with full trust factor reproduces the enumeration oracle", "[ebt]") {
  for (const char* name : {"MV1", "MV2"}) {
    const auto m = models::benchmark(name, 2);
    const std::vector<double> d{2.0, 3.0};
    const auto thresholds = grid(0.0, std::string(name) == "MV1" ? 125.0 : 128.0, 9);
    EbtConfig c;
    c.tau_c = 1.0;
    c.filter_accuracy = 0.0;
    const auto run = approximate_curve(m, d, m.space, 0.0, 130.0, thresholds, c);
    const auto vars = oracle_mv1_space(2);
    for (double nu : thresholds) {
      const auto o = std::string(name) == "MV1" ? separable_bel_pl(vars, d, nu, mv1_term)
                                                : separable_bel_pl(vars, d, nu, mv2_term);
      const auto* p = run.curve.at(nu);
      REQUIRE(p != nullptr);
      CHECK(p->bel == Approx(o.bel).margin(1e-9));
      CHECK(p->pl == Approx(o.pl).margin(1e-9));
      CHECK(p->exact);
    }
    CHECK(run.curve.provenance.optimizations <= 2 * m.space.focal_count());
    CHECK_NOTHROW(run.curve.check());
  }
}

TEST_CASE("optimize mode without witnesses gives the same values", "[ebt]") {
  const auto m = models::benchmark("MV1", 2);
  const std::vector<double> d{1.0, 1.0};
  EbtConfig c;
  c.tau_c = 1.0;
  c.mode = EbtMode::Optimize;
  c.witness_decisions = false;
  const auto tree = build_tree(m, d, m.space, 20.0, c);
  CHECK(tree.bel == Approx(0.81).margin(1e-9));
  CHECK(tree.pl_a == Approx(0.99).margin(1e-9));
  CHECK(tree.filtered_mass == 0.0);
}

TEST_CASE("every generation conserves bpa mass", "[ebt]") {
  const auto m = models::benchmark("MV1", 3);
  const std::vector<double> d{1.0, 1.0, 1.0};
  EbtConfig c;
  c.tau_c = 0.9;
  c.filter_accuracy = 0.1;
  EbtEngine engine(m, d, m.space, c);
  int generations = 0;
  double worst = 0.0;
  engine.on_generation = [&](const std::vector<Box>& frontier, const std::vector<Box>& settled) {
    double total = 0.0;
    for (const auto& b : frontier) total += b.bpa;
    for (const auto& b : settled) total += b.bpa;
    worst = std::max(worst, std::abs(total - 1.0));
    ++generations;
  };
  engine.build(30.0);
  CHECK(generations > 0);
  CHECK(worst <= 1e-9);
}

TEST_CASE("filtering stays within its accuracy and error columns report it", "[ebt]") {
  const auto m = models::benchmark("MV1", 3);
  const std::vector<double> d{1.0, 1.0, 1.0};
  EbtConfig c;
  c.tau_c = 0.9;
  c.filter_accuracy = 0.1;
  c.filter_threshold = 0.02;
  const auto run = approximate_curve(m, d, m.space, 0.0, 75.0, {20.0, 40.0}, c);
  CHECK(run.curve.provenance.filtered_mass <= 0.1);
  CHECK(run.curve.provenance.filtered_mass > 0.0);
  for (const auto& p : run.curve.points) {
    CHECK(p.bel_err <= 0.1);
    CHECK(p.bel_err == Approx(run.curve.provenance.filtered_mass));
  }
  CHECK_NOTHROW(run.curve.check());
}

TEST_CASE("the root box is never filtered", "[ebt]") {
  const auto m = models::benchmark("MV1", 1);
  EbtConfig c;
  c.filter_accuracy = 0.5;
  c.filter_threshold = 2.0;
  const auto tree = build_tree(m, std::vector<double>{1.0}, m.space, 10.0, c);
  double optimized = 0.0;
  for (const auto& b : tree.boxes)
    if (b.status != BoxStatus::Filtered) optimized += b.bpa;
  CHECK(optimized > 0.0);
  CHECK(tree.filtered_mass < 0.5);
}

TEST_CASE("trust draws are reproducible and bpa-dependent", "[ebt]") {
  const auto m = models::benchmark("MV1", 4);
  const std::vector<double> d(4, 1.0);
  EbtConfig c;
  c.tau_c = 0.7;
  c.seed = 5;
  const auto a = build_tree(m, d, m.space, 40.0, c);
  const auto b = build_tree(m, d, m.space, 40.0, c);
  CHECK(a.bel == b.bel);
  CHECK(a.pl_a == b.pl_a);
  CHECK(a.provenance.optimizations == b.provenance.optimizations);
  CHECK(a.provenance.archive_decisions > 0);
  for (const auto& box : a.boxes)
    if (box.trusted) CHECK(box.bpa < 1.0 - c.tau_c);
}

TEST_CASE("refinement lowers the unverified mass to the trust budget", "[ebt]") {
  const auto m = models::benchmark("MV1", 4);
  const std::vector<double> d(4, 1.0);
  EbtConfig c;
  c.tau_c = 0.9;
  EbtEngine engine(m, d, m.space, c);
  engine.build(30.0);
  engine.refine({30.0, 60.0});
  for (double nu : {30.0, 60.0}) {
    const auto t = tally_boxes(engine.leaves(), nu);
    CHECK(t.unresolved <= 1e-9);
    CHECK(t.unverified <= 0.1 + 1e-9);
  }
  const auto curve = engine.curve(30.0, 0.0, 100.0, std::vector<double>{30.0, 60.0});
  CHECK_NOTHROW(curve.check());
}

TEST_CASE("refine_curve continues from stored boxes", "[ebt]") {
  const auto m = models::benchmark("MV2", 2);
  const std::vector<double> d{1.0, 1.0};
  EbtConfig c;
  c.tau_c = 1.0;
  auto run = approximate_curve(m, d, m.space, 0.0, 72.0, {}, c);
  const std::size_t before = run.curve.provenance.optimizations;
  const auto curve = refine_curve(m, d, m.space, {10.0, 50.0}, c, run.boxes, run.nu_bar, 0.0, 72.0);
  const auto vars = oracle_mv1_space(2);
  for (double nu : {10.0, 50.0}) {
    const auto o = separable_bel_pl(vars, d, nu, mv2_term);
    CHECK(curve.at(nu)->bel == Approx(o.bel).margin(1e-9));
    CHECK(curve.at(nu)->pl == Approx(o.pl).margin(1e-9));
  }
  CHECK(before > 0);
}
