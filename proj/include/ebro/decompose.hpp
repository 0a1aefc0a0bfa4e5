#ifndef EBRO_DECOMPOSE_HPP
#define EBRO_DECOMPOSE_HPP

// Weakly coupled budgets
//
//   g(d, u) = f1(d1, u1, h) + sum_i f_i(d_i, u_i, u3_i),   h_i = h_i(d_i, u_i)
//
// Branch i sees the rest of the system only through the scalar link h_i.
// With the links frozen at their value in the min/max solution, each branch
// is analysed over its own focal cells only, and Bel/Pl of g are recombined
// from per-branch extrema. The cost grows with the sum of the branch cell
// counts instead of their product.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebro/curve.hpp"
#include "ebro/errors.hpp"
#include "ebro/evidence.hpp"
#include "ebro/exact.hpp"
#include "ebro/minmax.hpp"
#include "ebro/model.hpp"
#include "ebro/optimize.hpp"
#include "ebro/random.hpp"

namespace ebro {

using Span = std::span<const double>;

struct Branch {
  std::string name;
  std::vector<std::size_t> design_index;  // d_i within d
  std::vector<std::size_t> link_index;    // u_i within u, seen only through h_i
  std::vector<std::size_t> own_index;     // u3_i within u
  std::function<double(Span d_i, Span u_i, Span u3_i)> f;
  std::function<double(Span d_i, Span u_i)> h;
};

struct DecomposableModel {
  std::string name;
  Bounds design_bounds;
  UncertainSpace space;
  std::vector<std::string> design_names;
  std::vector<std::size_t> f1_design_index;
  std::vector<std::size_t> f1_uncertain_index;
  /// f1(d1, u1, h) with h = (h_1, ..., h_{N_f - 1}).
  std::function<double(Span d1, Span u1, Span h)> f1;
  std::vector<Branch> branches;
  /// Optional closed-form g used by the recomposition check.
  ModelFunction reference;

  std::size_t component_count() const { return 1 + branches.size(); }

  static std::vector<double> pick(Span v, const std::vector<std::size_t>& index) {
    std::vector<double> out(index.size());
    for (std::size_t k = 0; k < index.size(); ++k) out[k] = v[index[k]];
    return out;
  }

  std::vector<double> links(Span d, Span u) const {
    std::vector<double> h(branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i)
      h[i] = branches[i].h(pick(d, branches[i].design_index), pick(u, branches[i].link_index));
    return h;
  }

  /// g evaluated through the links.
  double g(Span d, Span u) const {
    const auto h = links(d, u);
    double total = f1(pick(d, f1_design_index), pick(u, f1_uncertain_index), h);
    for (const auto& b : branches)
      total += b.f(pick(d, b.design_index), pick(u, b.link_index), pick(u, b.own_index));
    return total;
  }

  SystemModel monolithic() const {
    SystemModel m;
    m.name = name;
    m.design_bounds = design_bounds;
    m.space = space;
    m.design_names = design_names;
    m.function = [self = *this](Span d, Span u) { return self.g(d, u); };
    return m;
  }

  /// Throws std::logic_error when the index maps do not partition u or when
  /// g differs from `reference` by more than `tolerance` at a random point.
  void check_recomposition(std::size_t samples = 100, std::uint64_t seed = 1, double tolerance = 1e-9) const {
    std::vector<int> seen(space.dimension(), 0);
    for (auto i : f1_uncertain_index) ++seen.at(i);
    for (const auto& b : branches) {
      for (auto i : b.link_index) ++seen.at(i);
      for (auto i : b.own_index) ++seen.at(i);
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (seen[i] != 1)
        throw std::logic_error("uncertain variable " + std::to_string(i) + " is used by " +
                               std::to_string(seen[i]) + " components");
    if (!reference) return;
    Rng rng(seed);
    std::vector<double> d(design_bounds.size()), u(space.dimension());
    for (std::size_t s = 0; s < samples; ++s) {
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = rng.uniform(design_bounds.lower[i], design_bounds.upper[i]);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const auto h = space.variable(i).hull();
        u[i] = rng.uniform(h.lower, h.upper);
      }
      const double a = g(d, u), b = reference(d, u);
      if (!(std::abs(a - b) <= tolerance * std::max(1.0, std::abs(b))))
        throw std::logic_error("recomposition mismatch: " + format_number(a) + " vs " + format_number(b));
    }
  }
};

struct LinkFix {
  std::vector<double> d_bar;
  std::vector<double> u_star;
  std::vector<double> nu_h;
  double nu_max = 0.0;
  std::size_t evaluations = 0;
};

/// Freezes every link at its value in the min/max solution of g.
inline LinkFix fix_links(const DecomposableModel& model, const GlobalSearchConfig& outer,
                         const GlobalSearchConfig& inner) {
  const auto sol = solve_min_max(model.monolithic(), model.space, outer, inner);
  LinkFix fix;
  fix.d_bar = sol.best.d;
  fix.u_star = sol.best.u;
  fix.nu_h = model.links(fix.d_bar, fix.u_star);
  fix.nu_max = sol.best.f;
  fix.evaluations = sol.model_evaluations;
  return fix;
}

struct ConstrainedResult {
  double value = 0.0;
  std::vector<double> u_link;
  std::vector<double> u_own;
  double violation = 0.0;
  bool feasible = false;
  std::size_t evaluations = 0;
};

/// Extremum of f_i over one focal cell of u3_i with u_i on the manifold
/// h_i(d_i, u_i) = nu_h. u_i ranges over its own focal intervals (through
/// the unit-hypercube layout). The equality is enforced by a quadratic
/// penalty whose weight grows x10 from 1e2 to 1e8 until the violation is
/// below 1e-6; only the first weight runs a global search.
inline ConstrainedResult constrained_extrema(const DecomposableModel& model, Span d, double nu_h,
                                             std::size_t branch, const CellIndex& own_cell, Sense sense,
                                             const GlobalSearchConfig& config) {
  const auto& br = model.branches.at(branch);
  const auto d_i = DecomposableModel::pick(d, br.design_index);
  const std::size_t k = br.link_index.size();
  const std::size_t m = br.own_index.size();
  if (own_cell.size() != m) throw std::invalid_argument("own cell has the wrong dimension");
  UnitHypercubeMap link_map;
  if (k > 0) link_map = UnitHypercubeMap(model.space.subspace(br.link_index));

  SearchProblem problem;
  for (std::size_t j = 0; j < k; ++j) {
    problem.bounds.lower.push_back(0.0);
    problem.bounds.upper.push_back(1.0);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const auto& iv = model.space.variable(br.own_index[j]).intervals.at(own_cell[j]);
    problem.bounds.lower.push_back(iv.lower);
    problem.bounds.upper.push_back(iv.upper);
  }
  const double sign = sense == Sense::Maximize ? -1.0 : 1.0;
  double weight = 1e2;
  std::size_t evaluations = 0;

  auto split = [&](Span x, const CellIndex* cells, std::vector<double>& ul, std::vector<double>& uo) {
    ul.resize(k);
    uo.assign(x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
    if (k == 0) return;
    if (cells) link_map.to_physical_in_cells(x.first(k), *cells, ul);
    else ul = link_map.to_physical(x.first(k)).u;
  };
  auto penalized = [&](Span x, const CellIndex* cells) {
    std::vector<double> ul, uo;
    split(x, cells, ul, uo);
    ++evaluations;
    const double v = br.h(d_i, ul) - nu_h;
    return br.f(d_i, ul, uo) + sign * weight * v * v;
  };
  problem.objective = [&](Span x) { return penalized(x, nullptr); };
  if (k > 0) {
    problem.piece_of = [&](Span x) {
      CellIndex cells(k);
      for (std::size_t j = 0; j < k; ++j) cells[j] = link_map.locate(j, x[j]);
      SmoothPiece piece;
      auto [lo, hi] = link_map.cell_bounds(cells);
      piece.bounds = problem.bounds;
      std::copy(lo.begin(), lo.end(), piece.bounds.lower.begin());
      std::copy(hi.begin(), hi.end(), piece.bounds.upper.begin());
      piece.cells = cells;
      piece.objective = [&penalized, cells](Span y) { return penalized(y, &cells); };
      return piece;
    };
    problem.cell_of = [&](Span x) {
      CellIndex cells(k);
      for (std::size_t j = 0; j < k; ++j) cells[j] = link_map.locate(j, x[j]);
      return cells;
    };
  }

  ConstrainedResult out;
  auto finish = [&](const OptimizeResult& r) {
    const CellIndex* cells = r.cells.size() == k && k > 0 ? &r.cells : nullptr;
    split(r.x, cells, out.u_link, out.u_own);
    out.violation = std::abs(br.h(d_i, out.u_link) - nu_h);
    out.value = br.f(d_i, out.u_link, out.u_own);
  };

  auto r = global_optimize(problem, config, sense);
  finish(r);
  const std::size_t n = problem.bounds.size();
  while (out.violation >= 1e-6 && weight < 1e8) {
    weight *= 10.0;
    r = local_refine(problem, sense, r.x, std::max<std::size_t>(50 * (n + 1), config.budget(n) / 2));
    finish(r);
  }
  out.feasible = out.violation < 1e-6;
  out.evaluations = evaluations;
  return out;
}

struct BranchCell {
  CellIndex index;
  double bpa = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool feasible = true;
};

struct BranchTable {
  std::string name;
  std::vector<BranchCell> cells;
};

struct DecomposedCurve {
  std::vector<double> d_bar;
  std::vector<double> nu_h;
  std::vector<BranchTable> branches;  // f1 first
  BeliefCurve curve;
  std::size_t optimizations = 0;
  std::size_t max_side_optimizations = 0;
  std::size_t evaluations = 0;
  /// bpa of branch cells whose link manifold was not reachable.
  double infeasible_mass = 0.0;
};

/// Per-branch extrema with the links frozen, recombined over every tuple of
/// branch cells: a tuple adds the product of its bpa to Bel when the sum of
/// branch maxima is <= nu and to Pl when the sum of minima is. The bpa of the
/// link variables u_i does not enter the products.
inline DecomposedCurve decomposed_curve(const DecomposableModel& model, const LinkFix& fix,
                                        std::vector<double> thresholds, const GlobalSearchConfig& config) {
  DecomposedCurve out;
  out.d_bar = fix.d_bar;
  out.nu_h = fix.nu_h;
  if (fix.nu_h.size() != model.branches.size()) throw std::invalid_argument("one link value per branch");

  // f1 over the focal cells of u1, reusing the exhaustive per-element search
  {
    BranchTable table{"f1", {}};
    if (model.f1_uncertain_index.empty()) {
      const double v = model.f1(DecomposableModel::pick(fix.d_bar, model.f1_design_index), {}, fix.nu_h);
      table.cells.push_back({{}, 1.0, v, v, true});
    } else {
      SystemModel f1_model;
      f1_model.name = model.name + ":f1";
      f1_model.design_bounds = model.design_bounds;
      f1_model.space = model.space.subspace(model.f1_uncertain_index);
      const auto d_index = model.f1_design_index;
      const auto h = fix.nu_h;
      auto f1 = model.f1;
      f1_model.function = [=](Span d, Span u1) { return f1(DecomposableModel::pick(d, d_index), u1, h); };
      const auto elements = build_focal_elements(f1_model.space);
      for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto fe = focal_extrema(f1_model, fix.d_bar, elements[e], e, config, &out.evaluations);
        table.cells.push_back({fe.index, fe.bpa, fe.min, fe.max, true});
        out.optimizations += 2;
        out.max_side_optimizations += 1;
      }
    }
    out.branches.push_back(std::move(table));
  }

  for (std::size_t b = 0; b < model.branches.size(); ++b) {
    const auto& br = model.branches[b];
    BranchTable table{br.name, {}};
    std::vector<FocalElement> elements;
    if (br.own_index.empty()) elements.push_back({{}, {}, 1.0});
    else elements = build_focal_elements(model.space.subspace(br.own_index));
    for (std::size_t e = 0; e < elements.size(); ++e) {
      GlobalSearchConfig c = config;
      c.seed = derive_seed(config.seed, {b + 1, e, 1});
      const auto hi = constrained_extrema(model, fix.d_bar, fix.nu_h[b], b, elements[e].index, Sense::Maximize, c);
      c.seed = derive_seed(config.seed, {b + 1, e, 0});
      const auto lo = constrained_extrema(model, fix.d_bar, fix.nu_h[b], b, elements[e].index, Sense::Minimize, c);
      out.optimizations += 2;
      out.max_side_optimizations += 1;
      out.evaluations += hi.evaluations + lo.evaluations;
      const bool ok = hi.feasible && lo.feasible;
      table.cells.push_back({elements[e].index, elements[e].bpa, lo.value, hi.value, ok});
      if (!ok) out.infeasible_mass += elements[e].bpa;
    }
    out.branches.push_back(std::move(table));
  }

  std::sort(thresholds.begin(), thresholds.end());
  out.curve.points.resize(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) out.curve.points[t].nu = thresholds[t];

  // odometer over one cell per branch
  std::vector<std::size_t> pick(out.branches.size(), 0);
  for (bool done = false; !done;) {
    double mass = 1.0, sum_max = 0.0, sum_min = 0.0;
    bool feasible = true;
    for (std::size_t b = 0; b < pick.size(); ++b) {
      const auto& cell = out.branches[b].cells[pick[b]];
      mass *= cell.bpa;
      sum_max += cell.max;
      sum_min += cell.min;
      feasible = feasible && cell.feasible;
    }
    if (feasible)
      for (auto& p : out.curve.points) {
        if (sum_max <= p.nu) p.bel += mass;
        if (sum_min <= p.nu) p.pl += mass;
      }
    std::size_t b = pick.size();
    for (;;) {
      if (b == 0) {
        done = true;
        break;
      }
      --b;
      if (++pick[b] < out.branches[b].cells.size()) break;
      pick[b] = 0;
    }
  }
  for (auto& p : out.curve.points) {
    p.bel = std::min(p.bel, 1.0);
    p.pl = std::min(p.pl, 1.0);
    p.exact = false;
  }
  out.curve.provenance.optimizations = out.optimizations;
  out.curve.provenance.evaluations = out.evaluations;
  return out;
}

}  // namespace ebro

#endif  // EBRO_DECOMPOSE_HPP
