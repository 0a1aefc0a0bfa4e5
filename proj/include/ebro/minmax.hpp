#ifndef EBRO_MINMAX_HPP
#define EBRO_MINMAX_HPP

// Nested solvers for
//   nu_max = min_D max_U f(d, u)   (worst case, Bel = 1 above it)
//   nu_min = min_D min_U f(d, u)   (best case, Pl = 0 below it)
//
// The outer loop is a differential evolution over D; each outer candidate
// carries the inner optimum (a point of the unit hypercube) found for it.
// Inner calls are either a full global search or a local refinement from the
// parent's inner optimum; the full search is chosen with probability
// min(1, p_d * |d_new - d_parent| / diag(D)). Every n_pop_verify inner calls,
// with probability p_d, a verification search with twice the budget runs.
// At each generation barrier inner optima are cross-seeded: f(d_i, u_j) is
// re-evaluated and adopted when it beats the inner value of d_i.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "ebro/evidence.hpp"
#include "ebro/model.hpp"
#include "ebro/optimize.hpp"
#include "ebro/random.hpp"
#include "ebro/unit_problem.hpp"

namespace ebro {

/// One (d, u, f) triple of a nested solve; u is kept both in the unit
/// hypercube (x, cells) and in physical units.
struct NestedPoint {
  std::vector<double> d;
  std::vector<double> x;
  CellIndex cells;
  std::vector<double> u;
  double f = std::numeric_limits<double>::quiet_NaN();
};

struct NestedSolution {
  NestedPoint best;
  std::vector<NestedPoint> local_minima;  // outer local optima, ranked
  std::size_t model_evaluations = 0;
  std::size_t inner_optimizations = 0;
  std::size_t global_inner_optimizations = 0;
  std::size_t verification_optimizations = 0;
  std::size_t outer_evaluations = 0;
};

struct MinMaxResult {
  NestedSolution worst;  // min/max
  NestedSolution best;   // min/min

  double nu_max() const { return worst.best.f; }
  double nu_min() const { return best.best.f; }
  const std::vector<double>& d_star() const { return worst.best.d; }
  const std::vector<double>& d_min() const { return best.best.d; }
  const std::vector<double>& u_at_max() const { return worst.best.u; }
  const std::vector<double>& u_at_min() const { return best.best.u; }
};

namespace detail {

class NestedSolver {
public:
  NestedSolver(const SystemModel& model, const UncertainSpace& space, const GlobalSearchConfig& outer,
               const GlobalSearchConfig& inner, Sense inner_sense)
      : counter_(),
        model_(counted(model, counter_)),
        map_(space),
        outer_(outer),
        inner_(inner),
        sense_(inner_sense),
        rng_(derive_seed(outer.seed, {0x6f75746572ULL})) {
    outer.validate();
    inner.validate();
    model.design_bounds.validate();
    if (model.space.dimension() != 0 && model.space.dimension() != space.dimension())
      throw InvalidSpace("model and space dimensions differ");
  }

  NestedSolution solve() {
    const auto& D = model_.design_bounds;
    const std::size_t m = D.size();
    const std::size_t np = outer_.population_size;
    const std::size_t budget = outer_.budget(m);
    const double diag = std::max(D.diagonal(), 1e-300);
    Normalizer norm(D);

    std::vector<NestedPoint> pop(np), trials(np);
    std::vector<std::vector<double>> z(np, std::vector<double>(m));
    double max_spread = 0.0;

    auto seed_population = [&] {
      for (std::size_t k = 0; k < np; ++k) {
        for (std::size_t i = 0; i < m; ++i) z[k][i] = rng_.uniform();
        pop[k] = inner_solve(norm.to_x(z[k]), nullptr, InnerKind::Global);
      }
      cross_seed(pop, pop);
      max_spread = std::max(max_spread, spread(z));
    };
    seed_population();

    std::vector<std::vector<double>> zt(np, std::vector<double>(m));
    while (solution_.outer_evaluations + np <= budget) {
      std::size_t ib = best_index(pop);
      for (std::size_t k = 0; k < np; ++k) {
        std::size_t r1, r2;
        do r1 = rng_.index(np); while (r1 == k);
        do r2 = rng_.index(np); while (r2 == k || r2 == r1);
        const double F = 0.5 + 0.4 * rng_.uniform();
        const double K = rng_.uniform();
        const std::size_t jr = rng_.index(m);
        for (std::size_t i = 0; i < m; ++i) {
          if (i == jr || rng_.uniform() < 0.9)
            zt[k][i] = std::clamp(z[k][i] + K * (z[ib][i] - z[k][i]) + F * (z[r1][i] - z[r2][i]), 0.0, 1.0);
          else
            zt[k][i] = z[k][i];
        }
        const auto d = norm.to_x(zt[k]);
        double dist = 0.0;
        for (std::size_t i = 0; i < m; ++i) dist += (d[i] - pop[k].d[i]) * (d[i] - pop[k].d[i]);
        const double p_global = std::min(1.0, outer_.p_d * std::sqrt(dist) / diag);
        trials[k] = inner_solve(d, &pop[k], rng_.bernoulli(p_global) ? InnerKind::Global : InnerKind::Local);
      }
      // generation barrier
      std::vector<NestedPoint> all = pop;
      all.insert(all.end(), trials.begin(), trials.end());
      cross_seed(trials, all);
      cross_seed(pop, all);
      for (std::size_t k = 0; k < np; ++k)
        if (trials[k].f <= pop[k].f) {
          pop[k] = trials[k];
          z[k] = zt[k];
        }

      const double s = spread(z);
      max_spread = std::max(max_spread, s);
      if (s < outer_.restart_contraction * max_spread && solution_.outer_evaluations < budget) {
        const std::size_t jb = best_index(pop);
        const std::size_t room = budget - solution_.outer_evaluations;
        archive_.push_back(outer_local(pop[jb], std::min(room, std::max<std::size_t>(50, budget / 10))));
        cross_seed(archive_, archive_);
        if (solution_.outer_evaluations + np <= budget) seed_population();
      }
    }

    archive_.push_back(pop[best_index(pop)]);
    cross_seed(archive_, archive_);
    finish();
    return solution_;
  }

private:
  enum class InnerKind { Global, Local };

  bool better(double a, double b) const { return sense_ == Sense::Maximize ? a > b : a < b; }

  static std::size_t best_index(const std::vector<NestedPoint>& pop) {
    std::size_t ib = 0;
    for (std::size_t k = 1; k < pop.size(); ++k)
      if (pop[k].f < pop[ib].f) ib = k;
    return ib;
  }

  static double spread(const std::vector<std::vector<double>>& z) {
    double m = 0.0;
    for (std::size_t a = 0; a < z.size(); ++a)
      for (std::size_t b = a + 1; b < z.size(); ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < z[a].size(); ++i) s += (z[a][i] - z[b][i]) * (z[a][i] - z[b][i]);
        m = std::max(m, s);
      }
    return std::sqrt(m);
  }

  double evaluate(const std::vector<double>& d, const std::vector<double>& x, const CellIndex& cells) {
    std::vector<double> u(x.size());
    map_.to_physical_in_cells(x, cells, u);
    return model_(d, u);
  }

  NestedPoint finalize(std::vector<double> d, std::vector<double> x, CellIndex cells, double f) {
    NestedPoint p;
    p.u.resize(x.size());
    map_.to_physical_in_cells(x, cells, p.u);
    p.d = std::move(d);
    p.x = std::move(x);
    p.cells = std::move(cells);
    p.f = f;
    return p;
  }

  NestedPoint global_inner(const std::vector<double>& d, std::size_t budget_factor) {
    auto problem = unit_problem(model_, map_, d);
    GlobalSearchConfig c = inner_;
    c.max_evaluations = inner_.budget(map_.dimension()) * budget_factor;
    c.seed = derive_seed(inner_.seed ^ outer_.seed, {solution_.inner_optimizations, 0x696eULL});
    auto r = global_optimize(problem, c, sense_);
    ++solution_.global_inner_optimizations;
    return finalize(d, r.x, r.cells, r.f);
  }

  NestedPoint local_inner(const std::vector<double>& d, const NestedPoint& from) {
    auto piece = cell_piece(model_, map_, d, from.cells);
    SearchProblem problem{piece.objective, piece.bounds, nullptr,
                          [cells = from.cells](std::span<const double>) { return cells; }};
    const std::size_t n = map_.dimension();
    const std::size_t budget = std::max<std::size_t>(10 * (n + 1), inner_.budget(n) / 10);
    auto r = local_refine(problem, sense_, from.x, budget, LocalMethod::QuasiNewton);
    return finalize(d, r.x, from.cells, r.f);
  }

  // One outer evaluation.
  NestedPoint inner_solve(const std::vector<double>& d, const NestedPoint* parent, InnerKind kind) {
    ++solution_.outer_evaluations;
    ++solution_.inner_optimizations;
    NestedPoint p;
    if (kind == InnerKind::Global || !parent) p = global_inner(d, 1);
    else p = local_inner(d, *parent);
    if (solution_.inner_optimizations % outer_.n_pop_verify == 0 && rng_.bernoulli(outer_.p_d)) {
      ++solution_.verification_optimizations;
      auto v = global_inner(d, 2);
      if (better(v.f, p.f)) p = std::move(v);
    }
    if (parent) {
      // the parent's inner optimum is a valid candidate for the child
      const double f = evaluate(d, parent->x, parent->cells);
      if (better(f, p.f)) p = finalize(d, parent->x, parent->cells, f);
    }
    return p;
  }

  // Re-evaluates f(d_i, u_j) for every pair and adopts improvements.
  void cross_seed(std::vector<NestedPoint>& targets, const std::vector<NestedPoint>& sources) {
    std::vector<NestedPoint> snapshot = sources;
    for (auto& t : targets)
      for (const auto& s : snapshot) {
        if (s.x == t.x && s.cells == t.cells) continue;
        const double f = evaluate(t.d, s.x, s.cells);
        if (better(f, t.f)) t = finalize(t.d, s.x, s.cells, f);
      }
  }

  // Nelder-Mead over D; the inner loop runs local search only.
  NestedPoint outer_local(const NestedPoint& start, std::size_t budget) {
    NestedPoint best = start;
    std::vector<NestedPoint> seen;
    SearchProblem problem;
    problem.bounds = model_.design_bounds;
    problem.objective = [&](std::span<const double> d) {
      auto p = local_inner({d.begin(), d.end()}, best);
      ++solution_.outer_evaluations;
      ++solution_.inner_optimizations;
      const double f = p.f;
      if (f < best.f) best = p;
      return f;
    };
    if (budget > 0) local_refine(problem, Sense::Minimize, start.d, budget, LocalMethod::NelderMead);
    return best;
  }

  void finish() {
    std::stable_sort(archive_.begin(), archive_.end(),
                     [](const NestedPoint& a, const NestedPoint& b) { return a.f < b.f; });
    // validate in rank order until the validated leader stays ahead
    for (std::size_t k = 0; k < archive_.size(); ++k) {
      ++solution_.inner_optimizations;
      auto v = global_inner(archive_[k].d, 2);
      if (better(v.f, archive_[k].f)) archive_[k] = std::move(v);
      std::size_t lead = 0;
      for (std::size_t j = 1; j <= k; ++j)
        if (archive_[j].f < archive_[lead].f) lead = j;
      if (k + 1 == archive_.size() || archive_[lead].f <= archive_[k + 1].f) {
        solution_.best = archive_[lead];
        break;
      }
    }
    std::stable_sort(archive_.begin(), archive_.end(),
                     [](const NestedPoint& a, const NestedPoint& b) { return a.f < b.f; });
    solution_.local_minima = archive_;
    solution_.model_evaluations = counter_.value();
  }

  EvaluationCounter counter_;
  SystemModel model_;
  UnitHypercubeMap map_;
  GlobalSearchConfig outer_;
  GlobalSearchConfig inner_;
  Sense sense_;
  Rng rng_;
  std::vector<NestedPoint> archive_;
  NestedSolution solution_;
};

}  // namespace detail

inline NestedSolution solve_min_max(const SystemModel& model, const UncertainSpace& space,
                                    const GlobalSearchConfig& outer, const GlobalSearchConfig& inner) {
  return detail::NestedSolver(model, space, outer, inner, Sense::Maximize).solve();
}

inline NestedSolution solve_min_min(const SystemModel& model, const UncertainSpace& space,
                                    const GlobalSearchConfig& outer, const GlobalSearchConfig& inner) {
  return detail::NestedSolver(model, space, outer, inner, Sense::Minimize).solve();
}

inline MinMaxResult solve_min_max_and_min_min(const SystemModel& model, const GlobalSearchConfig& outer,
                                              const GlobalSearchConfig& inner) {
  return {solve_min_max(model, model.space, outer, inner), solve_min_min(model, model.space, outer, inner)};
}

}  // namespace ebro

#endif  // EBRO_MINMAX_HPP
