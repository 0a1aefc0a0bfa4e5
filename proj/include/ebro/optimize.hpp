#ifndef EBRO_OPTIMIZE_HPP
#define EBRO_OPTIMIZE_HPP

// Restart-based differential evolution with local refinement.
//
// The population evolves with DE/current-to-best/1/bin. When the largest
// pairwise distance in the population drops below `restart_contraction`
// times the largest distance seen during the whole search, a local search
// runs from the best individual, its result joins the local-optima list and
// the population is re-sampled. A slice of the budget is held back for a
// final local polish of the overall best point.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ebro/errors.hpp"
#include "ebro/evidence.hpp"
#include "ebro/random.hpp"

namespace ebro {

enum class Sense { Minimize, Maximize };

enum class LocalMethod { QuasiNewton, NelderMead };

using Objective = std::function<double(std::span<const double>)>;

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }

  double diagonal() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += (upper[i] - lower[i]) * (upper[i] - lower[i]);
    return std::sqrt(s);
  }

  bool contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    return true;
  }

  void clamp(std::span<double> x) const {
    for (std::size_t i = 0; i < size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size())
      throw std::invalid_argument("bounds must be a nonempty box");
    for (std::size_t i = 0; i < size(); ++i)
      if (!(lower[i] <= upper[i])) throw std::invalid_argument("bounds need lower <= upper");
  }
};

/// A closed region on which the objective is smooth, with the objective to
/// use there. Local refinement never leaves the piece it starts in.
struct SmoothPiece {
  Bounds bounds;
  Objective objective;
  CellIndex cells;
};

struct SearchProblem {
  Objective objective;
  Bounds bounds;
  /// Optional; when absent the whole box is one smooth piece.
  std::function<SmoothPiece(std::span<const double>)> piece_of;
  /// Optional; focal cell of a point, stored with archived samples.
  std::function<CellIndex(std::span<const double>)> cell_of;
};

struct GlobalSearchConfig {
  std::size_t population_size = 10;
  /// Explicit budget; 0 selects evaluations_per_half_dimension * n / 2.
  std::size_t max_evaluations = 0;
  std::size_t evaluations_per_half_dimension = 500;
  double restart_contraction = 0.10;
  double p_d = 0.5;
  std::size_t n_pop_verify = 10;
  std::uint64_t seed = 1;
  LocalMethod local_method = LocalMethod::QuasiNewton;
  /// Archive every evaluated sample instead of survivors and local iterates.
  bool archive_all = false;

  static GlobalSearchConfig inner_defaults() { return {}; }
  static GlobalSearchConfig outer_defaults() {
    GlobalSearchConfig c;
    c.evaluations_per_half_dimension = 5000;
    c.local_method = LocalMethod::NelderMead;
    return c;
  }

  std::size_t budget(std::size_t dimension) const {
    if (max_evaluations > 0) return max_evaluations;
    return std::max<std::size_t>(evaluations_per_half_dimension * dimension / 2,
                                 evaluations_per_half_dimension / 2);
  }

  void validate() const {
    if (population_size < 4) throw std::invalid_argument("population_size must be >= 4");
    if (!(restart_contraction > 0.0 && restart_contraction < 1.0))
      throw std::invalid_argument("restart_contraction must lie in (0, 1)");
    if (!(p_d >= 0.0 && p_d <= 1.0)) throw std::invalid_argument("p_d must lie in [0, 1]");
    if (n_pop_verify == 0) throw std::invalid_argument("n_pop_verify must be positive");
  }
};

struct Sample {
  std::vector<double> x;
  CellIndex cells;
  double f = 0.0;
};

/// Samples collected while maximizing (upper store) and minimizing (lower
/// store). Box queries consider both stores: every entry is a genuine
/// evaluation of the same function.
class SampleArchive {
public:
  void record(Sense sense, Sample s) {
    (sense == Sense::Maximize ? upper_ : lower_).push_back(std::move(s));
  }

  const std::vector<Sample>& upper() const { return upper_; }
  const std::vector<Sample>& lower() const { return lower_; }
  std::size_t size() const { return upper_.size() + lower_.size(); }
  bool empty() const { return upper_.empty() && lower_.empty(); }

  /// Highest archived value inside the box (cell ranges), if any.
  std::optional<Sample> sup_in(std::span<const CellRange> box) const {
    return best_in(box, [](double a, double b) { return a > b; });
  }

  /// Lowest archived value inside the box, if any.
  std::optional<Sample> inf_in(std::span<const CellRange> box) const {
    return best_in(box, [](double a, double b) { return a < b; });
  }

  static bool inside(const Sample& s, std::span<const CellRange> box) {
    if (s.cells.size() != box.size()) return false;
    for (std::size_t i = 0; i < box.size(); ++i)
      if (!box[i].contains(s.cells[i])) return false;
    return true;
  }

private:
  template <class Better>
  std::optional<Sample> best_in(std::span<const CellRange> box, Better better) const {
    const Sample* best = nullptr;
    for (const auto* store : {&upper_, &lower_})
      for (const auto& s : *store)
        if (inside(s, box) && (!best || better(s.f, best->f))) best = &s;
    if (!best) return std::nullopt;
    return *best;
  }

  std::vector<Sample> upper_;
  std::vector<Sample> lower_;
};

struct LocalOptimum {
  std::vector<double> x;
  CellIndex cells;
  double f = 0.0;
};

struct OptimizeResult {
  std::vector<double> x;
  CellIndex cells;
  double f = 0.0;
  std::size_t evaluations = 0;
  std::size_t discarded = 0;
  std::vector<LocalOptimum> local_optima;
};

namespace detail {

inline constexpr double kDiscarded = std::numeric_limits<double>::infinity();

// Minimizes sign * f and tallies evaluations against a hard budget.
class BudgetedObjective {
public:
  BudgetedObjective(Objective f, double sign, std::size_t budget)
      : f_(std::move(f)), sign_(sign), budget_(budget) {}

  std::size_t used() const { return used_; }
  std::size_t remaining() const { return budget_ > used_ ? budget_ - used_ : 0; }
  std::size_t discarded() const { return discarded_; }
  std::size_t finite() const { return used_ - discarded_; }
  double sign() const { return sign_; }

  double operator()(std::span<const double> x) { return (*this)(f_, x); }

  double operator()(const Objective& f, std::span<const double> x) {
    ++used_;
    const double v = f(x);
    if (!std::isfinite(v)) {
      ++discarded_;
      return kDiscarded;
    }
    return sign_ * v;
  }

private:
  Objective f_;
  double sign_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::size_t discarded_ = 0;
};

struct LocalTrace {
  std::vector<double> x;
  double g = kDiscarded;  // signed value
  std::vector<std::pair<std::vector<double>, double>> iterates;
};

inline double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

// Works in normalized coordinates z in [0,1]^n of the given bounds.
class Normalizer {
public:
  explicit Normalizer(const Bounds& b) : b_(b) {}
  std::vector<double> to_x(std::span<const double> z) const {
    std::vector<double> x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double w = b_.upper[i] - b_.lower[i];
      x[i] = z[i] <= 0.0 ? b_.lower[i] : z[i] >= 1.0 ? b_.upper[i] : b_.lower[i] + w * z[i];
    }
    return x;
  }
  std::vector<double> to_z(std::span<const double> x) const {
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = b_.upper[i] - b_.lower[i];
      z[i] = w > 0.0 ? std::clamp((x[i] - b_.lower[i]) / w, 0.0, 1.0) : 0.0;
    }
    return z;
  }

private:
  const Bounds& b_;
};

// Projected BFGS with forward-difference gradients (relative step 1e-6),
// Armijo backtracking along the projected path. Stops when a step moves
// less than 1e-8, after 200 iterations or when the budget runs out.
inline LocalTrace quasi_newton(BudgetedObjective& eval, const Objective& f, const Bounds& bounds,
                               std::span<const double> x0, double g0, std::size_t budget) {
  const std::size_t n = bounds.size();
  Normalizer norm(bounds);
  const std::size_t stop_at = eval.used() + std::min(budget, eval.remaining());
  auto has_budget = [&](std::size_t k) { return eval.used() + k <= stop_at; };

  std::vector<char> fixed(n);
  for (std::size_t i = 0; i < n; ++i) fixed[i] = bounds.upper[i] <= bounds.lower[i];

  auto value = [&](std::span<const double> z) { return eval(f, norm.to_x(z)); };

  LocalTrace tr;
  std::vector<double> z = norm.to_z(x0);
  double g = g0;
  if (!std::isfinite(g)) {
    if (!has_budget(1)) return tr;
    g = value(z);
  }
  tr.x = norm.to_x(z);
  tr.g = g;
  if (!std::isfinite(g)) return tr;

  auto gradient = [&](std::span<const double> zc, double gc, std::vector<double>& grad) {
    grad.assign(n, 0.0);
    std::vector<double> zp(zc.begin(), zc.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i]) continue;
      const double h = 1e-6 * std::max(1.0, std::abs(zc[i]));
      const double step = zc[i] + h <= 1.0 ? h : -h;
      zp[i] = zc[i] + step;
      const double gp = value(zp);
      zp[i] = zc[i];
      grad[i] = std::isfinite(gp) ? (gp - gc) / step : 0.0;
    }
  };

  std::vector<double> H(n * n, 0.0);
  auto reset = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
  };
  reset();

  std::vector<double> grad, grad_new, p(n), s(n), y(n), zn(n);
  if (!has_budget(n)) return tr;
  gradient(z, g, grad);

  for (int iter = 0; iter < 200; ++iter) {
    std::vector<char> active(n);
    for (std::size_t i = 0; i < n; ++i)
      active[i] = fixed[i] || (z[i] <= 0.0 && grad[i] > 0.0) || (z[i] >= 1.0 && grad[i] < 0.0);
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = 0.0;
      if (active[i]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!active[j]) p[i] -= H[i * n + j] * grad[j];
      slope += p[i] * grad[i];
    }
    if (!(slope < 0.0)) {
      reset();
      slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = active[i] ? 0.0 : -grad[i];
        slope += p[i] * grad[i];
      }
    }
    if (norm_inf(p) < 1e-12) break;

    double alpha = 1.0;
    bool accepted = false;
    double gn = g;
    while (alpha > 1e-12) {
      if (!has_budget(1)) break;
      for (std::size_t i = 0; i < n; ++i) zn[i] = std::clamp(z[i] + alpha * p[i], 0.0, 1.0);
      gn = value(zn);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += grad[i] * (zn[i] - z[i]);
      if (std::isfinite(gn) && gn <= g + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    for (std::size_t i = 0; i < n; ++i) s[i] = zn[i] - z[i];
    const double step = norm_inf(s);
    z = zn;
    g = gn;
    tr.x = norm.to_x(z);
    tr.g = g;
    tr.iterates.emplace_back(tr.x, g);
    if (step < 1e-8 || !has_budget(n)) break;

    gradient(z, g, grad_new);
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = grad_new[i] - grad[i];
      sy += s[i] * y[i];
    }
    if (sy > 1e-12) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      std::vector<double> Hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i * n + j] * y[j];
      double yHy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yHy += y[i] * Hy[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H[i * n + j] += -rho * (Hy[i] * s[j] + s[i] * Hy[j]) +
                          (rho * rho * yHy + rho) * s[i] * s[j];
    }
    grad.swap(grad_new);
  }
  return tr;
}

// Bound-clamped Nelder-Mead in normalized coordinates. Stops when the
// simplex diameter falls below 1e-8, after 200 iterations or on budget.
inline LocalTrace nelder_mead(BudgetedObjective& eval, const Objective& f, const Bounds& bounds,
                              std::span<const double> x0, double g0, std::size_t budget) {
  const std::size_t n = bounds.size();
  Normalizer norm(bounds);
  const std::size_t stop_at = eval.used() + std::min(budget, eval.remaining());
  auto has_budget = [&] { return eval.used() < stop_at; };
  auto value = [&](std::span<const double> z) { return eval(f, norm.to_x(z)); };
  auto clamp01 = [](std::vector<double>& z) {
    for (auto& v : z) v = std::clamp(v, 0.0, 1.0);
  };

  LocalTrace tr;
  std::vector<std::vector<double>> simplex(n + 1);
  std::vector<double> vals(n + 1, kDiscarded);
  simplex[0] = norm.to_z(x0);
  vals[0] = std::isfinite(g0) ? g0 : (has_budget() ? value(simplex[0]) : kDiscarded);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1] = simplex[0];
    simplex[i + 1][i] += simplex[0][i] + 0.05 <= 1.0 ? 0.05 : -0.05;
    if (!has_budget()) break;
    vals[i + 1] = value(simplex[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  auto sort = [&] {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  };

  for (int iter = 0; iter < 200 && has_budget(); ++iter) {
    sort();
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    double diam = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        d = std::max(d, std::abs(simplex[order[k]][i] - simplex[best][i]));
      diam = std::max(diam, d);
    }
    if (diam < 1e-8) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i] / double(n);

    auto along = [&](double t) {
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
      clamp01(z);
      return z;
    };

    auto zr = along(-1.0);
    const double fr = value(zr);
    if (fr < vals[best]) {
      if (!has_budget()) {
        simplex[worst] = zr, vals[worst] = fr;
        break;
      }
      auto ze = along(-2.0);
      const double fe = value(ze);
      if (fe < fr) simplex[worst] = ze, vals[worst] = fe;
      else simplex[worst] = zr, vals[worst] = fr;
    } else if (fr < vals[second]) {
      simplex[worst] = zr, vals[worst] = fr;
    } else {
      if (!has_budget()) break;
      const bool outside = fr < vals[worst];
      auto zc = along(outside ? -0.5 : 0.5);
      const double fc = value(zc);
      if (fc < std::min(fr, vals[worst])) {
        simplex[worst] = zc, vals[worst] = fc;
      } else {
        for (std::size_t k = 1; k <= n && has_budget(); ++k) {
          auto& v = simplex[order[k]];
          for (std::size_t i = 0; i < n; ++i) v[i] = simplex[best][i] + 0.5 * (v[i] - simplex[best][i]);
          vals[order[k]] = value(v);
        }
      }
    }
    sort();
    tr.iterates.emplace_back(norm.to_x(simplex[order[0]]), vals[order[0]]);
  }
  sort();
  tr.x = norm.to_x(simplex[order[0]]);
  tr.g = vals[order[0]];
  return tr;
}

}  // namespace detail

/// Local refinement from x0 inside the smooth piece containing it.
/// Returns the refined point (never worse than x0 when f0 is supplied).
inline OptimizeResult local_refine(const SearchProblem& problem, Sense sense,
                                   std::span<const double> x0, std::size_t budget,
                                   LocalMethod method = LocalMethod::QuasiNewton,
                                   SampleArchive* archive = nullptr) {
  const double sign = sense == Sense::Minimize ? 1.0 : -1.0;
  detail::BudgetedObjective eval(problem.objective, sign, budget);
  SmoothPiece piece;
  if (problem.piece_of) {
    piece = problem.piece_of(x0);
  } else {
    piece.bounds = problem.bounds;
    piece.objective = problem.objective;
  }
  std::vector<double> start(x0.begin(), x0.end());
  piece.bounds.clamp(start);
  auto tr = method == LocalMethod::QuasiNewton
                ? detail::quasi_newton(eval, piece.objective, piece.bounds, start, detail::kDiscarded, budget)
                : detail::nelder_mead(eval, piece.objective, piece.bounds, start, detail::kDiscarded, budget);
  if (archive)
    for (auto& [x, g] : tr.iterates)
      if (std::isfinite(g)) archive->record(sense, Sample{x, piece.cells, sign * g});
  if (!std::isfinite(tr.g)) throw OptimizationFailed("local refinement found no finite value");
  OptimizeResult r;
  r.x = tr.x;
  r.cells = piece.cells;
  r.f = sign * tr.g;
  r.evaluations = eval.used();
  r.discarded = eval.discarded();
  return r;
}

/// Population-based global search; see the header comment for the restart
/// scheme. Deterministic for a fixed config seed.
inline OptimizeResult global_optimize(const SearchProblem& problem, const GlobalSearchConfig& config,
                                      Sense sense, SampleArchive* archive = nullptr) {
  config.validate();
  problem.bounds.validate();
  const std::size_t n = problem.bounds.size();
  const std::size_t budget = config.budget(n);
  const std::size_t np = config.population_size;
  const double sign = sense == Sense::Minimize ? 1.0 : -1.0;
  Rng rng(config.seed);
  detail::BudgetedObjective eval(problem.objective, sign, budget);
  detail::Normalizer norm(problem.bounds);

  const std::size_t polish_budget = std::min(budget, std::max<std::size_t>(budget / 5, n + 2));
  const std::size_t main_budget = budget - polish_budget;
  const std::size_t restart_budget = std::max<std::size_t>(budget / 10, 4 * (n + 1));

  OptimizeResult result;
  std::vector<double> best_x;
  CellIndex best_cells;  // empty: resolve with cell_of at the end
  double best_g = detail::kDiscarded;

  auto cell_of = [&](std::span<const double> x) {
    return problem.cell_of ? problem.cell_of(x) : CellIndex{};
  };
  auto archive_point = [&](std::span<const double> x, double g) {
    if (archive && std::isfinite(g))
      archive->record(sense, Sample{{x.begin(), x.end()}, cell_of(x), sign * g});
  };
  auto consider = [&](std::span<const double> x, double g) {
    if (g < best_g || best_x.empty()) {
      best_g = g;
      best_x.assign(x.begin(), x.end());
      best_cells.clear();
    }
  };

  auto run_local = [&](std::span<const double> x0, double g0, std::size_t local_budget) {
    SmoothPiece piece;
    if (problem.piece_of) {
      piece = problem.piece_of(x0);
    } else {
      piece.bounds = problem.bounds;
      piece.objective = problem.objective;
    }
    // the piece objective can differ from the global one on shared faces
    const double start_g = problem.piece_of ? detail::kDiscarded : g0;
    auto tr = config.local_method == LocalMethod::QuasiNewton
                  ? detail::quasi_newton(eval, piece.objective, piece.bounds, x0, start_g, local_budget)
                  : detail::nelder_mead(eval, piece.objective, piece.bounds, x0, start_g, local_budget);
    for (auto& [x, g] : tr.iterates)
      if (archive && std::isfinite(g)) archive->record(sense, Sample{x, piece.cells, sign * g});
    if (std::isfinite(tr.g)) {
      result.local_optima.push_back({tr.x, piece.cells, sign * tr.g});
      if (tr.g < best_g || best_x.empty()) {
        best_g = tr.g;
        best_x = tr.x;
        best_cells = piece.cells;
      }
    }
  };

  // population in normalized coordinates
  std::vector<std::vector<double>> pop(np, std::vector<double>(n));
  std::vector<double> vals(np, detail::kDiscarded);
  double max_spread = 0.0;

  auto spread = [&] {
    double m = 0.0;
    for (std::size_t a = 0; a < np; ++a)
      for (std::size_t b = a + 1; b < np; ++b) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += (pop[a][i] - pop[b][i]) * (pop[a][i] - pop[b][i]);
        m = std::max(m, d);
      }
    return std::sqrt(m);
  };

  auto seed_population = [&] {
    for (std::size_t k = 0; k < np && eval.used() < main_budget; ++k) {
      for (std::size_t i = 0; i < n; ++i) pop[k][i] = rng.uniform();
      const auto x = norm.to_x(pop[k]);
      vals[k] = eval(x);
      consider(x, vals[k]);
      archive_point(x, vals[k]);
    }
    max_spread = std::max(max_spread, spread());
  };

  seed_population();
  std::vector<double> trial(n);
  while (eval.used() + np <= main_budget) {
    std::size_t ib = 0;
    for (std::size_t k = 1; k < np; ++k)
      if (vals[k] < vals[ib]) ib = k;
    for (std::size_t k = 0; k < np; ++k) {
      std::size_t r1, r2;
      do r1 = rng.index(np); while (r1 == k);
      do r2 = rng.index(np); while (r2 == k || r2 == r1);
      const double F = 0.5 + 0.4 * rng.uniform();
      const double K = rng.uniform();
      const std::size_t jr = rng.index(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == jr || rng.uniform() < 0.9) {
          trial[i] = pop[k][i] + K * (pop[ib][i] - pop[k][i]) + F * (pop[r1][i] - pop[r2][i]);
          trial[i] = std::clamp(trial[i], 0.0, 1.0);
        } else {
          trial[i] = pop[k][i];
        }
      }
      const auto x = norm.to_x(trial);
      const double g = eval(x);
      consider(x, g);
      if (config.archive_all) archive_point(x, g);
      if (g <= vals[k]) {
        pop[k] = trial;
        vals[k] = g;
      }
    }
    if (!config.archive_all)
      for (std::size_t k = 0; k < np; ++k) archive_point(norm.to_x(pop[k]), vals[k]);

    const double s = spread();
    max_spread = std::max(max_spread, s);
    if (s < config.restart_contraction * max_spread) {
      std::size_t jb = 0;
      for (std::size_t k = 1; k < np; ++k)
        if (vals[k] < vals[jb]) jb = k;
      if (std::isfinite(vals[jb])) {
        const std::size_t room = main_budget > eval.used() ? main_budget - eval.used() : 0;
        run_local(norm.to_x(pop[jb]), vals[jb], std::min(room, restart_budget));
      }
      seed_population();
    }
  }

  if (!best_x.empty() && std::isfinite(best_g) && eval.remaining() > 0)
    run_local(best_x, best_g, eval.remaining());

  if (best_x.empty() || !std::isfinite(best_g) || eval.finite() == 0)
    throw OptimizationFailed("no finite objective value in " + std::to_string(eval.used()) +
                             " evaluations");
  result.x = best_x;
  result.cells = best_cells.empty() ? cell_of(best_x) : best_cells;
  result.f = sign * best_g;
  result.evaluations = eval.used();
  result.discarded = eval.discarded();
  return result;
}

}  // namespace ebro

#endif  // EBRO_OPTIMIZE_HPP
