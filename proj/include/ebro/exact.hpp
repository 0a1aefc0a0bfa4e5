#ifndef EBRO_EXACT_HPP
#define EBRO_EXACT_HPP

// Exhaustive Bel/Pl: one global maximization and one global minimization of
// f(d, .) per focal element.

#include <algorithm>
#include <span>
#include <vector>

#include "ebro/curve.hpp"
#include "ebro/evidence.hpp"
#include "ebro/model.hpp"
#include "ebro/optimize.hpp"
#include "ebro/random.hpp"

namespace ebro {

struct FocalExtrema {
  CellIndex index;
  double bpa = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> u_min;
  std::vector<double> u_max;
};

struct ExactResult {
  BeliefCurve curve;
  std::vector<FocalExtrema> elements;
  /// Plausibility of the complement at each threshold, Bel = 1 - Pl(not A).
  std::vector<double> pl_not_a;
  std::size_t optimizations = 0;
  std::size_t evaluations = 0;
};

/// Global min and max of u -> model(d, u) over one focal element's physical
/// box. Seeds derive from the element's lexicographic index so that any
/// caller enumerating the same element reproduces the same values.
inline FocalExtrema focal_extrema(const SystemModel& model, std::span<const double> d,
                                  const FocalElement& element, std::size_t linear,
                                  const GlobalSearchConfig& config, std::size_t* evaluations = nullptr) {
  SearchProblem problem;
  for (const auto& iv : element.bounds) {
    problem.bounds.lower.push_back(iv.lower);
    problem.bounds.upper.push_back(iv.upper);
  }
  std::vector<double> design(d.begin(), d.end());
  problem.objective = [&model, design](std::span<const double> u) { return model(design, u); };

  FocalExtrema out;
  out.index = element.index;
  out.bpa = element.bpa;
  GlobalSearchConfig c = config;
  c.seed = derive_seed(config.seed, {linear, 1});
  auto hi = global_optimize(problem, c, Sense::Maximize);
  c.seed = derive_seed(config.seed, {linear, 0});
  auto lo = global_optimize(problem, c, Sense::Minimize);
  out.max = hi.f;
  out.u_max = hi.x;
  out.min = lo.f;
  out.u_min = lo.x;
  if (evaluations) *evaluations += hi.evaluations + lo.evaluations;
  return out;
}

/// Bel(nu) = sum of bpa over elements whose maximum is <= nu;
/// Pl(nu) = sum of bpa over elements whose minimum is <= nu.
inline BeliefCurve curve_from_extrema(const std::vector<FocalExtrema>& elements,
                                      std::vector<double> thresholds,
                                      std::vector<double>* pl_not_a = nullptr) {
  std::sort(thresholds.begin(), thresholds.end());
  BeliefCurve curve;
  if (pl_not_a) pl_not_a->clear();
  for (double nu : thresholds) {
    CurvePoint p;
    p.nu = nu;
    double complement = 0.0;
    for (const auto& e : elements) {
      if (e.max <= nu) p.bel += e.bpa;
      else complement += e.bpa;  // at least one value above nu
      if (e.min <= nu) p.pl += e.bpa;
    }
    if (pl_not_a) pl_not_a->push_back(complement);
    curve.points.push_back(p);
  }
  return curve;
}

inline ExactResult exact_bel_pl(const SystemModel& model, std::span<const double> d,
                                const UncertainSpace& space, const std::vector<double>& thresholds,
                                const GlobalSearchConfig& config) {
  ExactResult r;
  const auto elements = build_focal_elements(space);
  r.elements.reserve(elements.size());
  for (std::size_t k = 0; k < elements.size(); ++k)
    r.elements.push_back(focal_extrema(model, d, elements[k], k, config, &r.evaluations));
  r.optimizations = 2 * elements.size();
  r.curve = curve_from_extrema(r.elements, thresholds, &r.pl_not_a);
  r.curve.provenance.optimizations = r.optimizations;
  r.curve.provenance.evaluations = r.evaluations;
  return r;
}

inline ExactResult exact_bel_pl(const SystemModel& model, std::span<const double> d,
                                const std::vector<double>& thresholds, const GlobalSearchConfig& config) {
  return exact_bel_pl(model, d, model.space, thresholds, config);
}

}  // namespace ebro

#endif  // EBRO_EXACT_HPP
