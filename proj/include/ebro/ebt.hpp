#ifndef EBRO_EBT_HPP
#define EBRO_EBT_HPP

// Evolutionary binary tree over the unit hypercube.
//
// Starting from the whole of U-bar, boxes are decided against a threshold nu
// (entirely below, entirely above, or straddling) and straddling boxes that
// cover more than one focal cell are cut in two along their longest
// splittable edge. Box decisions come from global optimizations over the
// box, from samples already collected in a shared archive, or from archive
// values accepted by the trust draw. The final set of leaf boxes yields Bel
// and Pl at nu and, through the recorded box extrema, at other thresholds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ebro/curve.hpp"
#include "ebro/errors.hpp"
#include "ebro/evidence.hpp"
#include "ebro/model.hpp"
#include "ebro/optimize.hpp"
#include "ebro/random.hpp"
#include "ebro/unit_problem.hpp"

namespace ebro {

enum class BoxStatus { Undecided, Below, Above, MixedLeaf, Filtered };
enum class EbtMode { Optimize, Archive };

inline const char* to_string(BoxStatus s) {
  switch (s) {
    case BoxStatus::Undecided: return "undecided";
    case BoxStatus::Below: return "below";
    case BoxStatus::Above: return "above";
    case BoxStatus::MixedLeaf: return "mixed-leaf";
    case BoxStatus::Filtered: return "filtered";
  }
  return "?";
}

/// Node B_{l,i} of the tree: a union of focal cells given by one cell range
/// per coordinate.
///
/// est_min / est_max are the lowest / highest values actually evaluated in
/// the box. min_bound / max_bound are proven bounds on the true extrema:
/// set by a global optimization over the box, or inherited from the parent.
/// A side is exact when the sample reaches the bound.
struct Box {
  std::vector<CellRange> cells;
  std::uint64_t level = 0;
  std::uint64_t index = 0;
  double bpa = 0.0;
  double est_min = std::numeric_limits<double>::infinity();
  double est_max = -std::numeric_limits<double>::infinity();
  double min_bound = -std::numeric_limits<double>::infinity();
  double max_bound = std::numeric_limits<double>::infinity();
  std::vector<double> argmin;
  std::vector<double> argmax;
  BoxStatus status = BoxStatus::Undecided;
  /// Decided from archive values accepted by the trust draw.
  bool trusted = false;
  /// The box was re-optimized during refinement and is never trusted again.
  bool trust_revoked = false;

  bool min_exact() const { return est_min <= min_bound; }
  bool max_exact() const { return est_max >= max_bound; }
  bool single_cell() const {
    return std::all_of(cells.begin(), cells.end(), [](const CellRange& r) { return r.count() == 1; });
  }
  bool has_samples() const { return std::isfinite(est_min) && std::isfinite(est_max); }

  /// Value compared with nu for the Bel side (an upper estimate of the max).
  double bel_key() const {
    if (trusted || !std::isfinite(max_bound)) return est_max;
    return max_bound;
  }
  /// Value compared with nu for the Pl side (a lower estimate of the min).
  double pl_key() const {
    if (trusted || !std::isfinite(min_bound)) return est_min;
    return min_bound;
  }
};

/// Product over coordinates of the summed bpa of the covered intervals.
inline double box_bpa(const UnitHypercubeMap& map, std::span<const CellRange> cells) {
  double m = 1.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = cells[i].lo; k < cells[i].hi; ++k) s += map.cell_bpa(i, k);
    m *= s;
  }
  return m;
}

inline Box root_box(const UnitHypercubeMap& map) {
  Box b;
  b.cells = full_box(map);
  b.bpa = box_bpa(map, b.cells);
  return b;
}

/// Cuts the longest edge that covers at least two cells (ties: lowest
/// coordinate) at the interior cell boundary nearest the edge midpoint
/// (ties: lower boundary). Children get level + 1, indices 2i and 2i + 1,
/// and inherit the parent's proven bounds.
inline std::pair<Box, Box> split_box(const Box& box, const UnitHypercubeMap& map) {
  std::size_t axis = box.cells.size();
  double longest = -1.0;
  for (std::size_t i = 0; i < box.cells.size(); ++i) {
    if (box.cells[i].count() < 2) continue;
    const double len = map.boundary(i, box.cells[i].hi) - map.boundary(i, box.cells[i].lo);
    if (len > longest) {
      longest = len;
      axis = i;
    }
  }
  if (axis == box.cells.size()) throw CannotSplit("box covers a single focal cell");

  const auto r = box.cells[axis];
  const double mid = 0.5 * (map.boundary(axis, r.lo) + map.boundary(axis, r.hi));
  std::size_t cut = r.lo + 1;
  double best = std::abs(map.boundary(axis, cut) - mid);
  for (std::size_t k = r.lo + 2; k < r.hi; ++k) {
    const double dist = std::abs(map.boundary(axis, k) - mid);
    if (dist < best) {
      best = dist;
      cut = k;
    }
  }

  auto child = [&](CellRange range, std::uint64_t offset) {
    Box c;
    c.cells = box.cells;
    c.cells[axis] = range;
    c.level = box.level + 1;
    c.index = 2 * box.index + offset;
    c.bpa = box_bpa(map, c.cells);
    c.min_bound = box.min_bound;
    c.max_bound = box.max_bound;
    return c;
  };
  return {child({r.lo, cut}, 0), child({cut, r.hi}, 1)};
}

struct EbtConfig {
  double tau_c = 0.9;
  double filter_accuracy = 0.0;
  /// Per-box bpa cutoff; negative selects filter_accuracy / N_FE.
  double filter_threshold = -1.0;
  /// nu-bar = nu_min + fraction * (nu_max - nu_min) unless nu_bar is set.
  double nu_bar_fraction = 0.3;
  std::optional<double> nu_bar;
  std::uint64_t seed = 1;
  EbtMode mode = EbtMode::Archive;
  /// Settle boxes that already hold samples on both sides of nu without
  /// optimizing them.
  bool witness_decisions = true;
  GlobalSearchConfig optimizer = GlobalSearchConfig::inner_defaults();

  void validate() const {
    if (!(tau_c >= 0.0 && tau_c <= 1.0)) throw std::invalid_argument("tau_c must lie in [0, 1]");
    if (!(filter_accuracy >= 0.0 && filter_accuracy < 1.0))
      throw std::invalid_argument("filter_accuracy must lie in [0, 1)");
    if (!(nu_bar_fraction > 0.0 && nu_bar_fraction < 1.0))
      throw std::invalid_argument("nu_bar_fraction must lie in (0, 1)");
    optimizer.validate();
  }

  double threshold_for(std::size_t focal_count) const {
    if (filter_threshold >= 0.0) return filter_threshold;
    return filter_accuracy / static_cast<double>(focal_count);
  }

  double select_nu_bar(double nu_min, double nu_max) const {
    return nu_bar ? *nu_bar : nu_min + nu_bar_fraction * (nu_max - nu_min);
  }
};

struct TreeResult {
  std::vector<Box> boxes;
  double nu = 0.0;
  double pl_a = 0.0;
  double pl_not_a = 0.0;
  double bel = 0.0;
  double filtered_mass = 0.0;
  double unverified_mass = 0.0;
  CurveProvenance provenance;
};

/// Bel/Pl of a fixed box set at one threshold.
struct BoxTally {
  double bel = 0.0;
  double pl = 0.0;
  double pl_not_a = 0.0;
  double filtered = 0.0;
  double unverified = 0.0;
  double unresolved = 0.0;
};

/// True when the box's position relative to nu is settled by proven bounds,
/// by samples on both sides of nu (single cell) or by trusted estimates.
inline bool resolved_at(const Box& b, double nu) {
  if (b.status == BoxStatus::Filtered) return true;
  if (b.max_bound <= nu || b.min_bound > nu) return true;
  if (b.est_min <= nu && nu < b.est_max) return b.single_cell();
  if (b.trusted) return b.est_max <= nu || b.est_min > nu;
  return false;
}

inline bool verified_at(const Box& b, double nu) {
  if (b.status == BoxStatus::Filtered) return true;
  if (b.max_bound <= nu || b.min_bound > nu) return true;
  return b.est_min <= nu && nu < b.est_max && b.single_cell();
}

inline BoxTally tally_boxes(std::span<const Box> boxes, double nu) {
  BoxTally t;
  for (const auto& b : boxes) {
    if (b.status == BoxStatus::Filtered) {
      // counted against Bel and in favour of Pl
      t.filtered += b.bpa;
      t.pl += b.bpa;
      t.pl_not_a += b.bpa;
      continue;
    }
    if (b.bel_key() <= nu) t.bel += b.bpa;
    else t.pl_not_a += b.bpa;
    if (b.pl_key() <= nu) t.pl += b.bpa;
    if (!resolved_at(b, nu)) t.unresolved += b.bpa;
    else if (!verified_at(b, nu)) t.unverified += b.bpa;
  }
  return t;
}

inline CurvePoint curve_point(std::span<const Box> boxes, double nu) {
  const auto t = tally_boxes(boxes, nu);
  CurvePoint p;
  p.nu = nu;
  p.bel = std::clamp(1.0 - t.pl_not_a, 0.0, 1.0);
  p.pl = std::clamp(t.pl, p.bel, 1.0);
  // error bars cover discarded mass; trusted estimates only clear the flag
  p.bel_err = t.filtered;
  p.pl_err = t.filtered;
  p.exact = t.unresolved + t.unverified <= kMassTolerance;
  return p;
}

/// Curve over a fixed box set. Points are taken at every recorded box
/// extremum inside [range_lo, range_hi] plus nu-bar and the extra
/// thresholds. Points between refined thresholds can underestimate Bel and
/// overestimate Pl; their exact flag is cleared when a box straddles them.
inline BeliefCurve assemble_curve(std::span<const Box> boxes, double nu_bar, double range_lo,
                                  double range_hi, std::span<const double> extra = {}) {
  std::vector<double> nus;
  auto take = [&](double v) {
    if (std::isfinite(v) && v >= range_lo && v <= range_hi) nus.push_back(v);
  };
  for (const auto& b : boxes) {
    if (b.status == BoxStatus::Filtered) continue;
    take(b.bel_key());
    take(b.pl_key());
  }
  take(nu_bar);
  for (double v : extra) take(v);
  std::sort(nus.begin(), nus.end());
  nus.erase(std::unique(nus.begin(), nus.end()), nus.end());
  BeliefCurve curve;
  for (double v : nus) curve.points.push_back(curve_point(boxes, v));
  return curve;
}

/// Holds the model, the design point, the archive of samples of f(d, .)
/// and the current leaf set.
class EbtEngine {
public:
  EbtEngine(const SystemModel& model, std::vector<double> d, const UncertainSpace& space, EbtConfig config)
      : counter_(),
        model_(counted(model, counter_)),
        map_(space),
        d_(std::move(d)),
        config_(std::move(config)),
        threshold_(config_.threshold_for(space.focal_count())) {
    config_.validate();
  }

  EbtEngine(const EbtEngine&) = delete;
  EbtEngine& operator=(const EbtEngine&) = delete;

  const UnitHypercubeMap& map() const { return map_; }
  const EbtConfig& config() const { return config_; }
  SampleArchive& archive() { return archive_; }
  const std::vector<Box>& leaves() const { return leaves_; }
  double filtered_mass() const { return filtered_sum_; }

  CurveProvenance provenance() const {
    CurveProvenance p = provenance_;
    p.evaluations = counter_.value();
    p.filtered_mass = filtered_sum_;
    return p;
  }

  /// Continues from the leaves of an earlier run.
  void adopt(std::vector<Box> boxes) {
    leaves_ = std::move(boxes);
    filtered_sum_ = 0.0;
    for (const auto& b : leaves_)
      if (b.status == BoxStatus::Filtered) filtered_sum_ += b.bpa;
  }

  /// Called after each tree generation with (frontier, settled boxes).
  std::function<void(const std::vector<Box>&, const std::vector<Box>&)> on_generation;

  /// Decides one box against nu. With `force` the trust draw is skipped and
  /// the box is optimized as needed.
  void decide(Box& b, double nu, bool force = false) {
    if (b.status == BoxStatus::Filtered) return;
    refresh(b);
    if (force) {
      b.trusted = false;
      b.trust_revoked = true;
    }
    bool optimized = false;
    for (;;) {
      if (classify_known(b, nu)) break;
      if (!optimized && !force && trust(b)) {
        classify_estimates(b, nu);
        ++provenance_.archive_decisions;
        break;
      }
      optimized = true;
      b.trusted = false;
      if (witness_mode()) {
        // one side at a time; a sample above nu already rules out "below"
        optimize(b, b.est_max > nu ? Sense::Minimize : Sense::Maximize);
      } else {
        if (!b.max_exact()) optimize(b, Sense::Maximize);
        if (!b.min_exact()) optimize(b, Sense::Minimize);
      }
    }
    ++provenance_.boxes_decided;
  }

  /// Fresh tree from the root at nu; replaces the leaf set.
  TreeResult build(double nu) {
    leaves_ = grow({root_box(map_)}, nu, false);
    return result(nu);
  }

  TreeResult result(double nu) const {
    TreeResult r;
    r.boxes = leaves_;
    r.nu = nu;
    const auto t = tally_boxes(leaves_, nu);
    r.pl_a = t.pl;
    r.pl_not_a = t.pl_not_a;
    r.bel = bel_from_complement(t.pl_not_a);
    r.filtered_mass = t.filtered;
    r.unverified_mass = t.unverified;
    r.provenance = provenance();
    r.provenance.unverified_mass = t.unverified;
    return r;
  }

  /// Resolves every target threshold on the current leaf set: straddling
  /// boxes get sub-trees, then trusted boxes are re-optimized by decreasing
  /// bpa until the unverified mass left is at most 1 - tau_c.
  void refine(std::vector<double> targets) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (leaves_.empty()) leaves_ = {root_box(map_)};
    // a sub-tree for one target can refine boxes that an earlier target had
    // settled; repeat until a full pass changes nothing
    for (int pass = 0; pass < 64; ++pass) {
      bool changed = false;
      for (double nu : targets) changed |= resolve(nu);
      if (!changed) break;
    }
  }

  BeliefCurve curve(double nu_bar, double range_lo, double range_hi, std::span<const double> targets) const {
    auto c = assemble_curve(leaves_, nu_bar, range_lo, range_hi, targets);
    c.provenance = provenance();
    double worst = 0.0;
    for (double nu : targets) worst = std::max(worst, tally_boxes(leaves_, nu).unverified);
    c.provenance.unverified_mass = worst;
    return c;
  }

private:
  bool witness_mode() const { return config_.mode == EbtMode::Archive && config_.witness_decisions; }

  // Pulls archive extrema inside the box into its estimates. A box with no
  // sample at all gets one evaluation at its centre.
  void refresh(Box& b) {
    if (auto s = archive_.sup_in(b.cells); s && s->f > b.est_max) {
      b.est_max = s->f;
      b.argmax = s->x;
    }
    if (auto s = archive_.inf_in(b.cells); s && s->f < b.est_min) {
      b.est_min = s->f;
      b.argmin = s->x;
    }
    if (!b.has_samples()) {
      std::vector<double> x(b.cells.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = 0.5 * (map_.boundary(i, b.cells[i].lo) + map_.boundary(i, b.cells[i].hi));
      const auto mp = map_.to_physical(x, b.cells);
      const double f = model_(d_, mp.u);
      if (std::isfinite(f)) {
        archive_.record(Sense::Maximize, Sample{x, mp.cells, f});
        b.est_min = b.est_max = f;
        b.argmin = b.argmax = x;
      }
    }
    // an evaluated value always beats a bound that contradicts it
    b.max_bound = std::max(b.max_bound, b.est_max);
    b.min_bound = std::min(b.min_bound, b.est_min);
  }

  bool classify_known(Box& b, double nu) {
    if (b.max_bound <= nu) return settle(b, BoxStatus::Below);
    if (b.min_bound > nu) return settle(b, BoxStatus::Above);
    if (b.est_min <= nu && nu < b.est_max) {
      const bool both_exact = b.min_exact() && b.max_exact();
      if (!(witness_mode() || both_exact)) return false;
      if (!both_exact) ++provenance_.witness_decisions;
      return settle(b, b.single_cell() ? BoxStatus::MixedLeaf : BoxStatus::Undecided);
    }
    return false;
  }

  void classify_estimates(Box& b, double nu) {
    b.trusted = true;
    if (b.est_max <= nu) b.status = BoxStatus::Below;
    else if (b.est_min > nu) b.status = BoxStatus::Above;
    else b.status = b.single_cell() ? BoxStatus::MixedLeaf : BoxStatus::Undecided;
  }

  static bool settle(Box& b, BoxStatus s) {
    b.trusted = false;
    b.status = s;
    return true;
  }

  // Archive values are trusted iff r > tau_c + bpa, one draw per box.
  bool trust(const Box& b) const {
    if (config_.mode != EbtMode::Archive || b.trust_revoked || !b.has_samples()) return false;
    Rng rng(derive_seed(config_.seed, {b.level, b.index, 0x7472757374ULL}));
    return rng.uniform() > config_.tau_c + b.bpa;
  }

  void optimize(Box& b, Sense sense) {
    auto problem = unit_problem(model_, map_, d_, b.cells);
    GlobalSearchConfig c = config_.optimizer;
    c.seed = derive_seed(config_.seed, {b.level, b.index, sense == Sense::Maximize ? 1ULL : 0ULL,
                                        config_.optimizer.seed});
    auto r = global_optimize(problem, c, sense, &archive_);
    archive_.record(sense, Sample{r.x, r.cells, r.f});
    ++provenance_.optimizations;
    if (sense == Sense::Maximize) {
      if (r.f > b.est_max) {
        b.est_max = r.f;
        b.argmax = r.x;
      }
      refresh(b);
      b.max_bound = b.est_max;
    } else {
      if (r.f < b.est_min) {
        b.est_min = r.f;
        b.argmin = r.x;
      }
      refresh(b);
      b.min_bound = b.est_min;
    }
  }

  bool filter(Box& b) {
    if (b.bpa < threshold_ && filtered_sum_ + b.bpa < config_.filter_accuracy) {
      filtered_sum_ += b.bpa;
      b.status = BoxStatus::Filtered;
      ++provenance_.boxes_filtered;
      return true;
    }
    return false;
  }

  // Breadth-first decide/split. Filtering applies to boxes as they are
  // generated, so the starting boxes are never filtered; `force_first`
  // forces the decisions of the first generation.
  std::vector<Box> grow(std::vector<Box> frontier, double nu, bool force_first) {
    std::vector<Box> settled;
    bool first = true;
    while (!frontier.empty()) {
      std::vector<Box> next;
      for (auto& b : frontier) {
        if (b.status != BoxStatus::Filtered) decide(b, nu, force_first && first);
        if (b.status == BoxStatus::Undecided) {
          auto [l, r] = split_box(b, map_);
          ++provenance_.boxes_split;
          for (Box* c : {&l, &r}) {
            filter(*c);
            next.push_back(std::move(*c));
          }
        } else {
          settled.push_back(std::move(b));
        }
      }
      first = false;
      if (on_generation) on_generation(next, settled);
      frontier = std::move(next);
    }
    return settled;
  }

  // One refinement pass at nu; returns whether the leaf set changed.
  bool resolve(double nu) {
    bool changed = false;
    std::vector<Box> kept, open;
    for (auto& b : leaves_) {
      if (resolved_at(b, nu)) {
        kept.push_back(std::move(b));
      } else {
        b.status = BoxStatus::Undecided;
        open.push_back(std::move(b));
      }
    }
    if (!open.empty()) {
      changed = true;
      for (auto& b : open) {
        auto grown = grow({std::move(b)}, nu, false);
        kept.insert(kept.end(), std::make_move_iterator(grown.begin()), std::make_move_iterator(grown.end()));
      }
    }
    leaves_ = std::move(kept);

    // verification of trusted decisions, largest mass first
    for (;;) {
      double unverified = 0.0;
      std::size_t pick = leaves_.size();
      for (std::size_t k = 0; k < leaves_.size(); ++k) {
        const auto& b = leaves_[k];
        if (verified_at(b, nu)) continue;
        unverified += b.bpa;
        if (pick == leaves_.size() || b.bpa > leaves_[pick].bpa) pick = k;
      }
      if (unverified <= 1.0 - config_.tau_c + kMassTolerance || pick == leaves_.size()) break;
      changed = true;
      Box b = std::move(leaves_[pick]);
      leaves_.erase(leaves_.begin() + static_cast<std::ptrdiff_t>(pick));
      b.status = BoxStatus::Undecided;
      auto grown = grow({std::move(b)}, nu, true);
      leaves_.insert(leaves_.end(), std::make_move_iterator(grown.begin()), std::make_move_iterator(grown.end()));
    }
    return changed;
  }

  EvaluationCounter counter_;
  SystemModel model_;
  UnitHypercubeMap map_;
  std::vector<double> d_;
  EbtConfig config_;
  double threshold_;
  SampleArchive archive_;
  std::vector<Box> leaves_;
  double filtered_sum_ = 0.0;
  CurveProvenance provenance_;
};

/// Free-function form of EbtEngine::decide for a caller-owned engine.
inline void decide_box(Box& box, double nu, EbtEngine& engine, bool force = false) {
  engine.decide(box, nu, force);
}

/// One tree at nu starting from the whole unit hypercube.
inline TreeResult build_tree(const SystemModel& model, std::span<const double> d, const UncertainSpace& space,
                             double nu, const EbtConfig& config) {
  EbtEngine engine(model, {d.begin(), d.end()}, space, config);
  return engine.build(nu);
}

struct CurveRun {
  BeliefCurve curve;
  std::vector<Box> boxes;
  double nu_bar = 0.0;
  /// Counts for the tree at nu-bar alone.
  CurveProvenance tree_provenance;
};

/// Tree at nu-bar, then refinement at the targets; the curve is assembled
/// from the final leaf set over [nu_min, nu_max].
inline CurveRun approximate_curve(const SystemModel& model, std::span<const double> d,
                                  const UncertainSpace& space, double nu_min, double nu_max,
                                  const std::vector<double>& targets, const EbtConfig& config) {
  EbtEngine engine(model, {d.begin(), d.end()}, space, config);
  CurveRun run;
  run.nu_bar = config.select_nu_bar(nu_min, nu_max);
  run.tree_provenance = engine.build(run.nu_bar).provenance;
  std::vector<double> all = targets;
  all.push_back(run.nu_bar);
  engine.refine(all);
  run.boxes = engine.leaves();
  run.curve = engine.curve(run.nu_bar, nu_min, nu_max, all);
  return run;
}

/// Re-runs the tree on the boxes of a previous run at new thresholds.
inline BeliefCurve refine_curve(const SystemModel& model, std::span<const double> d, const UncertainSpace& space,
                                const std::vector<double>& targets, const EbtConfig& config,
                                std::vector<Box>& boxes, double nu_bar, double range_lo, double range_hi) {
  EbtEngine engine(model, {d.begin(), d.end()}, space, config);
  engine.adopt(boxes);
  engine.refine(targets);
  boxes = engine.leaves();
  return engine.curve(nu_bar, range_lo, range_hi, targets);
}

}  // namespace ebro

#endif  // EBRO_EBT_HPP
