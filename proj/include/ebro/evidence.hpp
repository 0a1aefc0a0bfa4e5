#ifndef EBRO_EVIDENCE_HPP
#define EBRO_EVIDENCE_HPP

// Dempster-Shafer interval evidence: uncertain variables with bpa over
// intervals, product focal elements and the unit-hypercube layout that
// packs all focal elements side by side.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ebro/errors.hpp"

namespace ebro {

inline constexpr double kMassTolerance = 1e-9;

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct UncertainVariable {
  std::string name;
  std::vector<Interval> intervals;
  std::vector<double> bpa;

  /// Throws InvalidSpace when the bpa axioms or interval ordering fail.
  /// Overlapping and disconnected intervals are both allowed.
  void validate() const {
    if (intervals.empty()) throw InvalidSpace("variable '" + name + "' has no intervals");
    if (intervals.size() != bpa.size())
      throw InvalidSpace("variable '" + name + "': interval and bpa counts differ");
    double total = 0.0;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      const auto& iv = intervals[k];
      if (!(std::isfinite(iv.lower) && std::isfinite(iv.upper)) || !(iv.lower < iv.upper))
        throw InvalidSpace("variable '" + name + "': interval " + std::to_string(k) +
                           " needs lower < upper");
      if (!(bpa[k] > 0.0) || !std::isfinite(bpa[k]))
        throw InvalidSpace("variable '" + name + "': bpa must be positive");
      total += bpa[k];
    }
    if (std::abs(total - 1.0) > kMassTolerance)
      throw InvalidSpace("variable '" + name + "': bpa sums to " + std::to_string(total));
  }

  double total_width() const {
    double w = 0.0;
    for (const auto& iv : intervals) w += iv.width();
    return w;
  }

  /// Smallest interval enclosing every focal interval of this variable.
  Interval hull() const {
    Interval h = intervals.front();
    for (const auto& iv : intervals) {
      h.lower = std::min(h.lower, iv.lower);
      h.upper = std::max(h.upper, iv.upper);
    }
    return h;
  }
};

class UncertainSpace {
public:
  UncertainSpace() = default;
  explicit UncertainSpace(std::vector<UncertainVariable> variables)
      : variables_(std::move(variables)) {
    if (variables_.empty()) throw InvalidSpace("uncertain space has no variables");
    for (const auto& v : variables_) v.validate();
  }

  std::size_t dimension() const { return variables_.size(); }
  const std::vector<UncertainVariable>& variables() const { return variables_; }
  const UncertainVariable& variable(std::size_t i) const { return variables_.at(i); }

  /// Product of per-variable interval counts.
  std::size_t focal_count() const {
    std::size_t n = 1;
    for (const auto& v : variables_) n *= v.intervals.size();
    return n;
  }

  /// Sub-space over the listed variables (in the given order).
  UncertainSpace subspace(std::span<const std::size_t> indices) const {
    std::vector<UncertainVariable> vars;
    vars.reserve(indices.size());
    for (auto i : indices) vars.push_back(variables_.at(i));
    return UncertainSpace(std::move(vars));
  }

private:
  std::vector<UncertainVariable> variables_;
};

/// Per-variable interval index; doubles as a focal-cell address in the
/// unit hypercube.
using CellIndex = std::vector<std::size_t>;

struct FocalElement {
  CellIndex index;
  std::vector<Interval> bounds;
  double bpa = 0.0;
};

/// Lexicographic position of a cell index (first variable most significant).
inline std::size_t linear_index(const UncertainSpace& space, const CellIndex& index) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < space.dimension(); ++i)
    pos = pos * space.variable(i).intervals.size() + index[i];
  return pos;
}

inline std::vector<FocalElement> build_focal_elements(const UncertainSpace& space) {
  if (space.dimension() == 0) throw InvalidSpace("uncertain space has no variables");
  const std::size_t n = space.dimension();
  std::vector<FocalElement> out;
  out.reserve(space.focal_count());
  CellIndex idx(n, 0);
  for (;;) {
    FocalElement fe;
    fe.index = idx;
    fe.bounds.resize(n);
    fe.bpa = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& var = space.variable(i);
      fe.bounds[i] = var.intervals[idx[i]];
      fe.bpa *= var.bpa[idx[i]];
    }
    out.push_back(std::move(fe));
    // odometer increment, last variable fastest
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < space.variable(i).intervals.size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

/// Half-open range of cells [lo, hi) along one coordinate.
struct CellRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t count() const { return hi - lo; }
  bool contains(std::size_t k) const { return k >= lo && k < hi; }
  friend bool operator==(const CellRange&, const CellRange&) = default;
};

struct MappedPoint {
  std::vector<double> u;
  CellIndex cells;
};

/// Width-proportional layout of every variable's intervals on [0, 1] and the
/// per-cell affine map back to physical units.
///
/// Cell k of coordinate i spans width(interval k) / total width; cells are
/// concatenated in interval-list order, so overlapping physical intervals get
/// disjoint cells. Plain `to_physical` resolves shared boundaries with
/// half-open cells (last cell closed). The range-restricted variants resolve
/// within a box so that the closure of the box maps onto the closures of its
/// own cells.
class UnitHypercubeMap {
public:
  UnitHypercubeMap() = default;
  explicit UnitHypercubeMap(const UncertainSpace& space) {
    const std::size_t n = space.dimension();
    if (n == 0) throw InvalidSpace("uncertain space has no variables");
    boundaries_.resize(n);
    physical_.resize(n);
    bpa_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& var = space.variable(i);
      const double total = var.total_width();
      auto& b = boundaries_[i];
      b.resize(var.intervals.size() + 1);
      b[0] = 0.0;
      double acc = 0.0;
      for (std::size_t k = 0; k < var.intervals.size(); ++k) {
        acc += var.intervals[k].width();
        b[k + 1] = acc / total;
      }
      b.back() = 1.0;
      physical_[i] = var.intervals;
      bpa_[i] = var.bpa;
    }
  }

  std::size_t dimension() const { return boundaries_.size(); }
  std::size_t cell_count(std::size_t i) const { return physical_[i].size(); }
  const std::vector<double>& boundaries(std::size_t i) const { return boundaries_[i]; }
  double boundary(std::size_t i, std::size_t k) const { return boundaries_[i][k]; }
  const Interval& physical(std::size_t i, std::size_t k) const { return physical_[i][k]; }
  double cell_bpa(std::size_t i, std::size_t k) const { return bpa_[i][k]; }

  CellRange full_range(std::size_t i) const { return {0, cell_count(i)}; }

  /// Cell of coordinate i containing x within [range.lo, range.hi); cells are
  /// half-open except the last one of the range.
  std::size_t locate(std::size_t i, double x, CellRange range) const {
    const auto& b = boundaries_[i];
    if (!(x >= b[range.lo] && x <= b[range.hi]))
      throw DomainError("coordinate " + std::to_string(i) + " value " + std::to_string(x) +
                        " outside its range");
    for (std::size_t k = range.lo; k + 1 < range.hi; ++k)
      if (x < b[k + 1]) return k;
    return range.hi - 1;
  }

  std::size_t locate(std::size_t i, double x) const { return locate(i, x, full_range(i)); }

  /// Affine image of x under cell k of coordinate i.
  double to_physical(std::size_t i, std::size_t k, double x) const {
    const double bl = boundaries_[i][k];
    const double bu = boundaries_[i][k + 1];
    const auto& p = physical_[i][k];
    const double scale = p.width() / (bu - bl);
    if (x <= bl) return p.lower;
    if (x >= bu) return p.upper;
    return scale * x + p.lower - scale * bl;
  }

  /// Inverse of the per-cell affine map.
  double to_unit(std::size_t i, std::size_t k, double u) const {
    const double bl = boundaries_[i][k];
    const double bu = boundaries_[i][k + 1];
    const auto& p = physical_[i][k];
    if (u <= p.lower) return bl;
    if (u >= p.upper) return bu;
    return bl + (u - p.lower) * (bu - bl) / p.width();
  }

  MappedPoint to_physical(std::span<const double> x) const {
    check_size(x.size());
    MappedPoint out{std::vector<double>(x.size()), CellIndex(x.size())};
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.cells[i] = locate(i, x[i]);
      out.u[i] = to_physical(i, out.cells[i], x[i]);
    }
    return out;
  }

  /// Resolution restricted to a box given as one cell range per coordinate.
  MappedPoint to_physical(std::span<const double> x, std::span<const CellRange> box) const {
    check_size(x.size());
    MappedPoint out{std::vector<double>(x.size()), CellIndex(x.size())};
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.cells[i] = locate(i, x[i], box[i]);
      out.u[i] = to_physical(i, out.cells[i], x[i]);
    }
    return out;
  }

  /// Fills u in place for a fixed cell per coordinate (closed cells).
  void to_physical_in_cells(std::span<const double> x, const CellIndex& cells,
                            std::span<double> u) const {
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = to_physical(i, cells[i], x[i]);
  }

  std::vector<double> to_unit(std::span<const double> u, const CellIndex& cells) const {
    check_size(u.size());
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = to_unit(i, cells[i], u[i]);
    return x;
  }

  /// Unit-hypercube bounds of one focal cell.
  std::pair<std::vector<double>, std::vector<double>> cell_bounds(const CellIndex& cells) const {
    std::vector<double> lo(cells.size()), hi(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      lo[i] = boundaries_[i][cells[i]];
      hi[i] = boundaries_[i][cells[i] + 1];
    }
    return {std::move(lo), std::move(hi)};
  }

private:
  void check_size(std::size_t n) const {
    if (n != dimension())
      throw DomainError("point has " + std::to_string(n) + " coordinates, map has " +
                        std::to_string(dimension()));
  }

  std::vector<std::vector<double>> boundaries_;
  std::vector<std::vector<Interval>> physical_;
  std::vector<std::vector<double>> bpa_;
};

inline UnitHypercubeMap build_unit_map(const UncertainSpace& space) { return UnitHypercubeMap(space); }

/// Proposition A = { f <= threshold }; ties belong to A.
struct Proposition {
  double threshold = 0.0;
  bool holds(double f) const { return f <= threshold; }
};

/// Belief of A from the plausibility of its complement.
inline double bel_from_complement(double pl_not_a) { return 1.0 - pl_not_a; }

}  // namespace ebro

#endif  // EBRO_EVIDENCE_HPP
