#ifndef EBRO_UNIT_PROBLEM_HPP
#define EBRO_UNIT_PROBLEM_HPP

// Search problems over the unit hypercube for a fixed design point.

#include <span>
#include <vector>

#include "ebro/evidence.hpp"
#include "ebro/model.hpp"
#include "ebro/optimize.hpp"

namespace ebro {

/// Objective over one closed focal cell.
inline SmoothPiece cell_piece(const SystemModel& model, const UnitHypercubeMap& map,
                              const std::vector<double>& d, const CellIndex& cells) {
  SmoothPiece piece;
  auto [lo, hi] = map.cell_bounds(cells);
  piece.bounds = {std::move(lo), std::move(hi)};
  piece.cells = cells;
  piece.objective = [&model, &map, d, cells](std::span<const double> x) {
    std::vector<double> u(x.size());
    map.to_physical_in_cells(x, cells, u);
    return model(d, u);
  };
  return piece;
}

/// u -> f(d, u) over the box given by per-coordinate cell ranges; the box
/// closure resolves onto its own cells. Local refinement runs per cell.
inline SearchProblem unit_problem(const SystemModel& model, const UnitHypercubeMap& map,
                                  std::vector<double> d, std::vector<CellRange> box) {
  SearchProblem p;
  for (std::size_t i = 0; i < box.size(); ++i) {
    p.bounds.lower.push_back(map.boundary(i, box[i].lo));
    p.bounds.upper.push_back(map.boundary(i, box[i].hi));
  }
  p.objective = [&model, &map, d, box](std::span<const double> x) {
    return model(d, map.to_physical(x, box).u);
  };
  p.cell_of = [&map, box](std::span<const double> x) {
    CellIndex c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = map.locate(i, x[i], box[i]);
    return c;
  };
  p.piece_of = [&model, &map, d, box](std::span<const double> x) {
    CellIndex c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = map.locate(i, x[i], box[i]);
    return cell_piece(model, map, d, c);
  };
  return p;
}

inline std::vector<CellRange> full_box(const UnitHypercubeMap& map) {
  std::vector<CellRange> box(map.dimension());
  for (std::size_t i = 0; i < box.size(); ++i) box[i] = map.full_range(i);
  return box;
}

inline SearchProblem unit_problem(const SystemModel& model, const UnitHypercubeMap& map,
                                  std::vector<double> d) {
  return unit_problem(model, map, std::move(d), full_box(map));
}

}  // namespace ebro

#endif  // EBRO_UNIT_PROBLEM_HPP
