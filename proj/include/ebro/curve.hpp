#ifndef EBRO_CURVE_HPP
#define EBRO_CURVE_HPP

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebro {

struct CurvePoint {
  double nu = 0.0;
  double bel = 0.0;
  double pl = 0.0;
  double bel_err = 0.0;
  double pl_err = 0.0;
  /// Resolved at this threshold (every box decided against nu).
  bool exact = true;
};

struct CurveProvenance {
  std::size_t optimizations = 0;
  std::size_t archive_decisions = 0;
  std::size_t witness_decisions = 0;
  std::size_t boxes_filtered = 0;
  std::size_t boxes_split = 0;
  std::size_t boxes_decided = 0;
  std::size_t evaluations = 0;
  double filtered_mass = 0.0;
  double unverified_mass = 0.0;
};

/// Cumulative Bel/Pl samples sorted by threshold.
struct BeliefCurve {
  std::vector<CurvePoint> points;
  CurveProvenance provenance;

  /// Throws std::logic_error naming the first violated curve invariant.
  void check(double tolerance = 1e-12) const {
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& p = points[k];
      if (p.bel < -tolerance || p.pl > 1.0 + tolerance || p.bel > p.pl + tolerance)
        throw std::logic_error("curve point violates 0 <= Bel <= Pl <= 1 at nu=" + std::to_string(p.nu));
      if (p.bel_err < 0.0 || p.pl_err < 0.0) throw std::logic_error("negative error budget");
      if (k > 0) {
        const auto& q = points[k - 1];
        if (p.nu < q.nu) throw std::logic_error("curve points are not sorted");
        if (p.bel < q.bel - tolerance || p.pl < q.pl - tolerance)
          throw std::logic_error("curve is not monotone at nu=" + std::to_string(p.nu));
      }
    }
  }

  const CurvePoint* at(double nu) const {
    for (const auto& p : points)
      if (p.nu == nu) return &p;
    return nullptr;
  }
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_curve_csv(std::ostream& os, const BeliefCurve& curve) {
  os << "nu,bel,pl,bel_err,pl_err,exact_flag\n";
  for (const auto& p : curve.points)
    os << format_number(p.nu) << ',' << format_number(p.bel) << ',' << format_number(p.pl) << ','
       << format_number(p.bel_err) << ',' << format_number(p.pl_err) << ',' << (p.exact ? 1 : 0)
       << '\n';
}

inline BeliefCurve read_curve_csv(std::istream& is) {
  BeliefCurve curve;
  std::string line;
  if (!std::getline(is, line) || line.rfind("nu,bel,pl", 0) != 0)
    throw std::runtime_error("curve csv: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 6) throw std::runtime_error("curve csv: expected 6 columns");
    curve.points.push_back({v[0], v[1], v[2], v[3], v[4], v[5] != 0.0});
  }
  return curve;
}

/// Two-column gnuplot data (nu, value).
inline void write_plot_data(std::ostream& os, const BeliefCurve& curve, bool plausibility) {
  os << "# nu " << (plausibility ? "pl" : "bel") << '\n';
  for (const auto& p : curve.points)
    os << format_number(p.nu) << ' ' << format_number(plausibility ? p.pl : p.bel) << '\n';
}

}  // namespace ebro

#endif  // EBRO_CURVE_HPP
