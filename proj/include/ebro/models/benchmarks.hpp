#ifndef EBRO_MODELS_BENCHMARKS_HPP
#define EBRO_MODELS_BENCHMARKS_HPP

// Scalable analytic test functions and their interval evidence.

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebro/evidence.hpp"
#include "ebro/model.hpp"

namespace ebro::models {

namespace detail {
inline void same_size(std::span<const double> d, std::span<const double> u) {
  if (d.size() != u.size())
    throw std::invalid_argument("design and uncertain vectors differ in length (" + std::to_string(d.size()) +
                                " vs " + std::to_string(u.size()) + ")");
}
}  // namespace detail

/// sum d_i u_i^2
inline double mv1(std::span<const double> d, std::span<const double> u) {
  detail::same_size(d, u);
  double f = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) f += d[i] * u[i] * u[i];
  return f;
}

/// sum (u_i - d_i)^2
inline double mv2(std::span<const double> d, std::span<const double> u) {
  detail::same_size(d, u);
  double f = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) f += (u[i] - d[i]) * (u[i] - d[i]);
  return f;
}

/// sum (2 pi - u_i) cos(u_i - d_i)
inline double mv8(std::span<const double> d, std::span<const double> u) {
  detail::same_size(d, u);
  double f = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) f += (2.0 * std::numbers::pi - u[i]) * std::cos(u[i] - d[i]);
  return f;
}

enum class BpaVariant { Default, Equal };

inline BpaVariant parse_variant(const std::string& s) {
  if (s == "default" || s.empty()) return BpaVariant::Default;
  if (s == "EQ" || s == "eq") return BpaVariant::Equal;
  throw std::invalid_argument("unknown bpa variant '" + s + "' (expected default or EQ)");
}

/// Three disconnected intervals per coordinate, replicated n times.
inline UncertainSpace benchmark_bpa(const std::string& name, BpaVariant variant, std::size_t n) {
  if (n == 0) throw InvalidSpace("benchmark dimension must be positive");
  std::vector<Interval> intervals;
  if (name == "MV1" || name == "MV2") intervals = {{-5.0, -4.0}, {-3.0, 0.0}, {1.0, 3.0}};
  else if (name == "MV8") intervals = {{0.0, 1.0}, {2.0, 4.0}, {5.0, 2.0 * std::numbers::pi}};
  else throw std::invalid_argument("unknown benchmark '" + name + "'");
  const std::vector<double> bpa =
      variant == BpaVariant::Equal ? std::vector<double>{0.33, 0.33, 0.34} : std::vector<double>{0.1, 0.25, 0.65};
  std::vector<UncertainVariable> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back({"u" + std::to_string(i + 1), intervals, bpa});
  return UncertainSpace(std::move(vars));
}

inline SystemModel benchmark(const std::string& name, std::size_t n, BpaVariant variant = BpaVariant::Default) {
  SystemModel m;
  m.name = name;
  m.space = benchmark_bpa(name, variant, n);
  double lo = 1.0, hi = 5.0;
  if (name == "MV1") m.function = mv1;
  else if (name == "MV2") m.function = mv2;
  else {
    m.function = mv8;
    lo = 0.0;
    hi = 3.0;
  }
  m.design_bounds = {std::vector<double>(n, lo), std::vector<double>(n, hi)};
  for (std::size_t i = 0; i < n; ++i) m.design_names.push_back("d" + std::to_string(i + 1));
  return m;
}

}  // namespace ebro::models

#endif  // EBRO_MODELS_BENCHMARKS_HPP
