#ifndef EBRO_MODELS_TOY_HPP
#define EBRO_MODELS_TOY_HPP

// Two-component toy budget coupled through h = u21 + u22:
//   f2 = d1^2 + d2^2 - u21^2 - u22^2 + 2 + u32
//   f1 = d3^2 + u1 + h
//   g  = f1 + f2
// Variable order: d = (d1, d2, d3), u = (u1, u21, u22, u32).

#include <span>
#include <string>
#include <vector>

#include "ebro/decompose.hpp"
#include "ebro/evidence.hpp"

namespace ebro::models {

enum class ToyVariant { A, B };

inline ToyVariant parse_toy_variant(const std::string& s) {
  if (s == "a" || s == "A" || s.empty() || s == "default") return ToyVariant::A;
  if (s == "b" || s == "B") return ToyVariant::B;
  throw std::invalid_argument("unknown toy bpa variant '" + s + "' (expected a or b)");
}

inline UncertainSpace toy_space(ToyVariant variant) {
  const std::vector<Interval> iv = {{0.0, 0.1}, {0.2, 0.4}, {0.5, 1.0}};
  const std::vector<double> bpa =
      variant == ToyVariant::A ? std::vector<double>{0.3, 0.6, 0.1} : std::vector<double>{0.3, 0.1, 0.6};
  return UncertainSpace({{"u1", iv, bpa}, {"u21", iv, bpa}, {"u22", iv, bpa}, {"u32", iv, bpa}});
}

inline double toy_g(std::span<const double> d, std::span<const double> u) {
  const double h = u[1] + u[2];
  const double f1 = d[2] * d[2] + u[0] + h;
  const double f2 = d[0] * d[0] + d[1] * d[1] - u[1] * u[1] - u[2] * u[2] + 2.0 + u[3];
  return f1 + f2;
}

inline DecomposableModel toy_decomposable(ToyVariant variant = ToyVariant::A) {
  DecomposableModel m;
  m.name = "toy";
  m.design_bounds = {{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  m.space = toy_space(variant);
  m.design_names = {"d1", "d2", "d3"};
  m.f1_design_index = {2};
  m.f1_uncertain_index = {0};
  m.f1 = [](Span d1, Span u1, Span h) { return d1[0] * d1[0] + u1[0] + h[0]; };
  Branch f2;
  f2.name = "f2";
  f2.design_index = {0, 1};
  f2.link_index = {1, 2};
  f2.own_index = {3};
  f2.f = [](Span d, Span u, Span u3) {
    return d[0] * d[0] + d[1] * d[1] - u[0] * u[0] - u[1] * u[1] + 2.0 + u3[0];
  };
  f2.h = [](Span, Span u) { return u[0] + u[1]; };
  m.branches.push_back(std::move(f2));
  m.reference = toy_g;
  return m;
}

}  // namespace ebro::models

#endif  // EBRO_MODELS_TOY_HPP
