#ifndef EBRO_MODEL_HPP
#define EBRO_MODEL_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ebro/errors.hpp"
#include "ebro/evidence.hpp"
#include "ebro/optimize.hpp"

namespace ebro {

using ModelFunction =
    std::function<double(std::span<const double> design, std::span<const double> uncertain)>;

/// A system budget f(d, u) together with its design box and evidence.
struct SystemModel {
  std::string name;
  Bounds design_bounds;
  UncertainSpace space;
  ModelFunction function;
  std::vector<std::string> design_names;

  std::size_t design_dimension() const { return design_bounds.size(); }
  std::size_t uncertain_dimension() const { return space.dimension(); }

  /// Evaluates f; failures are rethrown as ModelError carrying (d, u).
  double operator()(std::span<const double> d, std::span<const double> u) const {
    try {
      return function(d, u);
    } catch (const ModelError& e) {
      if (!e.design.empty() || !e.uncertain.empty()) throw;
      throw ModelError(e.what(), {d.begin(), d.end()}, {u.begin(), u.end()});
    } catch (const std::exception& e) {
      throw ModelError(e.what(), {d.begin(), d.end()}, {u.begin(), u.end()});
    }
  }
};

/// Shares a call tally between copies of a model.
struct EvaluationCounter {
  std::shared_ptr<std::size_t> calls = std::make_shared<std::size_t>(0);
  std::size_t value() const { return *calls; }
};

inline SystemModel counted(const SystemModel& model, const EvaluationCounter& counter) {
  SystemModel out = model;
  out.function = [inner = model.function, calls = counter.calls](std::span<const double> d,
                                                                 std::span<const double> u) {
    ++*calls;
    return inner(d, u);
  };
  return out;
}

}  // namespace ebro

#endif  // EBRO_MODEL_HPP
