#ifndef EBRO_ERRORS_HPP
#define EBRO_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebro {

/// Malformed uncertain space (bpa axioms, interval ordering, empty frame).
class InvalidSpace : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A point handed to a map lies outside its domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A box that covers a single focal cell was asked to split.
class CannotSplit : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class OptimizationFailed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown by model evaluators; carries the offending (d, u) once it has
/// passed through an evaluation wrapper.
class ModelError : public std::runtime_error {
public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
  ModelError(const std::string& what, std::vector<double> d, std::vector<double> u)
      : std::runtime_error(describe(what, d, u)), design(std::move(d)), uncertain(std::move(u)) {}

  std::vector<double> design;
  std::vector<double> uncertain;

private:
  static std::string describe(const std::string& what, const std::vector<double>& d,
                              const std::vector<double>& u) {
    std::ostringstream os;
    os << what << " at d=(";
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << ") u=(";
    for (std::size_t i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
    os << ")";
    return os.str();
  }
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ebro

#endif  // EBRO_ERRORS_HPP
