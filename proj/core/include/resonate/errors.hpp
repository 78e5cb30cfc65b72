#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace resonate {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  using std::domain_error::domain_error;
};

// Bad or missing configuration (unknown builtin, malformed file, bad key).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The frequency-matching scan found no root of omega(r) = kappa*s0/varkappa.
class NoResonanceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A root was found but omega'(a) is numerically zero.
class DegenerateResonanceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The generic averaging engine does not build this order; register a closed form.
class UnsupportedOrderError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Polynomial fit through the rho samples failed even after the grid retry.
class ResolutionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A registered closed form violates the degree bounds of the expansion.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive step size underflowed; carries the last accepted state.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(std::string msg, double t, std::array<double, 2> y)
      : std::runtime_error(std::move(msg)), t_last(t), y_last(y) {}
  double t_last;
  std::array<double, 2> y_last;
};

}  // namespace resonate
