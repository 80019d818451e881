#pragma once

#include <stdexcept>
#include <string>

namespace mflt {

/// Malformed input: invalid tree, inconsistent embedding, bad parameters.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested size exceeds a documented enumeration or runtime cap.
class CapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generating function evaluated at its singular point.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature did not reach its tolerance within the evaluation budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace mflt
