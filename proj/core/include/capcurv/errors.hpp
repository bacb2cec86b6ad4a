#pragma once

#include <stdexcept>
#include <string>

namespace capcurv {

/// Argument outside the mathematical domain of an operation (r outside the
/// validity ball, lambda <= 1, R1 >= R2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A model or configuration failed its invariant checks.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested computation is not available for this model family.
class UnsupportedMethod : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Operation precondition violated by otherwise valid inputs.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative solver failed to meet its stopping criterion.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double last_relative_change)
      : std::runtime_error(what),
        iterations_(iterations),
        last_relative_change_(last_relative_change) {}

  int iterations() const noexcept { return iterations_; }
  double last_relative_change() const noexcept { return last_relative_change_; }

 private:
  int iterations_;
  double last_relative_change_;
};

}  // namespace capcurv
