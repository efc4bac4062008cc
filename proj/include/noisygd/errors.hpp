#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace noisygd {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of the operation.
struct DomainError : Error {
  using Error::Error;
};

// A stated precondition of a guarantee does not hold; `condition()` names it.
struct PreconditionError : Error {
  PreconditionError(std::string condition, const std::string& detail)
      : Error("precondition violated: " + condition +
              (detail.empty() ? "" : " (" + detail + ")")),
        condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

// Two inputs that must agree (orders, dimensions, variances) do not.
struct MismatchError : Error {
  using Error::Error;
};

// The requested privacy budget cannot be met for the given problem size.
struct InfeasibleBudgetError : Error {
  using Error::Error;
};

// The loss model carries no analytic certificate for the requested quantity.
struct UnsupportedLossError : Error {
  using Error::Error;
};

// A file could not be read, parsed, or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace noisygd
