#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hprr {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input failed schema or range validation.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Hard-mode constrained fit has no feasible point.
class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string& what, std::size_t conflicts)
      : Error(what), conflicts_(conflicts) {}

  /// Number of match constraints still violated by the soft-mode relaxation.
  std::size_t conflicts() const noexcept { return conflicts_; }

private:
  std::size_t conflicts_;
};

}  // namespace hprr
