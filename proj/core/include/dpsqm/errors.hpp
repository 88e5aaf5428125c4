#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpsqm {

// Invalid user-facing configuration; the CLI maps this to its usage exit code.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested time step violates the leapfrog stability bound dt < 2/omega_max.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(double requested_dt, double max_dt);

  double requested_dt() const { return requested_dt_; }
  double max_dt() const { return max_dt_; }
  // A comfortable step well inside the stability region.
  double suggested_dt() const { return 0.5 * max_dt_; }

 private:
  double requested_dt_;
  double max_dt_;
};

// An assembly (or its downstream dense stages) would exceed the memory budget.
class MemoryBudgetError : public std::runtime_error {
 public:
  MemoryBudgetError(std::size_t required_bytes, std::size_t budget_bytes);

  std::size_t required_bytes() const { return required_bytes_; }
  std::size_t budget_bytes() const { return budget_bytes_; }

 private:
  std::size_t required_bytes_;
  std::size_t budget_bytes_;
};

}  // namespace dpsqm
