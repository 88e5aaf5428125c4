#include "dpsqm/errors.hpp"

#include <sstream>

namespace dpsqm {

namespace {

std::string stability_message(double requested_dt, double max_dt) {
  std::ostringstream os;
  os << "time step " << requested_dt
     << " violates the leapfrog stability bound dt < " << max_dt
     << "; suggested dt = " << 0.5 * max_dt;
  return os.str();
}

std::string budget_message(std::size_t required, std::size_t budget) {
  std::ostringstream os;
  os << "assembly requires " << required
     << " bytes for its dense stages, exceeding the memory budget of "
     << budget << " bytes";
  return os.str();
}

}  // namespace

StabilityError::StabilityError(double requested_dt, double max_dt)
    : std::runtime_error(stability_message(requested_dt, max_dt)),
      requested_dt_(requested_dt),
      max_dt_(max_dt) {}

MemoryBudgetError::MemoryBudgetError(std::size_t required_bytes,
                                     std::size_t budget_bytes)
    : std::runtime_error(budget_message(required_bytes, budget_bytes)),
      required_bytes_(required_bytes),
      budget_bytes_(budget_bytes) {}

}  // namespace dpsqm
