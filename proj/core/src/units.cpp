#include "dpsqm/units.hpp"

#include <cmath>

#include "dpsqm/errors.hpp"

namespace dpsqm {

Constants Constants::fundamental() { return Constants{}; }

Constants Constants::explicit_si() {
  Constants k;
  k.hbar = 1.054571817e-34;
  k.c = 299792458.0;
  k.l = 1.616255e-35;
  k.nu = 1.0;
  k.mode = UnitMode::explicit_constants;
  return k;
}

void Constants::validate() const {
  const auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(hbar) || !ok(c) || !ok(l) || !ok(nu)) {
    throw UsageError("all physical constants must be positive and finite");
  }
}

std::string unit_mode_name(UnitMode mode) {
  return mode == UnitMode::fundamental ? "fundamental" : "explicit";
}

}  // namespace dpsqm
