#pragma once

#include <string>

namespace dpsqm {

enum class UnitMode { fundamental, explicit_constants };

// Physical constants entering the operator and energy scales. In
// fundamental mode every constant is 1 and energies are dimensionless; in
// explicit mode lengths carry l and energies carry hbar * nu.
struct Constants {
  double hbar = 1.0;  // action scale
  double c = 1.0;     // speed of light
  double l = 1.0;     // characteristic length
  double nu = 1.0;    // oscillator frequency
  UnitMode mode = UnitMode::fundamental;

  static Constants fundamental();
  // SI-flavoured defaults for explicit mode: hbar in J s, c in m/s,
  // Planck-scale l in m, nu in Hz (override as needed).
  static Constants explicit_si();

  // hbar * nu; equals 1 in fundamental mode.
  double energy_scale() const { return hbar * nu; }

  // Throws UsageError unless all constants are positive and finite.
  void validate() const;
};

std::string unit_mode_name(UnitMode mode);

}  // namespace dpsqm
