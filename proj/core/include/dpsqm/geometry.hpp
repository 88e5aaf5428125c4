#pragma once

#include <string>
#include <vector>

#include "dpsqm/units.hpp"

namespace dpsqm {

enum class OrbitKind { ellipse, circle, cylinder };

std::string orbit_kind_name(OrbitKind kind);

struct OrbitPoint {
  double q = 0.0;
  double p = 0.0;
  double t = 0.0;  // meaningful only when has_time is set on the parent
};

struct OrbitGeometry {
  OrbitKind kind = OrbitKind::circle;
  int N = -1;             // level index; -1 when not applicable
  bool has_time = false;  // cylinders carry a time coordinate
  double radius = 0.0;    // circles/cylinders: sqrt(2N+1)
  double q_max = 0.0;     // semi-axes of the phase-plane section
  double p_max = 0.0;
  std::vector<OrbitPoint> points;
};

// Level set of the dimensionless Hamiltonian
//   (1/2) [ (l/hbar)^2 p^2 + (q/l)^2 ] = E/(hbar nu),
// sampled parametrically; semi-axes q_max = l sqrt(2E/hbar nu),
// p_max = (hbar/l) sqrt(2E/hbar nu). Throws UsageError for nonpositive
// energy or fewer than 3 samples.
OrbitGeometry classical_ellipse(double energy_over_hnu,
                                const Constants& constants, int samples = 256);

// Circle q^2 + p^2 = 2N + 1 sampled at uniform angles.
OrbitGeometry orbit_circle(int N, int samples = 256);

// One ellipse per level at energy N + 1/2; in fundamental units these
// coincide pointwise with orbit_circle under the same sampling. Throws
// UsageError for an empty level list.
std::vector<OrbitGeometry> confocal_phase_cells(const std::vector<int>& levels,
                                                const Constants& constants,
                                                int samples = 256);

// Grid samples of the level-N circle swept over [t_min, t_max]:
// samples_theta x samples_t points (q, p, t). Throws UsageError for a
// degenerate time interval.
OrbitGeometry worldsheet_cylinder(int N, double t_min, double t_max,
                                  int samples_theta = 256, int samples_t = 64);

}  // namespace dpsqm
