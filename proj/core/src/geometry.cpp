#include "dpsqm/geometry.hpp"

#include <cmath>

#include "dpsqm/errors.hpp"

namespace dpsqm {

namespace {

void check_samples(int samples) {
  if (samples < 3) {
    throw UsageError("need at least 3 samples per closed curve");
  }
}

void check_level(int N) {
  if (N < 0) throw UsageError("level index must be nonnegative");
}

// Uniform angular samples of q = q_max cos(theta), p = p_max sin(theta).
void sample_section(OrbitGeometry& orbit, int samples, double t) {
  orbit.points.reserve(orbit.points.size() + std::size_t(samples));
  for (int k = 0; k < samples; ++k) {
    const double theta = 2.0 * M_PI * double(k) / double(samples);
    orbit.points.push_back(OrbitPoint{orbit.q_max * std::cos(theta),
                                      orbit.p_max * std::sin(theta), t});
  }
}

}  // namespace

std::string orbit_kind_name(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::ellipse:
      return "ellipse";
    case OrbitKind::circle:
      return "circle";
    case OrbitKind::cylinder:
      return "cylinder";
  }
  return "unknown";
}

OrbitGeometry classical_ellipse(double energy_over_hnu,
                                const Constants& constants, int samples) {
  constants.validate();
  check_samples(samples);
  if (!(energy_over_hnu > 0.0)) {
    throw UsageError("energy must be positive");
  }
  OrbitGeometry orbit;
  orbit.kind = OrbitKind::ellipse;
  orbit.N = -1;
  const double amplitude = std::sqrt(2.0 * energy_over_hnu);
  orbit.q_max = constants.l * amplitude;
  orbit.p_max = (constants.hbar / constants.l) * amplitude;
  orbit.radius = 0.0;
  sample_section(orbit, samples, 0.0);
  return orbit;
}

OrbitGeometry orbit_circle(int N, int samples) {
  check_level(N);
  check_samples(samples);
  OrbitGeometry orbit;
  orbit.kind = OrbitKind::circle;
  orbit.N = N;
  orbit.radius = std::sqrt(2.0 * double(N) + 1.0);
  orbit.q_max = orbit.radius;
  orbit.p_max = orbit.radius;
  sample_section(orbit, samples, 0.0);
  return orbit;
}

std::vector<OrbitGeometry> confocal_phase_cells(const std::vector<int>& levels,
                                                const Constants& constants,
                                                int samples) {
  constants.validate();
  check_samples(samples);
  if (levels.empty()) {
    throw UsageError("the level list must not be empty");
  }
  std::vector<OrbitGeometry> cells;
  cells.reserve(levels.size());
  for (int N : levels) {
    check_level(N);
    OrbitGeometry cell =
        classical_ellipse(double(N) + 0.5, constants, samples);
    cell.N = N;
    cells.push_back(std::move(cell));
  }
  return cells;
}

OrbitGeometry worldsheet_cylinder(int N, double t_min, double t_max,
                                  int samples_theta, int samples_t) {
  check_level(N);
  check_samples(samples_theta);
  if (samples_t < 2) throw UsageError("need at least 2 time samples");
  if (!(t_min < t_max)) {
    throw UsageError("degenerate time interval: need t_min < t_max");
  }
  OrbitGeometry orbit;
  orbit.kind = OrbitKind::cylinder;
  orbit.N = N;
  orbit.has_time = true;
  orbit.radius = std::sqrt(2.0 * double(N) + 1.0);
  orbit.q_max = orbit.radius;
  orbit.p_max = orbit.radius;
  orbit.points.reserve(std::size_t(samples_theta) * std::size_t(samples_t));
  for (int j = 0; j < samples_t; ++j) {
    const double t =
        t_min + (t_max - t_min) * double(j) / double(samples_t - 1);
    sample_section(orbit, samples_theta, t);
  }
  return orbit;
}

}  // namespace dpsqm
