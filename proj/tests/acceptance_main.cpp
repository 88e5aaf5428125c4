// Acceptance gate: eight behavioral criteria, one pass/fail line each.
// Tolerances and time budgets are pinned here on purpose; a change that
// moves them is a change in what the library promises.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpsqm/geometry.hpp"
#include "dpsqm/klein_gordon.hpp"
#include "dpsqm/lattice.hpp"
#include "dpsqm/oscillator.hpp"
#include "dpsqm/poincare.hpp"
#include "dpsqm/units.hpp"

using namespace dpsqm;

namespace {

using Clock = std::chrono::steady_clock;

int criteria_run = 0;
int criteria_failed = 0;

double seconds_since(const Clock::time_point& start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string describe(const char* fmt, ...) {
  char buffer[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  return std::string(buffer);
}

void report(const std::string& name, bool pass, const std::string& details) {
  ++criteria_run;
  if (!pass) ++criteria_failed;
  std::printf("[%d/8] %-46s %s  (%s)\n", criteria_run, name.c_str(),
              pass ? "PASS" : "FAIL", details.c_str());
  std::fflush(stdout);
}

void run_criterion(const std::string& name,
                   const std::function<void(const std::string&)>& body) {
  try {
    body(name);
  } catch (const std::exception& e) {
    report(name, false, describe("threw: %s", e.what()));
  }
}

// 1. The 65-state discrete Hamiltonian reproduces the ladder spectrum
//    N + 1/2 with basis-aligned eigenvectors for every interior label.
void criterion_discrete_spectrum(const std::string& name) {
  const auto start = Clock::now();
  const Spectrum spectrum = solve_discrete_spectrum(64, Constants::fundamental());
  double worst_energy = 0.0;
  double worst_overlap = 0.0;
  for (int N = 0; N <= 62; ++N) {
    worst_energy = std::max(
        worst_energy, std::abs(spectrum.energies[N] - (N + 0.5)));
    worst_overlap =
        std::max(worst_overlap, 1.0 - spectrum.overlaps[N]);
  }
  const double elapsed = seconds_since(start);
  const bool pass =
      worst_energy <= 1e-10 && worst_overlap < 1e-10 && elapsed < 1.0;
  report(name, pass,
         describe("max |E_N - (N+1/2)| = %.2e (tol 1e-10), "
                  "max overlap deficit = %.2e (tol 1e-10), %.2f s (< 1 s)",
                  worst_energy, worst_overlap, elapsed));
}

// 2. The weighted difference operators satisfy their commutation identity
//    on every interior basis state at three cutoffs.
void criterion_commutation(const std::string& name) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int n_max : {4, 16, 64}) {
    for (int N = 0; N <= n_max - 2; ++N) {
      worst = std::max(worst, commutation_deviation(n_max, N));
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst <= 1e-14 && elapsed < 1.0;
  report(name, pass,
         describe("max deviation = %.2e (tol 1e-14) over n_max in {4,16,64}, "
                  "%.2f s (< 1 s)",
                  worst, elapsed));
}

// 3. Discrete matrix, position integral, and action-variable integral give
//    the same energies; the continuum states are orthonormal and satisfy
//    their second-order equation.
void criterion_representations(const std::string& name) {
  const auto start = Clock::now();
  const Constants fund = Constants::fundamental();
  const Spectrum spectrum = solve_discrete_spectrum(64, fund);

  double worst_energy = 0.0;
  for (int N = 0; N <= 12; ++N) {
    const double want = (N + 0.5) * fund.energy_scale();
    worst_energy = std::max(
        {worst_energy, std::abs(spectrum.energies[N] - want),
         std::abs(energy_q_representation(N, fund) - want),
         std::abs(energy_y_representation(N, fund) - want)});
  }

  double worst_overlap = 0.0;
  for (int N = 0; N <= 12; ++N) {
    for (int M = N; M <= 12; ++M) {
      const double kron = (N == M) ? 1.0 : 0.0;
      worst_overlap = std::max(
          worst_overlap, std::abs(eigenstate_overlap_q(N, M, fund) - kron));
    }
  }

  double worst_residual = 0.0;
  for (int N = 0; N <= 8; ++N) {
    worst_residual = std::max(worst_residual, y_equation_residual(N));
  }

  const double elapsed = seconds_since(start);
  const bool pass = worst_energy <= 1e-10 && worst_overlap <= 1e-8 &&
                    worst_residual < 1e-5 && elapsed < 5.0;
  report(name, pass,
         describe("energies = %.2e (tol 1e-10), orthonormality = %.2e "
                  "(tol 1e-8), equation residual = %.2e (tol 1e-5), "
                  "%.2f s (< 5 s)",
                  worst_energy, worst_overlap, worst_residual, elapsed));
}

// 4. Phase-plane circle radii encode the level energies: radius^2 equals
//    twice the dimensionless energy, with the first five radii exact.
void criterion_orbit_radii(const std::string& name) {
  const Constants fund = Constants::fundamental();
  const Spectrum spectrum = solve_discrete_spectrum(16, fund);
  double worst_law = 0.0;
  for (int N = 0; N <= spectrum.interior_max; ++N) {
    const double radius = orbit_circle(N, 8).radius;
    const double energy = spectrum.energies[N] / fund.energy_scale();
    worst_law = std::max(worst_law, std::abs(radius * radius - 2.0 * energy));
  }

  const std::array<double, 5> want = {1.0, std::sqrt(3.0), std::sqrt(5.0),
                                      std::sqrt(7.0), 3.0};
  double worst_pinned = 0.0;
  for (int N = 0; N < 5; ++N) {
    worst_pinned = std::max(
        worst_pinned,
        std::abs(orbit_circle(N, 8).radius - want[std::size_t(N)]));
  }

  const bool pass = worst_law <= 1e-10 && worst_pinned == 0.0;
  report(name, pass,
         describe("max |r^2 - 2 E_N| = %.2e (tol 1e-10), first five radii "
                  "off by %.2e (exact)",
                  worst_law, worst_pinned));
}

// 5. An exact eigenmode of the (3+1) evolution tracks cos(omega t) for a
//    thousand steps, conserves energy, and reverses exactly.
void criterion_eigenmode_evolution(const std::string& name) {
  const auto start = Clock::now();
  const int n_max = 6;
  const int steps = 1000;
  const SparseReal k = assemble_spatial_kg_generator(n_max, 1.0);
  const Eigenmode mode = spatial_eigenmodes(k).front();
  const double dt = 1e-3 / mode.omega;  // omega dt = 1e-3 <= 0.05

  const VecReal zero = VecReal::Zero(mode.vector.size());
  const EvolutionResult forward =
      evolve_leapfrog(k, mode.vector, zero, dt, steps);

  double worst_track = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double projection = mode.vector.dot(forward.phi.col(s));
    worst_track = std::max(
        worst_track,
        std::abs(projection - std::cos(mode.omega * double(s) * dt)));
  }

  const EvolutionResult reversed = evolve_leapfrog(
      k, forward.phi.col(steps), VecReal(-forward.pi.col(steps)), dt, steps);
  const double reversal = std::max(
      (reversed.phi.col(steps) - mode.vector).cwiseAbs().maxCoeff(),
      reversed.pi.col(steps).cwiseAbs().maxCoeff());

  const double elapsed = seconds_since(start);
  const bool pass = worst_track <= 1e-4 && forward.energy_drift < 1e-6 &&
                    reversal <= 1e-10 && elapsed < 30.0;
  report(name, pass,
         describe("cos tracking = %.2e (tol 1e-4), drift = %.2e (tol 1e-6), "
                  "reversal = %.2e (tol 1e-10), %.2f s (< 30 s)",
                  worst_track, forward.energy_drift, reversal, elapsed));
}

// 6. The 4-axis wave operator's full spectrum matches the tensor sum of
//    one-axis spectra shifted by the squared mass, for four cutoffs.
void criterion_spectrum_oracle(const std::string& name) {
  const double m = 1.3;
  double worst = 0.0;
  for (int n_max = 3; n_max <= 6; ++n_max) {
    const SparseReal k4 = assemble_kg_operator_4d(n_max, m);
    const DenseReal k4_dense(k4);
    const Eigen::SelfAdjointEigenSolver<DenseReal> solver(
        k4_dense, Eigen::EigenvaluesOnly);
    const VecReal measured = solver.eigenvalues();

    const SparseReal sharp = build_delta_sharp(n_max);
    const DenseReal sharp2_dense(SparseReal(sharp * sharp));
    const Eigen::SelfAdjointEigenSolver<DenseReal> axis(sharp2_dense,
                                                        Eigen::EigenvaluesOnly);
    const VecReal s = axis.eigenvalues();

    const int dim1 = n_max + 1;
    std::vector<double> expected;
    expected.reserve(std::size_t(dim1) * dim1 * dim1 * dim1);
    for (int a = 0; a < dim1; ++a) {
      for (int b = 0; b < dim1; ++b) {
        for (int c = 0; c < dim1; ++c) {
          for (int d = 0; d < dim1; ++d) {
            expected.push_back(s[a] + s[b] + s[c] - s[d] - m * m);
          }
        }
      }
    }
    std::sort(expected.begin(), expected.end());

    for (Eigen::Index i = 0; i < measured.size(); ++i) {
      worst = std::max(worst,
                       std::abs(measured[i] - expected[std::size_t(i)]));
    }
  }
  const bool pass = worst <= 1e-9;
  report(name, pass,
         describe("max eigenvalue mismatch = %.2e (tol 1e-9) over "
                  "n_max = 3..6, m = %.1f",
                  worst, m));
}

// 7. The quadratic invariant commutes with all ten generators on the
//    interior; finite translations preserve the wave operator, start at the
//    exact identity, and stay orthogonal.
void criterion_symmetry_algebra(const std::string& name) {
  const auto start = Clock::now();
  const int n_max = 6;
  const std::array<double, 4> c{0.1, 0.2, 0.0, 0.05};
  const std::array<double, 6> no_rotation{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

  const PoincareGenerators gens = build_generators(n_max);
  double worst_commutator = 0.0;
  for (const CheckReport& r : check_casimir_commutation(gens, 4, 1e-12)) {
    worst_commutator = std::max(worst_commutator, r.norm_interior);
  }

  const CheckReport invariance =
      check_kg_invariance_4d(n_max, 1.0, c, no_rotation, 4, 1e-10);

  const DenseReal at_zero = build_finite_transform(
      n_max, {0.0, 0.0, 0.0, 0.0}, no_rotation);
  const double identity_deviation = full_max(DenseReal(
      at_zero - DenseReal::Identity(at_zero.rows(), at_zero.cols())));

  const DenseReal u = build_finite_transform(n_max, c, no_rotation);
  const double orthogonality = full_max(DenseReal(
      u.transpose() * u - DenseReal::Identity(u.rows(), u.cols())));

  const double elapsed = seconds_since(start);
  const bool pass = worst_commutator < 1e-12 &&
                    invariance.norm_interior <= 1e-10 &&
                    identity_deviation == 0.0 && orthogonality <= 1e-12 &&
                    elapsed < 60.0;
  report(name, pass,
         describe("commutators = %.2e (tol 1e-12), invariance = %.2e "
                  "(tol 1e-10), U(0)-I = %.1e (exact), U^T U - I = %.2e "
                  "(tol 1e-12), %.1f s (< 60 s)",
                  worst_commutator, invariance.norm_interior,
                  identity_deviation, orthogonality, elapsed));
}

// 8. Perturbing an exact eigenmode by the first-order boost generator grows
//    the field-equation residual quadratically in the rapidity.
void criterion_boost_growth(const std::string& name) {
  const BoostInvarianceReport r =
      check_boost_invariance_3plus1(6, 1.0, {1.0, 0.0, 0.0}, 1000, 3, 1.9);
  const bool pass = r.pass && r.slope >= 1.9;
  report(name, pass,
         describe("log-log slope = %.4f (floor 1.9) over eps = "
                  "{1e-2, 5e-3, 2.5e-3}, growths = %.1e/%.1e/%.1e",
                  r.slope, r.growths[0], r.growths[1], r.growths[2]));
}

}  // namespace

int main() {
  run_criterion("discrete spectrum matches the ladder",
                criterion_discrete_spectrum);
  run_criterion("interior commutation identity holds", criterion_commutation);
  run_criterion("three representations agree on energies",
                criterion_representations);
  run_criterion("orbit radii encode the level energies",
                criterion_orbit_radii);
  run_criterion("eigenmode evolution tracks cos(omega t)",
                criterion_eigenmode_evolution);
  run_criterion("4-axis spectrum matches the tensor oracle",
                criterion_spectrum_oracle);
  run_criterion("symmetry algebra holds on the interior",
                criterion_symmetry_algebra);
  run_criterion("boost residual growth is quadratic", criterion_boost_growth);

  if (criteria_failed == 0) {
    std::printf("all %d criteria passed\n", criteria_run);
    return 0;
  }
  std::printf("%d of %d criteria failed\n", criteria_failed, criteria_run);
  return 1;
}
