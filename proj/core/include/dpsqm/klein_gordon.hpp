#pragma once

#include <cstddef>
#include <vector>

#include "dpsqm/types.hpp"

namespace dpsqm {

inline constexpr std::size_t kDefaultMemoryBudgetBytes =
    std::size_t{512} << 20;  // 512 MiB

// Bytes for the dense stages downstream of a 4-axis assembly (the operator
// matrix plus an equally sized eigenvector/transform workspace):
// 2 * (n_max+1)^8 * sizeof(double).
std::size_t dense_bytes_4d(int n_max);

// Wave operator on the 4-axis lattice (axes 1..3 spatial, axis 4 temporal):
//   K = sum_{j=1..3} lift(sharp_j)^2 - lift(sharp_4)^2 - m^2 I,
// real symmetric, dimension (n_max+1)^4. Throws MemoryBudgetError when the
// downstream dense stages would not fit the budget.
SparseReal assemble_kg_operator_4d(
    int n_max, double m,
    std::size_t memory_budget_bytes = kDefaultMemoryBudgetBytes);

struct NullResidual {
  double min_abs_eigenvalue = 0.0;
  VecReal vector;  // eigenvector attaining it
};

// Smallest-|eigenvalue| pair of a real symmetric operator (dense solve).
NullResidual kg_null_residual(const SparseReal& op);

// Spatial generator of the (3+1) evolution d^2 phi / dt^2 = K phi:
//   K = sum_{j=1..3} lift(sharp_j)^2 - m^2 I,
// real symmetric on (n_max+1)^3, negative definite for m > 0.
SparseReal assemble_spatial_kg_generator(int n_max, double m);

// Largest omega^2 = spectral radius of -K, by power iteration with a fixed
// deterministic seed.
double spectral_radius_estimate(const SparseReal& k, int iterations = 300);

// Leapfrog stability bound 2 / sqrt(spectral radius of -K).
double max_stable_dt(const SparseReal& k);

struct EvolutionResult {
  DenseReal phi;        // dim x (steps+1) field history
  DenseReal pi;         // dim x (steps+1) velocity history
  VecReal times;        // k * dt
  VecReal energy;       // E_k = |pi_k|^2/2 - phi_k . K phi_k / 2
  double energy_drift = 0.0;  // max_k |E_k - E_0| / |E_0|
};

// Velocity-Verlet (leapfrog) integration of d^2 phi / dt^2 = K phi.
// Throws StabilityError when dt >= max_stable_dt(k); exactly zero initial
// data stays exactly zero and the scheme is linear in the initial data.
EvolutionResult evolve_leapfrog(const SparseReal& k, const VecReal& phi0,
                                const VecReal& pi0, double dt, int steps);

struct ResidualStats {
  double max_abs = 0.0;
  double rms = 0.0;
};

// Residual of the central-difference form of the field equation,
//   (phi_{k+1} - 2 phi_k + phi_{k-1}) / dt^2 - K phi_k,
// over interior sites (3-axis interior with the given margin) and interior
// time slices k = 1..steps-1. Requires at least three uniformly spaced
// slices. A leapfrog history satisfies this identically to roundoff (the
// update rule is this recurrence); exactly time-sampled eigenmodes leave the
// O(dt^2) discretization residual.
ResidualStats kg_residual_3plus1(const DenseReal& phi_history, double dt,
                                 const SparseReal& k, int n_max,
                                 int margin = 2);

struct Eigenmode {
  VecReal vector;
  double omega = 0.0;  // temporal frequency, omega^2 = -eigenvalue of K
  int index = 0;       // position in ascending-omega order
};

// All eigenmodes of the (negative-definite) spatial generator, ascending in
// omega.
std::vector<Eigenmode> spatial_eigenmodes(const SparseReal& k);

// First mode (ascending omega) whose image under the axis-1 weighted
// antisymmetric difference has norm above coupling_floor, i.e. a mode the
// axis-1 boost generator acts on nontrivially. At even n_max the lowest
// mode is annihilated by every spatial sharp operator and must be skipped.
Eigenmode select_boost_coupled_mode(const SparseReal& k, int n_max,
                                    double coupling_floor = 0.5);

}  // namespace dpsqm
