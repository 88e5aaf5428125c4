#pragma once

#include "dpsqm/types.hpp"
#include "dpsqm/units.hpp"

namespace dpsqm {

// Highest supported polynomial order for the Hermite recurrences.
inline constexpr int kHermiteMaxOrder = 200;

// Physicists' Hermite polynomial H_N(x) by forward recurrence
// H_{k+1} = 2x H_k - 2k H_{k-1}; N <= kHermiteMaxOrder.
double hermite(int N, double x);

// d/dx H_N(x) = 2 N H_{N-1}(x).
double hermite_derivative(int N, double x);

// Normalized position-representation eigenfunction
//   psi_N(q) = exp(-x^2/2) H_N(x) / (pi^{1/4} 2^{N/2} sqrt(N!) sqrt(l)),
// with x = q / l. Evaluated by the normalized recurrence (no overflow up to
// N = kHermiteMaxOrder).
double continuum_eigenstate_q(int N, double q, const Constants& constants);

// d psi_N / dq = [ -x h_N(x) + sqrt(2N) h_{N-1}(x) ] / l^{3/2}.
double continuum_eigenstate_q_derivative(int N, double q,
                                         const Constants& constants);

// Action-variable representation on y >= 0 (dimensionless):
//   psihat_N(y) = exp(-y) H_N(sqrt(2y)) / (pi^{1/4} 2^{N/2} sqrt(N!)),
// i.e. psi_N at x = sqrt(2y) with l = 1. Throws std::domain_error for y < 0.
double continuum_eigenstate_y(int N, double y);

// Level-N energy as a Rayleigh quotient of the continuum Hamiltonian,
//   E = hbar nu * Int[ psi'^2/2 + x^2 psi^2/2 ] / Int[ psi^2 ],
// by adaptive quadrature in the position variable.
double energy_q_representation(int N, const Constants& constants);

// Same energy from the action-variable representation. The radial measure
// dy / sqrt(2y) is regularized by the substitution y = u^2, after which all
// integrands are smooth at the origin.
double energy_y_representation(int N, const Constants& constants);

// <psi_N, psi_M> over the real line by adaptive quadrature.
double eigenstate_overlap_q(int N, int M, const Constants& constants);

// Max-abs residual of the second-order equation satisfied by psihat_N,
//   sqrt(2y) d/dy [ sqrt(2y) d psihat / dy ] + (2 E_N - 2 y) psihat = 0
// (E_N = N + 1/2 dimensionless), evaluated with nested fourth-order central
// finite differences of step h on a uniform y grid. Second-order stencils at
// the same step leave a truncation floor of ~1e-4 and would swamp the
// equation residual.
double y_equation_residual(int N, double y_lo = 0.25, double y_hi = 12.0,
                           int points = 200, double h = 1e-3);

// Position operator Q = l * circ (real symmetric).
SparseReal build_position_operator_1d(int n_max, const Constants& constants);

// Momentum operator P = (-i hbar / l) * sharp (Hermitian, purely imaginary).
SparseComplex build_momentum_operator_1d(int n_max, const Constants& constants);

// Dimensionless Hamiltonian (1/2) [ (l/hbar)^2 P^2 + (1/l)^2 Q^2 ]. In
// fundamental units this equals (1/2) [ -(sharp)^2 + (circ)^2 ], which is
// exactly diagonal in floating point: diag(1/2, 3/2, ..., n_max - 1/2) with
// a spurious top entry n_max/2 produced by the truncation row.
SparseReal discrete_hamiltonian(int n_max, const Constants& constants);

struct Spectrum {
  // Index = basis label N obtained by pairing each eigenvector with the
  // basis state of largest overlap. energies carries the hbar*nu scale.
  VecReal energies;
  DenseReal vectors;  // column N = eigenvector paired with label N
  VecReal overlaps;   // |<v_N, delta_N>|
  int n_max = 0;
  // Labels above this sit against the truncation edge; the top label holds
  // the spurious n_max/2 level.
  int interior_max = 0;
};

// Dense symmetric eigensolve of the discrete Hamiltonian with eigenpairs
// paired to basis labels by maximal overlap. Throws std::runtime_error with
// a dump of the matrix if the eigensolver does not converge.
Spectrum solve_discrete_spectrum(int n_max, const Constants& constants);

}  // namespace dpsqm
