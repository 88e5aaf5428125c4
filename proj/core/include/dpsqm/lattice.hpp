#pragma once

#include <cstdint>
#include <vector>

#include "dpsqm/types.hpp"

namespace dpsqm {

// All operators act on grid functions phi(0), ..., phi(n_max) with the
// truncation convention phi(-1) = phi(n_max + 1) = 0, so matrices have
// dimension n_max + 1. Identities that hold on the unbounded lattice hold
// on rows far enough from the truncation edge ("interior" rows); the
// helpers below expose that bookkeeping.

// Validates the basis size (at least three states so that every two-sided
// stencil has one interior row) and returns the matrix dimension n_max + 1.
int lattice_dimension(int n_max);

// Forward difference: (D phi)(n) = phi(n+1) - phi(n).
SparseReal build_delta(int n_max);

// Backward difference: (D' phi)(n) = phi(n) - phi(n-1).
SparseReal build_delta_prime(int n_max);

// Square-root-weighted symmetric difference (real symmetric matrix):
//   (Do phi)(n) = (1/sqrt2) [ sqrt(n+1) phi(n+1) + sqrt(n) phi(n-1) ].
SparseReal build_delta_circ(int n_max);

// Square-root-weighted antisymmetric difference (real antisymmetric matrix):
//   (D# phi)(n) = (1/sqrt2) [ sqrt(n+1) phi(n+1) - sqrt(n) phi(n-1) ].
SparseReal build_delta_sharp(int n_max);

// Split assemblies of the weighted operators from the plain differences and
// the diagonal weight W = diag(sqrt(n/2)):
//   circ  = diag(sqrt(2n)) + (delta W - W delta')
//   sharp = delta W + W delta'
// They agree with the direct builders entry by entry to machine precision.
SparseReal build_delta_circ_split(int n_max);
SparseReal build_delta_sharp_split(int n_max);

// a b - b a.
SparseReal commutator(const SparseReal& a, const SparseReal& b);
SparseComplex commutator(const SparseComplex& a, const SparseComplex& b);

// Matrix-vector action.
VecReal apply(const SparseReal& op, const VecReal& phi);
VecComplex apply(const SparseComplex& op, const VecComplex& phi);

// Embeds a one-axis operator into the `axes`-fold tensor-product space of
// dimension (n_max+1)^axes, acting on the given 1-based axis. Axis 1 varies
// slowest in the flattened index.
SparseReal lift_to_axis(const SparseReal& op, int axis, int axes);

// Flat index of a multi-index under the lift_to_axis convention.
std::int64_t flat_index(const std::vector<int>& digits, int dim_per_axis);

// Flattened indices whose per-axis digits all lie in [0, n_max - margin].
std::vector<std::int64_t> interior_indices(int n_max, int margin, int axes);

// Max-abs entry of the interior block (interior rows and columns).
double interior_block_max(const SparseReal& m, int n_max, int margin, int axes);
double interior_block_max(const SparseComplex& m, int n_max, int margin, int axes);
double interior_block_max(const DenseReal& m, int n_max, int margin, int axes);

// Max-abs entry over the whole matrix.
double full_max(const SparseReal& m);
double full_max(const SparseComplex& m);
double full_max(const DenseReal& m);

// Max-abs deviation of ([sharp, circ] - I) delta_N over all rows, with the
// square-root weights evaluated in extended precision. Plain double carries
// a representation error of fl(sqrt(n))^2 - n that grows to ~4 eps n and
// would mask the operator identity at large n_max; the identity itself is
// exact for N <= n_max - 2.
double commutation_deviation(int n_max, int N);

}  // namespace dpsqm
