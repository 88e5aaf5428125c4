#pragma once

#include "dpsqm/types.hpp"

namespace dpsqm {

// Matrix exponential of a sparse real matrix by Taylor summation with
// scaling and squaring: X is scaled by 2^-s with s = ceil(log2(norm1(X)))
// when norm1 > 1, the series is summed until the next term's max-abs entry
// drops below tol, and the result is squared s times. exp(0) = I exactly.
DenseReal expm(const SparseReal& x, double tol = 1e-14);

// Max column abs sum.
double norm1(const SparseReal& x);

}  // namespace dpsqm
