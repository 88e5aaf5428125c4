#include "dpsqm/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "dpsqm/errors.hpp"

namespace dpsqm {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseReal from_triplets(int dim, const std::vector<Triplet>& entries) {
  SparseReal m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

}  // namespace

int lattice_dimension(int n_max) {
  if (n_max < 2) {
    throw UsageError("n_max must be at least 2 (got " + std::to_string(n_max) +
                     "): two-sided stencils need an interior row");
  }
  return n_max + 1;
}

SparseReal build_delta(int n_max) {
  const int dim = lattice_dimension(n_max);
  std::vector<Triplet> entries;
  entries.reserve(2 * dim);
  for (int n = 0; n < dim; ++n) {
    if (n + 1 < dim) entries.emplace_back(n, n + 1, 1.0);
    entries.emplace_back(n, n, -1.0);
  }
  return from_triplets(dim, entries);
}

SparseReal build_delta_prime(int n_max) {
  const int dim = lattice_dimension(n_max);
  std::vector<Triplet> entries;
  entries.reserve(2 * dim);
  for (int n = 0; n < dim; ++n) {
    entries.emplace_back(n, n, 1.0);
    if (n - 1 >= 0) entries.emplace_back(n, n - 1, -1.0);
  }
  return from_triplets(dim, entries);
}

SparseReal build_delta_circ(int n_max) {
  const int dim = lattice_dimension(n_max);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Triplet> entries;
  entries.reserve(2 * dim);
  for (int n = 0; n < dim; ++n) {
    if (n + 1 < dim) {
      entries.emplace_back(n, n + 1, inv_sqrt2 * std::sqrt(double(n + 1)));
    }
    if (n - 1 >= 0) {
      entries.emplace_back(n, n - 1, inv_sqrt2 * std::sqrt(double(n)));
    }
  }
  return from_triplets(dim, entries);
}

SparseReal build_delta_sharp(int n_max) {
  const int dim = lattice_dimension(n_max);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Triplet> entries;
  entries.reserve(2 * dim);
  for (int n = 0; n < dim; ++n) {
    if (n + 1 < dim) {
      entries.emplace_back(n, n + 1, inv_sqrt2 * std::sqrt(double(n + 1)));
    }
    if (n - 1 >= 0) {
      entries.emplace_back(n, n - 1, -inv_sqrt2 * std::sqrt(double(n)));
    }
  }
  return from_triplets(dim, entries);
}

namespace {

SparseReal weight_diagonal(int n_max) {
  const int dim = n_max + 1;
  std::vector<Triplet> entries;
  entries.reserve(dim);
  for (int n = 1; n < dim; ++n) {
    entries.emplace_back(n, n, std::sqrt(0.5 * double(n)));
  }
  return from_triplets(dim, entries);
}

}  // namespace

SparseReal build_delta_circ_split(int n_max) {
  const int dim = lattice_dimension(n_max);
  const SparseReal w = weight_diagonal(n_max);
  std::vector<Triplet> entries;
  entries.reserve(dim);
  for (int n = 1; n < dim; ++n) {
    entries.emplace_back(n, n, std::sqrt(2.0 * double(n)));
  }
  const SparseReal diag = from_triplets(dim, entries);
  SparseReal m = diag + SparseReal(build_delta(n_max) * w) -
                 SparseReal(w * build_delta_prime(n_max));
  m.prune(0.0);
  m.makeCompressed();
  return m;
}

SparseReal build_delta_sharp_split(int n_max) {
  const SparseReal w = weight_diagonal(n_max);
  SparseReal m = SparseReal(build_delta(n_max) * w) +
                 SparseReal(w * build_delta_prime(n_max));
  m.prune(0.0);
  m.makeCompressed();
  return m;
}

SparseReal commutator(const SparseReal& a, const SparseReal& b) {
  SparseReal m = SparseReal(a * b) - SparseReal(b * a);
  m.makeCompressed();
  return m;
}

SparseComplex commutator(const SparseComplex& a, const SparseComplex& b) {
  SparseComplex m = SparseComplex(a * b) - SparseComplex(b * a);
  m.makeCompressed();
  return m;
}

VecReal apply(const SparseReal& op, const VecReal& phi) {
  if (op.cols() != phi.size()) {
    throw std::invalid_argument("operator/vector dimension mismatch");
  }
  return op * phi;
}

VecComplex apply(const SparseComplex& op, const VecComplex& phi) {
  if (op.cols() != phi.size()) {
    throw std::invalid_argument("operator/vector dimension mismatch");
  }
  return op * phi;
}

SparseReal lift_to_axis(const SparseReal& op, int axis, int axes) {
  if (axes < 1) throw UsageError("axes must be positive");
  if (axis < 1 || axis > axes) {
    throw UsageError("axis must lie in [1, axes] (got " +
                     std::to_string(axis) + " of " + std::to_string(axes) +
                     ")");
  }
  const int dim = int(op.rows());
  SparseReal identity(dim, dim);
  identity.setIdentity();
  SparseReal result;
  for (int a = 1; a <= axes; ++a) {
    const SparseReal& factor = (a == axis) ? op : identity;
    if (a == 1) {
      result = factor;
    } else {
      result = Eigen::kroneckerProduct(result, factor).eval();
    }
  }
  result.makeCompressed();
  return result;
}

std::int64_t flat_index(const std::vector<int>& digits, int dim_per_axis) {
  std::int64_t flat = 0;
  for (int d : digits) {
    if (d < 0 || d >= dim_per_axis) {
      throw std::invalid_argument("multi-index digit out of range");
    }
    flat = flat * dim_per_axis + d;
  }
  return flat;
}

std::vector<std::int64_t> interior_indices(int n_max, int margin, int axes) {
  lattice_dimension(n_max);
  if (margin < 0) throw UsageError("margin must be nonnegative");
  if (axes < 1) throw UsageError("axes must be positive");
  const int top = n_max - margin;
  // An empty interior would make every interior-block check vacuously pass,
  // so refuse it instead of returning nothing.
  if (top < 0) {
    throw UsageError("margin " + std::to_string(margin) +
                     " leaves no interior sites for n_max = " +
                     std::to_string(n_max));
  }
  const int dim = n_max + 1;
  std::vector<std::int64_t> result;
  result.reserve(std::size_t(std::pow(double(top + 1), axes)) + 1);
  std::vector<int> digits(axes, 0);
  while (true) {
    result.push_back(flat_index(digits, dim));
    int a = axes - 1;
    while (a >= 0 && digits[a] == top) {
      digits[a] = 0;
      --a;
    }
    if (a < 0) break;
    ++digits[a];
  }
  return result;
}

namespace {

std::vector<char> interior_mask(int n_max, int margin, int axes,
                                std::int64_t dim_total) {
  std::vector<char> mask(std::size_t(dim_total), 0);
  for (std::int64_t idx : interior_indices(n_max, margin, axes)) {
    mask[std::size_t(idx)] = 1;
  }
  return mask;
}

template <typename Scalar>
double sparse_interior_max(const Eigen::SparseMatrix<Scalar>& m, int n_max,
                           int margin, int axes) {
  const auto mask = interior_mask(n_max, margin, axes, m.rows());
  double best = 0.0;
  for (int outer = 0; outer < m.outerSize(); ++outer) {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, outer); it;
         ++it) {
      if (mask[std::size_t(it.row())] && mask[std::size_t(it.col())]) {
        best = std::max(best, double(std::abs(it.value())));
      }
    }
  }
  return best;
}

template <typename Scalar>
double sparse_full_max(const Eigen::SparseMatrix<Scalar>& m) {
  double best = 0.0;
  for (int outer = 0; outer < m.outerSize(); ++outer) {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, outer); it;
         ++it) {
      best = std::max(best, double(std::abs(it.value())));
    }
  }
  return best;
}

}  // namespace

double interior_block_max(const SparseReal& m, int n_max, int margin,
                          int axes) {
  return sparse_interior_max(m, n_max, margin, axes);
}

double interior_block_max(const SparseComplex& m, int n_max, int margin,
                          int axes) {
  return sparse_interior_max(m, n_max, margin, axes);
}

double interior_block_max(const DenseReal& m, int n_max, int margin,
                          int axes) {
  const auto rows = interior_indices(n_max, margin, axes);
  double best = 0.0;
  for (std::int64_t r : rows) {
    for (std::int64_t c : rows) {
      best = std::max(best, std::abs(m(Eigen::Index(r), Eigen::Index(c))));
    }
  }
  return best;
}

double full_max(const SparseReal& m) { return sparse_full_max(m); }

double full_max(const SparseComplex& m) { return sparse_full_max(m); }

double full_max(const DenseReal& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double commutation_deviation(int n_max, int N) {
  const int dim = lattice_dimension(n_max);
  if (N < 0 || N > n_max - 2) {
    throw UsageError("commutation deviation is defined for 0 <= N <= n_max-2");
  }
  const long double inv_sqrt2 = 1.0L / sqrtl(2.0L);
  const auto weight = [](int n) { return sqrtl((long double)(n)); };
  const auto at = [&](const std::vector<long double>& f, int n) {
    return (n < 0 || n >= dim) ? 0.0L : f[std::size_t(n)];
  };
  const auto apply_circ = [&](const std::vector<long double>& f) {
    std::vector<long double> out(std::size_t(dim), 0.0L);
    for (int n = 0; n < dim; ++n) {
      out[std::size_t(n)] =
          inv_sqrt2 * (weight(n + 1) * at(f, n + 1) + weight(n) * at(f, n - 1));
    }
    return out;
  };
  const auto apply_sharp = [&](const std::vector<long double>& f) {
    std::vector<long double> out(std::size_t(dim), 0.0L);
    for (int n = 0; n < dim; ++n) {
      out[std::size_t(n)] =
          inv_sqrt2 * (weight(n + 1) * at(f, n + 1) - weight(n) * at(f, n - 1));
    }
    return out;
  };

  std::vector<long double> delta(std::size_t(dim), 0.0L);
  delta[std::size_t(N)] = 1.0L;
  const auto forward = apply_sharp(apply_circ(delta));
  const auto backward = apply_circ(apply_sharp(delta));
  long double worst = 0.0L;
  for (int n = 0; n < dim; ++n) {
    const long double expected = (n == N) ? 1.0L : 0.0L;
    const long double dev =
        fabsl(forward[std::size_t(n)] - backward[std::size_t(n)] - expected);
    worst = std::max(worst, dev);
  }
  return double(worst);
}

}  // namespace dpsqm
