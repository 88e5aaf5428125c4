#include "dpsqm/expm.hpp"

#include <cmath>
#include <stdexcept>

namespace dpsqm {

double norm1(const SparseReal& x) {
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("matrix exponential needs a square matrix");
  }
  double best = 0.0;
  for (int col = 0; col < x.outerSize(); ++col) {
    double sum = 0.0;
    for (SparseReal::InnerIterator it(x, col); it; ++it) {
      sum += std::abs(it.value());
    }
    best = std::max(best, sum);
  }
  return best;
}

DenseReal expm(const SparseReal& x, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const Eigen::Index dim = x.rows();
  const double scale_norm = norm1(x);
  int squarings = 0;
  if (scale_norm > 1.0) {
    squarings = int(std::ceil(std::log2(scale_norm)));
  }
  const SparseReal scaled = SparseReal(x * std::pow(0.5, squarings));

  DenseReal result = DenseReal::Identity(dim, dim);
  DenseReal term = DenseReal::Identity(dim, dim);
  constexpr int kMaxTerms = 400;
  int k = 1;
  for (; k <= kMaxTerms; ++k) {
    term = (scaled * term) / double(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= tol) break;
  }
  if (k > kMaxTerms) {
    throw std::runtime_error("matrix exponential series did not converge");
  }
  for (int s = 0; s < squarings; ++s) {
    result = result * result;
  }
  return result;
}

}  // namespace dpsqm
