#include "dpsqm/oscillator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dpsqm/errors.hpp"
#include "dpsqm/lattice.hpp"
#include "dpsqm/quadrature.hpp"

namespace dpsqm {

namespace {

void check_order(int N) {
  if (N < 0) throw UsageError("polynomial order must be nonnegative");
  if (N > kHermiteMaxOrder) {
    throw UsageError("polynomial order capped at " +
                     std::to_string(kHermiteMaxOrder) + " (got " +
                     std::to_string(N) + ")");
  }
}

// Normalized Hermite function h_N(x) = H_N(x) exp(-x^2/2) / (pi^{1/4}
// 2^{N/2} sqrt(N!)) by the stable normalized recurrence
//   h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1},
// which stays in double range for all supported N.
double hermite_function(int N, double x) {
  check_order(N);
  const double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (N == 0) return h0;
  double prev = h0;
  double cur = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < N; ++k) {
    const double next = x * std::sqrt(2.0 / double(k + 1)) * cur -
                        std::sqrt(double(k) / double(k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// h_N'(x) = -x h_N(x) + sqrt(2N) h_{N-1}(x).
double hermite_function_derivative(int N, double x) {
  check_order(N);
  const double hn = hermite_function(N, x);
  if (N == 0) return -x * hn;
  return -x * hn + std::sqrt(2.0 * double(N)) * hermite_function(N - 1, x);
}

}  // namespace

double hermite(int N, double x) {
  check_order(N);
  if (N == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < N; ++k) {
    const double next = 2.0 * x * cur - 2.0 * double(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_derivative(int N, double x) {
  check_order(N);
  if (N == 0) return 0.0;
  return 2.0 * double(N) * hermite(N - 1, x);
}

double continuum_eigenstate_q(int N, double q, const Constants& constants) {
  constants.validate();
  const double x = q / constants.l;
  return hermite_function(N, x) / std::sqrt(constants.l);
}

double continuum_eigenstate_q_derivative(int N, double q,
                                         const Constants& constants) {
  constants.validate();
  const double x = q / constants.l;
  return hermite_function_derivative(N, x) /
         (constants.l * std::sqrt(constants.l));
}

double continuum_eigenstate_y(int N, double y) {
  if (y < 0.0) {
    throw std::domain_error(
        "the action-variable representation is defined for y >= 0");
  }
  return hermite_function(N, std::sqrt(2.0 * y));
}

double energy_q_representation(int N, const Constants& constants) {
  constants.validate();
  check_order(N);
  // Dimensionless Rayleigh quotient in x = q/l; integrands are even, so
  // integrate the half line.
  const double L = std::sqrt(2.0 * double(N) + 1.0) + 12.0;
  const auto density = [N](double x) {
    const double dh = hermite_function_derivative(N, x);
    const double h = hermite_function(N, x);
    return 0.5 * dh * dh + 0.5 * x * x * h * h;
  };
  const auto norm = [N](double x) {
    const double h = hermite_function(N, x);
    return h * h;
  };
  const double num = 2.0 * integrate_adaptive(density, 0.0, L, 1e-12);
  const double den = 2.0 * integrate_adaptive(norm, 0.0, L, 1e-12);
  return constants.energy_scale() * num / den;
}

double energy_y_representation(int N, const Constants& constants) {
  constants.validate();
  check_order(N);
  // Rayleigh quotient over y with measure dy / sqrt(2y), regularized by
  // y = u^2 (the constant Jacobian sqrt(2) cancels in the quotient). The
  // kinetic density uses g(y) = sqrt(2y) d psihat / dy, which is the
  // x-derivative evaluated at x = sqrt(2y).
  const double U = (std::sqrt(2.0 * double(N) + 1.0) + 12.0) / std::sqrt(2.0);
  const Constants fundamental = Constants::fundamental();
  const auto density = [&](double u) {
    const double y = u * u;
    const double psihat = continuum_eigenstate_y(N, y);
    const double g =
        continuum_eigenstate_q_derivative(N, std::sqrt(2.0 * y), fundamental);
    return 0.5 * g * g + y * psihat * psihat;
  };
  const auto norm = [&](double u) {
    const double psihat = continuum_eigenstate_y(N, u * u);
    return psihat * psihat;
  };
  const double num = integrate_adaptive(density, 0.0, U, 1e-12);
  const double den = integrate_adaptive(norm, 0.0, U, 1e-12);
  return constants.energy_scale() * num / den;
}

double eigenstate_overlap_q(int N, int M, const Constants& constants) {
  constants.validate();
  check_order(N);
  check_order(M);
  const double L =
      std::sqrt(2.0 * double(std::max(N, M)) + 1.0) + 12.0;
  const double l = constants.l;
  const auto integrand = [&](double q) {
    return continuum_eigenstate_q(N, q, constants) *
           continuum_eigenstate_q(M, q, constants);
  };
  return integrate_adaptive(integrand, -L * l, L * l, 1e-11);
}

double y_equation_residual(int N, double y_lo, double y_hi, int points,
                           double h) {
  check_order(N);
  if (!(h > 0.0)) throw UsageError("step must be positive");
  if (points < 2) throw UsageError("need at least two grid points");
  if (!(y_lo > 4.0 * h)) {
    throw UsageError("y_lo must exceed 4h so nested stencils stay on y > 0");
  }
  if (!(y_hi > y_lo)) throw UsageError("need y_hi > y_lo");
  const double energy = double(N) + 0.5;
  const auto psihat = [N](double y) { return continuum_eigenstate_y(N, y); };
  // Fourth-order central first derivative.
  const auto d1 = [h](const std::function<double(double)>& f, double y) {
    return (-f(y + 2.0 * h) + 8.0 * f(y + h) - 8.0 * f(y - h) +
            f(y - 2.0 * h)) /
           (12.0 * h);
  };
  const auto g = [&](double y) {
    return std::sqrt(2.0 * y) * d1(psihat, y);
  };
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double y = y_lo + (y_hi - y_lo) * double(i) / double(points - 1);
    const double residual = std::sqrt(2.0 * y) * d1(g, y) +
                            (2.0 * energy - 2.0 * y) * psihat(y);
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

SparseReal build_position_operator_1d(int n_max, const Constants& constants) {
  constants.validate();
  SparseReal q = constants.l * build_delta_circ(n_max);
  q.makeCompressed();
  return q;
}

SparseComplex build_momentum_operator_1d(int n_max,
                                         const Constants& constants) {
  constants.validate();
  const Complex factor(0.0, -constants.hbar / constants.l);
  SparseComplex p = factor * build_delta_sharp(n_max).cast<Complex>();
  p.makeCompressed();
  return p;
}

SparseReal discrete_hamiltonian(int n_max, const Constants& constants) {
  constants.validate();
  const SparseReal circ = build_delta_circ(n_max);
  const SparseReal sharp = build_delta_sharp(n_max);
  // (1/2) [ (l/hbar)^2 P^2 + (1/l)^2 Q^2 ] with P = (-i hbar/l) sharp and
  // Q = l circ; the scale factors collapse to exactly 1 in fundamental mode.
  double kp = (constants.l / constants.hbar) * (constants.hbar / constants.l);
  kp *= kp;
  double kq = constants.l / constants.l;
  kq *= kq;
  SparseReal h = 0.5 * (kq * SparseReal(circ * circ).eval() -
                        kp * SparseReal(sharp * sharp).eval());
  h.prune(0.0);
  h.makeCompressed();
  return h;
}

Spectrum solve_discrete_spectrum(int n_max, const Constants& constants) {
  const int dim = lattice_dimension(n_max);
  const DenseReal h = DenseReal(discrete_hamiltonian(n_max, constants));
  Eigen::SelfAdjointEigenSolver<DenseReal> solver(h);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "symmetric eigensolver failed to converge on the " << dim << "x"
       << dim << " Hamiltonian:\n"
       << h;
    throw std::runtime_error(os.str());
  }

  // Pair each eigenvector with the basis label it overlaps most; fall back
  // to unused labels on collisions (possible only for the degenerate
  // truncation level at odd n_max).
  const DenseReal& vectors = solver.eigenvectors();
  std::vector<int> label_of(std::size_t(dim), -1);
  std::vector<char> taken(std::size_t(dim), 0);
  for (int i = 0; i < dim; ++i) {
    int best = 0;
    vectors.col(i).cwiseAbs().maxCoeff(&best);
    if (!taken[std::size_t(best)]) {
      label_of[std::size_t(i)] = best;
      taken[std::size_t(best)] = 1;
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (label_of[std::size_t(i)] >= 0) continue;
    VecReal overlaps = vectors.col(i).cwiseAbs();
    int best = -1;
    double best_val = -1.0;
    for (int n = 0; n < dim; ++n) {
      if (!taken[std::size_t(n)] && overlaps(n) > best_val) {
        best = n;
        best_val = overlaps(n);
      }
    }
    label_of[std::size_t(i)] = best;
    taken[std::size_t(best)] = 1;
  }

  Spectrum spectrum;
  spectrum.n_max = n_max;
  spectrum.interior_max = n_max - 2;
  spectrum.energies = VecReal::Zero(dim);
  spectrum.vectors = DenseReal::Zero(dim, dim);
  spectrum.overlaps = VecReal::Zero(dim);
  const double scale = constants.energy_scale();
  for (int i = 0; i < dim; ++i) {
    const int label = label_of[std::size_t(i)];
    spectrum.energies(label) = scale * solver.eigenvalues()(i);
    spectrum.vectors.col(label) = vectors.col(i);
    spectrum.overlaps(label) = std::abs(vectors(label, i));
  }
  return spectrum;
}

}  // namespace dpsqm
