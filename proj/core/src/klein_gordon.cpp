#include "dpsqm/klein_gordon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "dpsqm/errors.hpp"
#include "dpsqm/lattice.hpp"

namespace dpsqm {

namespace {

SparseReal identity(Eigen::Index dim) {
  SparseReal i(dim, dim);
  i.setIdentity();
  return i;
}

SparseReal lifted_sharp_squares(int n_max, int axes,
                                const std::vector<double>& signs) {
  const SparseReal sharp = build_delta_sharp(n_max);
  const SparseReal sharp_sq = SparseReal(sharp * sharp);
  SparseReal sum;
  for (int axis = 1; axis <= axes; ++axis) {
    const SparseReal term = lift_to_axis(sharp_sq, axis, axes);
    if (axis == 1) {
      sum = signs[0] * term;
    } else {
      sum = SparseReal(sum + signs[std::size_t(axis - 1)] * term);
    }
  }
  sum.makeCompressed();
  return sum;
}

}  // namespace

std::size_t dense_bytes_4d(int n_max) {
  const std::size_t dim = std::size_t(n_max) + 1;
  const std::size_t total = dim * dim * dim * dim;
  return 2 * total * total * sizeof(double);
}

SparseReal assemble_kg_operator_4d(int n_max, double m,
                                   std::size_t memory_budget_bytes) {
  lattice_dimension(n_max);
  const std::size_t required = dense_bytes_4d(n_max);
  if (required > memory_budget_bytes) {
    throw MemoryBudgetError(required, memory_budget_bytes);
  }
  SparseReal k =
      lifted_sharp_squares(n_max, 4, {1.0, 1.0, 1.0, -1.0});
  k = SparseReal(k - (m * m) * identity(k.rows()));
  k.makeCompressed();
  return k;
}

NullResidual kg_null_residual(const SparseReal& op) {
  Eigen::SelfAdjointEigenSolver<DenseReal> solver((DenseReal(op)));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver failed to converge");
  }
  Eigen::Index best = 0;
  solver.eigenvalues().cwiseAbs().minCoeff(&best);
  NullResidual result;
  result.min_abs_eigenvalue = std::abs(solver.eigenvalues()(best));
  result.vector = solver.eigenvectors().col(best);
  return result;
}

SparseReal assemble_spatial_kg_generator(int n_max, double m) {
  lattice_dimension(n_max);
  SparseReal k = lifted_sharp_squares(n_max, 3, {1.0, 1.0, 1.0});
  k = SparseReal(k - (m * m) * identity(k.rows()));
  k.makeCompressed();
  return k;
}

double spectral_radius_estimate(const SparseReal& k, int iterations) {
  if (k.rows() != k.cols() || k.rows() == 0) {
    throw std::invalid_argument("operator must be square and nonempty");
  }
  std::mt19937 rng(0x5eed1234u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VecReal v(k.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    VecReal w = -(k * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = -(w.dot(k * w));
    if (it > 10 && std::abs(next - lambda) <= 1e-13 * std::abs(next)) {
      return next;
    }
    lambda = next;
    v = std::move(w);
  }
  return lambda;
}

double max_stable_dt(const SparseReal& k) {
  const double rho = spectral_radius_estimate(k);
  if (rho <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / std::sqrt(rho);
}

EvolutionResult evolve_leapfrog(const SparseReal& k, const VecReal& phi0,
                                const VecReal& pi0, double dt, int steps) {
  if (k.rows() != k.cols()) {
    throw std::invalid_argument("operator must be square");
  }
  if (phi0.size() != k.rows() || pi0.size() != k.rows()) {
    throw std::invalid_argument("initial data does not match operator size");
  }
  if (!(dt > 0.0)) throw UsageError("time step must be positive");
  if (steps < 1) throw UsageError("need at least one step");
  const double dt_max = max_stable_dt(k);
  if (dt >= dt_max) throw StabilityError(dt, dt_max);

  const Eigen::Index dim = k.rows();
  EvolutionResult result;
  result.phi = DenseReal(dim, steps + 1);
  result.pi = DenseReal(dim, steps + 1);
  result.times = VecReal(steps + 1);
  result.energy = VecReal(steps + 1);

  VecReal phi = phi0;
  VecReal pi = pi0;
  VecReal acc = k * phi;
  const auto energy_of = [](const VecReal& p, const VecReal& f,
                            const VecReal& a) {
    return 0.5 * p.squaredNorm() - 0.5 * f.dot(a);
  };

  result.phi.col(0) = phi;
  result.pi.col(0) = pi;
  result.times(0) = 0.0;
  result.energy(0) = energy_of(pi, phi, acc);

  for (int step = 1; step <= steps; ++step) {
    phi += dt * pi + (0.5 * dt * dt) * acc;
    VecReal acc_next = k * phi;
    pi += (0.5 * dt) * (acc + acc_next);
    acc = std::move(acc_next);
    result.phi.col(step) = phi;
    result.pi.col(step) = pi;
    result.times(step) = double(step) * dt;
    result.energy(step) = energy_of(pi, phi, acc);
  }

  const double e0 = result.energy(0);
  double drift = 0.0;
  if (e0 != 0.0) {
    drift = (result.energy.array() - e0).abs().maxCoeff() / std::abs(e0);
  }
  result.energy_drift = drift;
  return result;
}

ResidualStats kg_residual_3plus1(const DenseReal& phi_history, double dt,
                                 const SparseReal& k, int n_max, int margin) {
  if (phi_history.cols() < 3) {
    throw UsageError(
        "residual evaluation needs at least three time slices of history");
  }
  if (!(dt > 0.0)) throw UsageError("time step must be positive");
  if (phi_history.rows() != k.rows()) {
    throw std::invalid_argument("history does not match operator size");
  }
  const auto rows = interior_indices(n_max, margin, 3);
  if (rows.empty()) throw UsageError("margin leaves no interior sites");

  const double inv_dt2 = 1.0 / (dt * dt);
  double worst = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (Eigen::Index j = 1; j + 1 < phi_history.cols(); ++j) {
    const VecReal second_difference =
        inv_dt2 * (phi_history.col(j + 1) - 2.0 * phi_history.col(j) +
                   phi_history.col(j - 1));
    const VecReal residual = second_difference - k * phi_history.col(j);
    for (std::int64_t r : rows) {
      const double v = residual(Eigen::Index(r));
      worst = std::max(worst, std::abs(v));
      sum_sq += v * v;
      ++count;
    }
  }
  ResidualStats stats;
  stats.max_abs = worst;
  stats.rms = std::sqrt(sum_sq / double(count));
  return stats;
}

std::vector<Eigenmode> spatial_eigenmodes(const SparseReal& k) {
  Eigen::SelfAdjointEigenSolver<DenseReal> solver((DenseReal(k)));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver failed to converge");
  }
  // Eigenvalues ascend, so -eigenvalues (= omega^2) descend; reverse for
  // ascending omega.
  std::vector<Eigenmode> modes;
  const Eigen::Index dim = k.rows();
  modes.reserve(std::size_t(dim));
  for (Eigen::Index i = dim - 1; i >= 0; --i) {
    const double omega_sq = -solver.eigenvalues()(i);
    if (omega_sq < 0.0) {
      throw std::invalid_argument(
          "spatial generator must be negative semidefinite");
    }
    Eigenmode mode;
    mode.omega = std::sqrt(omega_sq);
    mode.vector = solver.eigenvectors().col(i);
    mode.index = int(modes.size());
    modes.push_back(std::move(mode));
  }
  return modes;
}

Eigenmode select_boost_coupled_mode(const SparseReal& k, int n_max,
                                    double coupling_floor) {
  const SparseReal sharp1 =
      lift_to_axis(build_delta_sharp(n_max), 1, 3);
  for (Eigenmode& mode : spatial_eigenmodes(k)) {
    if ((sharp1 * mode.vector).norm() > coupling_floor) {
      return std::move(mode);
    }
  }
  throw std::runtime_error(
      "no eigenmode couples to the axis-1 boost generator above the floor");
}

}  // namespace dpsqm
