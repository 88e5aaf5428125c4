#include "dpsqm/poincare.hpp"

#include <cmath>
#include <stdexcept>

#include "dpsqm/errors.hpp"
#include "dpsqm/expm.hpp"
#include "dpsqm/klein_gordon.hpp"
#include "dpsqm/lattice.hpp"

namespace dpsqm {

namespace {

constexpr int kPairs[6][2] = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};

double metric_sign(int mu) { return mu == 4 ? -1.0 : 1.0; }

SparseReal lifted_sharp(int n_max, int mu) {
  return lift_to_axis(build_delta_sharp(n_max), mu, 4);
}

SparseReal lifted_circ(int n_max, int mu) {
  return lift_to_axis(build_delta_circ(n_max), mu, 4);
}

// A_ab = i J_ab (real): (Q^a S_b - Q^b S_a + S_b Q^a - S_a Q^b) / 2 with the
// metric fold on Q.
SparseReal rotation_generator_from(const SparseReal& qa, const SparseReal& sa,
                                   const SparseReal& qb,
                                   const SparseReal& sb) {
  SparseReal a = 0.5 * (SparseReal(qa * sb) - SparseReal(qb * sa) +
                        SparseReal(sb * qa) - SparseReal(sa * qb));
  a.makeCompressed();
  return a;
}

}  // namespace

int rotation_pair_index(int alpha, int beta) {
  for (int i = 0; i < 6; ++i) {
    if (kPairs[i][0] == alpha && kPairs[i][1] == beta) return i;
  }
  throw std::invalid_argument("rotation pair must satisfy 1 <= a < b <= 4");
}

SparseComplex PoincareGenerators::J(int alpha, int beta) const {
  if (alpha < 1 || alpha > 4 || beta < 1 || beta > 4) {
    throw std::invalid_argument("generator indices must lie in 1..4");
  }
  if (alpha == beta) {
    SparseComplex zero(casimir.rows(), casimir.cols());
    return zero;
  }
  if (alpha < beta) return J_upper[std::size_t(rotation_pair_index(alpha, beta))];
  return SparseComplex(
      -J_upper[std::size_t(rotation_pair_index(beta, alpha))]);
}

SparseReal rotation_generator_real(int n_max, int alpha, int beta) {
  rotation_pair_index(alpha, beta);
  const SparseReal sa = lifted_sharp(n_max, alpha);
  const SparseReal sb = lifted_sharp(n_max, beta);
  const SparseReal qa = metric_sign(alpha) * lifted_circ(n_max, alpha);
  const SparseReal qb = metric_sign(beta) * lifted_circ(n_max, beta);
  return rotation_generator_from(qa, sa, qb, sb);
}

PoincareGenerators build_generators(int n_max) {
  lattice_dimension(n_max);
  PoincareGenerators gens;
  gens.n_max = n_max;

  std::array<SparseReal, 4> sharp;
  std::array<SparseReal, 4> circ;
  for (int mu = 1; mu <= 4; ++mu) {
    sharp[std::size_t(mu - 1)] = lifted_sharp(n_max, mu);
    circ[std::size_t(mu - 1)] = lifted_circ(n_max, mu);
  }

  const Complex minus_i(0.0, -1.0);
  for (int mu = 1; mu <= 4; ++mu) {
    gens.P[std::size_t(mu - 1)] =
        SparseComplex(minus_i * sharp[std::size_t(mu - 1)].cast<Complex>());
    gens.Q[std::size_t(mu - 1)] =
        SparseReal(metric_sign(mu) * circ[std::size_t(mu - 1)]);
  }

  for (int i = 0; i < 6; ++i) {
    const int a = kPairs[i][0];
    const int b = kPairs[i][1];
    const SparseReal rotation = rotation_generator_from(
        gens.Q[std::size_t(a - 1)], sharp[std::size_t(a - 1)],
        gens.Q[std::size_t(b - 1)], sharp[std::size_t(b - 1)]);
    gens.J_upper[std::size_t(i)] =
        SparseComplex(minus_i * rotation.cast<Complex>());
  }

  // casimir = sum_j P_j^2 - P_4^2 = -(S_1^2 + S_2^2 + S_3^2) + S_4^2.
  SparseReal c = SparseReal(sharp[3] * sharp[3]);
  for (int j = 0; j < 3; ++j) {
    c = SparseReal(c - SparseReal(sharp[std::size_t(j)] * sharp[std::size_t(j)]));
  }
  c.makeCompressed();
  gens.casimir = std::move(c);
  return gens;
}

std::vector<CheckReport> check_casimir_commutation(
    const PoincareGenerators& gens, int margin, double tolerance) {
  const int n_max = gens.n_max;
  const SparseComplex casimir = gens.casimir.cast<Complex>();
  std::vector<CheckReport> reports;
  reports.reserve(10);
  const auto add = [&](const std::string& name, const SparseComplex& g) {
    const SparseComplex com = commutator(casimir, g);
    CheckReport report;
    report.test = "casimir_commutator_" + name;
    report.norm_interior = interior_block_max(com, n_max, margin, 4);
    report.norm_full = full_max(com);
    report.tolerance = tolerance;
    report.pass = report.norm_interior <= tolerance;
    reports.push_back(std::move(report));
  };
  for (int mu = 1; mu <= 4; ++mu) {
    add("P" + std::to_string(mu), gens.P[std::size_t(mu - 1)]);
  }
  for (int i = 0; i < 6; ++i) {
    add("J" + std::to_string(kPairs[i][0]) + std::to_string(kPairs[i][1]),
        gens.J_upper[std::size_t(i)]);
  }
  return reports;
}

DenseReal build_finite_transform(int n_max, const std::array<double, 4>& c,
                                 const std::array<double, 6>& omega,
                                 double tol) {
  const int dim1 = lattice_dimension(n_max);
  const Eigen::Index dim = Eigen::Index(dim1) * dim1 * dim1 * dim1;
  SparseReal exponent(dim, dim);
  for (int mu = 1; mu <= 4; ++mu) {
    const double coef = c[std::size_t(mu - 1)];
    if (coef == 0.0) continue;
    exponent = SparseReal(exponent - coef * lifted_sharp(n_max, mu));
  }
  for (int i = 0; i < 6; ++i) {
    const double coef = omega[std::size_t(i)];
    if (coef == 0.0) continue;
    exponent = SparseReal(
        exponent +
        coef * rotation_generator_real(n_max, kPairs[i][0], kPairs[i][1]));
  }
  exponent.makeCompressed();
  return expm(exponent, tol);
}

CheckReport check_kg_invariance_4d(int n_max, double m,
                                   const std::array<double, 4>& c,
                                   const std::array<double, 6>& omega,
                                   int margin, double tolerance) {
  const SparseReal k = assemble_kg_operator_4d(n_max, m);
  const DenseReal u = build_finite_transform(n_max, c, omega);
  const DenseReal residual = k * u - u * k;
  const bool translation_only =
      std::all_of(omega.begin(), omega.end(), [](double w) { return w == 0.0; });
  CheckReport report;
  report.test = translation_only ? "kg_translation_invariance_4d"
                                 : "kg_transform_invariance_4d";
  report.norm_interior = interior_block_max(residual, n_max, margin, 4);
  report.norm_full = full_max(residual);
  report.tolerance = tolerance;
  report.pass = report.norm_interior <= tolerance;
  return report;
}

CheckReport check_null_vector_invariance_4d(int n_max, double m,
                                            const std::array<double, 4>& c,
                                            double tolerance) {
  const SparseReal k = assemble_kg_operator_4d(n_max, m);
  const NullResidual null_pair = kg_null_residual(k);
  const DenseReal u =
      build_finite_transform(n_max, c, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  const VecReal transformed = u * null_pair.vector;
  CheckReport report;
  report.test = "kg_null_vector_translation_invariance";
  report.norm_interior = (k * transformed).cwiseAbs().maxCoeff();
  report.norm_full = report.norm_interior;
  report.tolerance = tolerance;
  report.pass = report.norm_interior <= tolerance;
  return report;
}

BoostInvarianceReport check_boost_invariance_3plus1(
    int n_max, double m, const std::array<double, 3>& boost, int steps,
    int margin, double slope_floor) {
  if (steps < 8) throw UsageError("boost check needs a usable time window");
  if (boost[0] == 0.0 && boost[1] == 0.0 && boost[2] == 0.0) {
    throw UsageError("boost check needs a nonzero boost direction");
  }
  const SparseReal k = assemble_spatial_kg_generator(n_max, m);
  const Eigenmode mode = select_boost_coupled_mode(k, n_max);
  const double omega = mode.omega;
  const VecReal& v = mode.vector;

  // Two whole periods sampled exactly: the residual growth statistic then
  // isolates the quadratic response of the generator perturbation.
  const double dt = 2.0 * (2.0 * M_PI / omega) / double(steps);

  const int dim1 = n_max + 1;
  const Eigen::Index dim = Eigen::Index(dim1) * dim1 * dim1;
  SparseReal boost_sharp(dim, dim);
  SparseReal boost_circ(dim, dim);
  for (int j = 1; j <= 3; ++j) {
    const double b = boost[std::size_t(j - 1)];
    if (b == 0.0) continue;
    boost_sharp = SparseReal(
        boost_sharp + b * lift_to_axis(build_delta_sharp(n_max), j, 3));
    boost_circ = SparseReal(boost_circ +
                            b * lift_to_axis(build_delta_circ(n_max), j, 3));
  }
  const VecReal sharp_v = boost_sharp * v;
  const VecReal circ_v = boost_circ * v;

  DenseReal base(dim, steps + 1);
  DenseReal generator_action(dim, steps + 1);
  for (int s = 0; s <= steps; ++s) {
    const double t = double(s) * dt;
    base.col(s) = std::cos(omega * t) * v;
    // (G phi)(t) = t * S phi + C * dphi/dt on the sampled eigenmode.
    generator_action.col(s) =
        t * std::cos(omega * t) * sharp_v - omega * std::sin(omega * t) * circ_v;
  }

  BoostInvarianceReport report;
  report.mode_omega = omega;
  report.mode_index = mode.index;
  report.steps = steps;
  report.dt = dt;
  report.epsilons = {1e-2, 5e-3, 2.5e-3};
  report.slope_floor = slope_floor;
  report.base_residual =
      kg_residual_3plus1(base, dt, k, n_max, margin).rms;

  for (int i = 0; i < 3; ++i) {
    const double eps = report.epsilons[std::size_t(i)];
    const double plus =
        kg_residual_3plus1(base + eps * generator_action, dt, k, n_max, margin)
            .rms;
    const double minus =
        kg_residual_3plus1(base - eps * generator_action, dt, k, n_max, margin)
            .rms;
    const double growth = 0.5 * (plus + minus) - report.base_residual;
    if (!(growth > 0.0)) {
      throw std::runtime_error(
          "boost residual growth fell below the numerical floor");
    }
    report.growths[std::size_t(i)] = growth;
  }

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (int i = 0; i < 3; ++i) {
    mean_x += std::log(report.epsilons[std::size_t(i)]);
    mean_y += std::log(report.growths[std::size_t(i)]);
  }
  mean_x /= 3.0;
  mean_y /= 3.0;
  double cov = 0.0;
  double var = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double dx = std::log(report.epsilons[std::size_t(i)]) - mean_x;
    const double dy = std::log(report.growths[std::size_t(i)]) - mean_y;
    cov += dx * dy;
    var += dx * dx;
  }
  report.slope = cov / var;

  // Control: an exact interior symmetry (spatial rotation in the 1-2 plane)
  // applied at the same strength must not move the residual appreciably.
  const SparseReal circ1 = lift_to_axis(build_delta_circ(n_max), 1, 3);
  const SparseReal circ2 = lift_to_axis(build_delta_circ(n_max), 2, 3);
  const SparseReal sharp1 = lift_to_axis(build_delta_sharp(n_max), 1, 3);
  const SparseReal sharp2 = lift_to_axis(build_delta_sharp(n_max), 2, 3);
  const SparseReal rotation =
      SparseReal(SparseReal(circ1 * sharp2) - SparseReal(circ2 * sharp1));
  const VecReal rotated = v + 1e-2 * (rotation * v);
  DenseReal rotated_history(dim, steps + 1);
  for (int s = 0; s <= steps; ++s) {
    rotated_history.col(s) = std::cos(omega * double(s) * dt) * rotated;
  }
  report.rotation_residual =
      kg_residual_3plus1(rotated_history, dt, k, n_max, margin).rms;

  report.pass = report.slope >= slope_floor;
  return report;
}

}  // namespace dpsqm
