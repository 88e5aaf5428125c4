#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dpsqm/errors.hpp"
#include "dpsqm/lattice.hpp"
#include "dpsqm/oscillator.hpp"
#include "dpsqm/quadrature.hpp"
#include "dpsqm/units.hpp"

using namespace dpsqm;

TEST_CASE("raw polynomial recurrence reproduces table values") {
  CHECK(hermite(0, 0.7) == 1.0);
  CHECK(hermite(1, 0.5) == 1.0);        // 2x at x = 0.5
  CHECK(hermite(2, 1.5) == 7.0);        // 4x^2 - 2
  CHECK(hermite(4, 1.0) == -20.0);      // 16x^4 - 48x^2 + 12
  CHECK(hermite_derivative(4, 1.0) ==
        doctest::Approx(8.0 * hermite(3, 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(hermite(kHermiteMaxOrder + 1, 0.0), UsageError);
  CHECK_THROWS_AS(hermite(-1, 0.0), UsageError);
}

TEST_CASE("normalized eigenfunctions have the known peak and unit norm") {
  const Constants c = Constants::fundamental();
  CHECK(continuum_eigenstate_q(0, 0.0, c) ==
        doctest::Approx(0.7511255444649425).epsilon(1e-15));

  for (int N : {0, 1, 3, 6}) {
    CAPTURE(N);
    const double L = std::sqrt(2.0 * N + 1.0) + 12.0;
    const double norm = integrate_adaptive(
        [&](double q) {
          const double v = continuum_eigenstate_q(N, q, c);
          return v * v;
        },
        -L, L, 1e-12);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("action-variable eigenfunction matches the position profile") {
  CHECK_THROWS_AS(continuum_eigenstate_y(2, -1.0), std::domain_error);
  // At y = 0 the profile takes its limiting value.
  const Constants c = Constants::fundamental();
  CHECK(continuum_eigenstate_y(0, 0.0) ==
        continuum_eigenstate_q(0, 0.0, c));
  // y = x^2 / 2 links the two arguments.
  const double x = 1.3;
  CHECK(continuum_eigenstate_y(3, 0.5 * x * x) ==
        doctest::Approx(continuum_eigenstate_q(3, x, c)).epsilon(1e-15));
}

TEST_CASE("position and momentum matrices act as scaled ladder averages") {
  const Constants f = Constants::fundamental();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  const SparseReal q = build_position_operator_1d(6, f);
  VecReal spike = VecReal::Zero(7);
  spike(0) = 1.0;
  CHECK(apply(q, spike)(1) == doctest::Approx(inv_sqrt2).epsilon(1e-15));

  const SparseComplex p = build_momentum_operator_1d(6, f);
  VecComplex cspike = VecComplex::Zero(7);
  cspike(0) = 1.0;
  const Complex p01 = dpsqm::apply(p, cspike)(1);
  CHECK(p01.real() == 0.0);
  CHECK(p01.imag() == doctest::Approx(inv_sqrt2).epsilon(1e-15));

  // Scaled constants rescale the matrix elements as l and hbar/l.
  Constants e = Constants::explicit_si();
  e.hbar = 2.0;
  e.c = 3.0;
  e.l = 5.0;
  e.nu = 1.0;
  const SparseReal q2 = build_position_operator_1d(6, e);
  const SparseComplex p2 = build_momentum_operator_1d(6, e);
  CHECK(apply(q2, spike)(1) ==
        doctest::Approx(5.0 * inv_sqrt2).epsilon(1e-15));
  CHECK(dpsqm::apply(p2, cspike)(1).imag() ==
        doctest::Approx(2.0 / 5.0 * inv_sqrt2).epsilon(1e-15));
}

TEST_CASE("hamiltonian matrix is exactly diagonal with half-integer levels") {
  const Constants f = Constants::fundamental();
  const int n_max = 12;
  const DenseReal h(discrete_hamiltonian(n_max, f));

  DenseReal off = h;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);

  for (int N = 0; N < n_max; ++N) {
    CHECK(h(N, N) == doctest::Approx(N + 0.5).epsilon(1e-13));
  }
  // The top level collapses to n_max / 2: the out-of-range ladder term is
  // cut, leaving half the untruncated value.
  CHECK(h(n_max, n_max) == doctest::Approx(0.5 * n_max).epsilon(1e-13));
}

TEST_CASE("explicit constants cancel out of the hamiltonian shape") {
  Constants e = Constants::explicit_si();
  e.hbar = 2.0;
  e.c = 3.0;
  e.l = 5.0;
  e.nu = 1.0;
  const DenseReal h_explicit(discrete_hamiltonian(10, e));
  const DenseReal h_fundamental(discrete_hamiltonian(10, Constants::fundamental()));
  // The matrix is the dimensionless energy shape in every unit mode: the
  // constants enter only as (l/l)^2 and ((l/hbar)(hbar/l))^2, both 1 up to
  // rounding. The hbar*nu scale is applied by the spectrum solver.
  CHECK((h_explicit - h_fundamental).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("hamiltonian equals its position-momentum composition") {
  Constants e = Constants::explicit_si();
  e.hbar = 2.0;
  e.c = 3.0;
  e.l = 5.0;
  e.nu = 1.0;
  const int n_max = 8;
  const DenseComplex q(build_position_operator_1d(n_max, e).cast<Complex>());
  const DenseComplex p(build_momentum_operator_1d(n_max, e));
  const double k_momentum = (e.l / e.hbar) * (e.l / e.hbar);
  const DenseComplex composed =
      0.5 * (k_momentum * p * p + q * q / (e.l * e.l));
  const DenseComplex direct =
      discrete_hamiltonian(n_max, e).cast<Complex>();
  CHECK((composed - direct).cwiseAbs().maxCoeff() <= 1e-14 * n_max);
}

TEST_CASE("discrete spectrum pairs labels by basis overlap") {
  const Constants f = Constants::fundamental();
  const Spectrum spectrum = solve_discrete_spectrum(16, f);
  REQUIRE(spectrum.energies.size() == 17);
  CHECK(spectrum.interior_max == 14);
  for (int N = 0; N <= spectrum.interior_max; ++N) {
    CHECK(spectrum.energies(N) == doctest::Approx(N + 0.5).epsilon(1e-12));
    CHECK(spectrum.overlaps(N) > 1.0 - 1e-10);
  }
  // Eigenvectors form an orthonormal set.
  const DenseReal gram =
      spectrum.vectors.transpose() * spectrum.vectors -
      DenseReal::Identity(17, 17);
  CHECK(gram.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("odd cutoff degeneracy still yields a bijective labeling") {
  // At odd n_max the collapsed top level n_max/2 coincides with an interior
  // level; label pairing must remain a bijection.
  const Spectrum spectrum = solve_discrete_spectrum(5, Constants::fundamental());
  for (int N = 0; N <= 3; ++N) {
    CHECK(spectrum.energies(N) == doctest::Approx(N + 0.5).epsilon(1e-12));
  }
  CHECK(spectrum.energies(5) == doctest::Approx(2.5).epsilon(1e-12));
  for (int N = 0; N <= 5; ++N) CHECK(spectrum.overlaps(N) > 1.0 - 1e-10);
}

TEST_CASE("three energy computations agree on interior levels") {
  const Constants f = Constants::fundamental();
  const Spectrum spectrum = solve_discrete_spectrum(12, f);
  for (int N = 0; N <= 6; ++N) {
    CAPTURE(N);
    const double e_q = energy_q_representation(N, f);
    const double e_y = energy_y_representation(N, f);
    CHECK(std::abs(e_q - spectrum.energies(N)) <= 1e-10);
    CHECK(std::abs(e_y - spectrum.energies(N)) <= 1e-10);
  }
}

TEST_CASE("quadrature overlaps reproduce orthonormality") {
  const Constants f = Constants::fundamental();
  for (int N = 0; N <= 5; ++N) {
    for (int M = 0; M <= 5; ++M) {
      const double target = N == M ? 1.0 : 0.0;
      CHECK(std::abs(eigenstate_overlap_q(N, M, f) - target) <= 1e-8);
    }
  }
}

TEST_CASE("action-variable equation residual stays small on the grid") {
  for (int N = 0; N <= 6; ++N) {
    CAPTURE(N);
    CHECK(y_equation_residual(N) < 1e-5);
  }
  CHECK_THROWS_AS(y_equation_residual(2, 1e-3, 12.0, 200, 1e-3), UsageError);
  CHECK_THROWS_AS(y_equation_residual(2, 0.25, 12.0, 1), UsageError);
  CHECK_THROWS_AS(y_equation_residual(2, 0.25, 0.1), UsageError);
}
