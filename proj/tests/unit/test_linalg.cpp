#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "lhvlab/errors.hpp"
#include "lhvlab/linalg.hpp"
#include "lhvlab/random.hpp"
#include "oracles.hpp"

using namespace lhvlab;

TEST_CASE("matrix construction validates shape and finiteness") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(nan, 0.0)}), DomainError);
  const ComplexMatrix m(2, 3);
  CHECK(m.rows() * m.cols() == m.entries().size());
}

TEST_CASE("hermitian check") {
  CHECK_NOTHROW(HermitianCheckedMatrix(fixture::pauli_x()));
  CHECK_THROWS_AS(HermitianCheckedMatrix(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(HermitianCheckedMatrix(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("tensor product") {
  CHECK(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));

  const ComplexMatrix p0 = ComplexMatrix::outer(basis_vector(2, 0));
  const ComplexMatrix p1 = ComplexMatrix::outer(basis_vector(2, 1));
  const ComplexMatrix t = tensor(p0, p1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(t(i, j) == Complex(i == 1 && j == 1 ? 1.0 : 0.0));

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = fixture::random_matrix(2, 2, rng);
    const ComplexMatrix b = fixture::random_matrix(2, 2, rng);
    CHECK(max_abs_diff(tensor(a, b), oracle::kron(a, b)) == 0.0);
  }

  SUBCASE("associative") {
    const ComplexMatrix a = fixture::random_matrix(2, 3, rng);
    const ComplexMatrix b = fixture::random_matrix(3, 2, rng);
    const ComplexMatrix c = fixture::random_matrix(2, 2, rng);
    CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-14);
  }
}

TEST_CASE("partial trace") {
  Rng rng(12);
  const DensityMatrix ra = random_density(2, rng);
  const DensityMatrix rb = random_density(3, rng);
  CHECK(max_abs_diff(partial_trace(tensor(ra.matrix(), rb.matrix()), 2, 3, Subsystem::B),
                     rb.matrix()) < 1e-14);
  CHECK(max_abs_diff(partial_trace(tensor(ra.matrix(), rb.matrix()), 2, 3, Subsystem::A),
                     ra.matrix()) < 1e-14);

  const ComplexVector phi{fixture::kInvSqrt2, 0.0, 0.0, fixture::kInvSqrt2};
  CHECK(max_abs_diff(partial_trace(ComplexMatrix::outer(phi), 2, 2, Subsystem::B),
                     0.5 * ComplexMatrix::identity(2)) < 1e-15);

  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = fixture::random_hermitian(4, rng);
    CHECK(max_abs_diff(partial_trace(h, 2, 2, Subsystem::B), oracle::trace_out_a(h, 2, 2)) < 1e-12);
    CHECK(max_abs_diff(partial_trace(h, 2, 2, Subsystem::A), oracle::trace_out_b(h, 2, 2)) < 1e-12);
  }

  SUBCASE("preserves the trace") {
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t da = 1 + trial % 3;
      const std::size_t db = 1 + (trial / 3) % 4;
      const ComplexMatrix m = fixture::random_matrix(da * db, da * db, rng);
      const Complex full = m.trace();
      CHECK(std::abs(partial_trace(m, da, db, Subsystem::B).trace() - full) < 1e-12);
      CHECK(std::abs(partial_trace(m, da, db, Subsystem::A).trace() - full) < 1e-12);
    }
  }

  CHECK_THROWS_AS(partial_trace(ComplexMatrix(5, 5), 2, 2, Subsystem::B), DimensionError);
}

TEST_CASE("Hilbert-Schmidt inner product") {
  CHECK(hs_inner(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == Complex(2.0));
  CHECK(std::abs(hs_inner(fixture::pauli_z(), fixture::pauli_x())) == 0.0);
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix x = fixture::random_matrix(3, 3, rng);
    const ComplexMatrix y = fixture::random_matrix(3, 3, rng);
    CHECK(std::abs(hs_inner(x, y) - oracle::hs_entrywise(x, y)) < 1e-12);
  }
}

TEST_CASE("hermitian eigendecomposition") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto e = hermitian_eigen(HermitianCheckedMatrix(ComplexMatrix::identity(n)));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  }
  const auto z = hermitian_eigen(HermitianCheckedMatrix(fixture::pauli_z()));
  CHECK(z.values[0] == doctest::Approx(-1.0));
  CHECK(z.values[1] == doctest::Approx(1.0));

  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix h = fixture::random_hermitian(5, rng);
    const auto e = hermitian_eigen(HermitianCheckedMatrix(h));
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    const ComplexMatrix lambda = ComplexMatrix::diagonal(e.values);
    CHECK(max_abs_diff(e.vectors * lambda * e.vectors.adjoint(), h) <= 1e-9);
    CHECK(unitarity_residual(e.vectors) <= 1e-9);
  }

  SUBCASE("agrees with closed-form spectra") {
    for (std::size_t n = 2; n <= 3; ++n)
      for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix h = fixture::random_hermitian(n, rng);
        const auto e = hermitian_eigen(HermitianCheckedMatrix(h));
        const auto ref = oracle::eigenvalues_closed_form(h);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e.values[i] - ref[i]) < 1e-10);
        CHECK(std::abs(min_eigenpair(HermitianCheckedMatrix(h)).value - ref.front()) < 1e-10);
        CHECK(std::abs(max_eigenpair(HermitianCheckedMatrix(h)).value - ref.back()) < 1e-10);
      }
  }

  SUBCASE("density spectra lie in the unit interval") {
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + trial % 6;
      const DensityMatrix rho = trial % 2 ? random_density(n, rng) : random_pure(n, rng);
      for (double v : hermitian_eigen(rho.hermitian()).values) {
        CHECK(v >= -1e-9);
        CHECK(v <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("eigenpair vectors are eigenvectors") {
  Rng rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix h = fixture::random_hermitian(4, rng);
    const EigenPair lo = min_eigenpair(HermitianCheckedMatrix(h));
    const ComplexVector hv = lhvlab::apply(h, lo.vector);
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::abs(hv[i] - lo.value * lo.vector[i]));
    CHECK(err < 1e-9);
    CHECK(vector_norm(lo.vector) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Schmidt decomposition") {
  const auto product = schmidt(tensor(basis_vector(2, 0), basis_vector(2, 1)), 2, 2);
  REQUIRE(product.rank() == 1);
  CHECK(product.coefficients[0] == doctest::Approx(1.0));

  const ComplexVector phi{fixture::kInvSqrt2, 0.0, 0.0, fixture::kInvSqrt2};
  const auto bell = schmidt(phi, 2, 2);
  REQUIRE(bell.rank() == 2);
  CHECK(bell.coefficients[0] == doctest::Approx(fixture::kInvSqrt2).epsilon(1e-12));
  CHECK(bell.coefficients[1] == doctest::Approx(fixture::kInvSqrt2).epsilon(1e-12));

  CHECK_THROWS_AS(schmidt(ComplexVector{1.0, 1.0, 0.0, 0.0}, 2, 2), NormalizationError);
  CHECK_THROWS_AS(schmidt(ComplexVector{1.0, 0.0, 0.0}, 2, 2), DimensionError);

  Rng rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexVector psi = random_unit_vector(9, rng);
    const auto s = schmidt(psi, 3, 3);
    double total = 0.0;
    for (double mu : s.coefficients) {
      CHECK(mu > kRankTol);
      total += mu * mu;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
    CHECK(std::is_sorted(s.coefficients.rbegin(), s.coefficients.rend()));
    const ComplexVector back = schmidt_reconstruct(s);
    ComplexVector diff(9);
    for (std::size_t i = 0; i < 9; ++i) diff[i] = back[i] - psi[i];
    CHECK(vector_norm(diff) <= 1e-8);
  }

  SUBCASE("coefficients are local-unitary invariant") {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t da = 2 + trial % 2, db = 2 + (trial / 2) % 3;
      const ComplexVector psi = random_unit_vector(da * db, rng);
      const ComplexMatrix uv = tensor(random_unitary(da, rng), random_unitary(db, rng));
      const auto s0 = schmidt(psi, da, db);
      const auto s1 = schmidt(lhvlab::apply(uv, psi), da, db);
      REQUIRE(s0.rank() == s1.rank());
      for (std::size_t i = 0; i < s0.rank(); ++i)
        CHECK(std::abs(s0.coefficients[i] - s1.coefficients[i]) <= 1e-8);
    }
  }
}

TEST_CASE("complete_to_unitary keeps the given columns") {
  Rng rng(17);
  const ComplexMatrix u = random_unitary(4, rng);
  ComplexMatrix two(4, 2);
  two.set_col(0, u.col(0));
  two.set_col(1, u.col(1));
  const ComplexMatrix full = complete_to_unitary(two);
  CHECK(unitarity_residual(full) < 1e-12);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(std::abs(full(r, 0) - u(r, 0)) < 1e-14);
    CHECK(std::abs(full(r, 1) - u(r, 1)) < 1e-14);
  }
}
