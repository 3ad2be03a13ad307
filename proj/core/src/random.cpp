#include "lhvlab/random.hpp"

#include <cmath>

namespace lhvlab {

namespace {

Complex gaussian(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = gaussian(rng);
  return m;
}

ComplexMatrix symmetrize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  // Modified Gram-Schmidt on Ginibre columns is QR with positive diagonal R,
  // which is exactly the Haar phase convention.
  ComplexMatrix q = ginibre(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector v = q.col(j);
    for (std::size_t i = 0; i < j; ++i) {
      const ComplexVector u = q.col(i);
      const Complex proj = inner(u, v);
      for (std::size_t r = 0; r < n; ++r) v[r] -= proj * u[r];
    }
    const double norm = vector_norm(v);
    for (auto& z : v) z /= norm;
    q.set_col(j, v);
  }
  return q;
}

ComplexVector random_unit_vector(std::size_t n, Rng& rng) {
  ComplexVector v(n);
  for (auto& z : v) z = gaussian(rng);
  const double norm = vector_norm(v);
  for (auto& z : v) z /= norm;
  return v;
}

DensityMatrix random_density(std::size_t n, Rng& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return DensityMatrix(symmetrize(m));
}

DensityMatrix random_pure(std::size_t n, Rng& rng) {
  return DensityMatrix::pure(random_unit_vector(n, rng));
}

DensityMatrix random_product(std::size_t dim_a, std::size_t dim_b, Rng& rng) {
  return DensityMatrix(
      symmetrize(tensor(random_density(dim_a, rng).matrix(), random_density(dim_b, rng).matrix())));
}

DensityMatrix random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(terms);
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng) + 1e-3);
  ComplexMatrix m(dim_a * dim_b, dim_a * dim_b);
  for (std::size_t t = 0; t < terms; ++t) {
    const ComplexVector psi =
        tensor(random_unit_vector(dim_a, rng), random_unit_vector(dim_b, rng));
    m += (w[t] / total) * ComplexMatrix::outer(psi);
  }
  return DensityMatrix(symmetrize(m));
}

Povm random_projective(std::size_t n, Rng& rng) { return Povm::projective(random_unitary(n, rng)); }

Povm random_dichotomic(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ComplexMatrix v = random_unitary(n, rng);
  std::vector<double> spectrum(n);
  for (auto& s : spectrum) s = u(rng);
  ComplexMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) e += spectrum[i] * ComplexMatrix::outer(v.col(i));
  e = symmetrize(e);
  return Povm(std::vector<ComplexMatrix>{e, symmetrize(ComplexMatrix::identity(n) - e)});
}

}  // namespace lhvlab
