#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lhvlab/errors.hpp"
#include "lhvlab/linalg.hpp"

namespace lhvlab {

namespace {

// Relative spread under which two Schmidt coefficients count as one
// degenerate block.
constexpr double kDegenerateTol = 1e-10;

void orthonormalize_block(std::vector<ComplexVector>& vecs, std::size_t begin, std::size_t end) {
  for (std::size_t j = begin; j < end; ++j) {
    for (std::size_t k = begin; k < j; ++k) {
      const Complex ov = inner(vecs[k], vecs[j]);
      for (std::size_t i = 0; i < vecs[j].size(); ++i) vecs[j][i] -= ov * vecs[k][i];
    }
    const double nv = vector_norm(vecs[j]);
    for (auto& z : vecs[j]) z /= nv;
  }
}

}  // namespace

SchmidtDecomposition schmidt(std::span<const Complex> psi, std::size_t dim_a, std::size_t dim_b,
                             double rank_tol) {
  if (psi.size() != dim_a * dim_b || dim_a == 0 || dim_b == 0) {
    throw DimensionError("schmidt: vector of length " + std::to_string(psi.size()) +
                         " does not fit " + std::to_string(dim_a) + "x" + std::to_string(dim_b));
  }
  const double nrm = vector_norm(psi);
  if (std::abs(nrm - 1.0) > 1e-9) {
    throw NormalizationError("schmidt: |psi| = " + std::to_string(nrm));
  }

  // psi as a dim_a x dim_b coefficient matrix C, psi = sum C[i][j] |i>|j>.
  ComplexMatrix c(dim_a, dim_b, ComplexVector(psi.begin(), psi.end()));
  const bool reduce_on_a = dim_a <= dim_b;
  // On A: C C^dagger a_i = mu_i^2 a_i. On B: C^dagger C w_i = mu_i^2 w_i with w_i = conj(b_i).
  const ComplexMatrix reduced = reduce_on_a ? c * c.adjoint() : c.adjoint() * c;
  const auto eig = hermitian_eigen(HermitianCheckedMatrix(reduced, 1e-9));

  // Unnormalized partner of a primary vector; its norm is the Schmidt
  // coefficient, accurate to absolute rounding even when it is tiny (the
  // square root of a reduced eigenvalue is not).
  auto partner_of = [&](const ComplexVector& p) {
    if (reduce_on_a) {
      // b[j] = sum_i conj(a[i]) C[i][j]
      ComplexVector b(dim_b);
      for (std::size_t j = 0; j < dim_b; ++j) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < dim_a; ++i) s += std::conj(p[i]) * c(i, j);
        b[j] = s;
      }
      return b;
    }
    return lhvlab::apply(c, p);  // a = C w
  };

  const std::size_t small = reduced.rows();
  std::vector<ComplexVector> primary_all(small);
  std::vector<double> mu_all(small);
  for (std::size_t k = 0; k < small; ++k) {
    primary_all[k] = eig.vectors.col(k);
    mu_all[k] = vector_norm(partner_of(primary_all[k]));
  }
  std::vector<std::size_t> order(small);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return mu_all[x] > mu_all[y]; });

  std::vector<double> mu;
  std::vector<ComplexVector> primary;
  for (std::size_t idx : order) {
    if (!(mu_all[idx] > rank_tol)) continue;
    mu.push_back(mu_all[idx]);
    primary.push_back(primary_all[idx]);
  }
  const std::size_t r = mu.size();

  auto for_each_block = [&](auto&& fn) {
    for (std::size_t s = 0; s < r;) {
      std::size_t e = s + 1;
      while (e < r && std::abs(mu[e] - mu[s]) <= kDegenerateTol * std::max(1.0, mu[s])) ++e;
      fn(s, e);
      s = e;
    }
  };
  // Degenerate blocks: clean the eigenvectors before back-substitution.
  for_each_block([&](std::size_t s, std::size_t e) { orthonormalize_block(primary, s, e); });

  std::vector<ComplexVector> partner(r);
  for (std::size_t k = 0; k < r; ++k) {
    partner[k] = partner_of(primary[k]);
    mu[k] = vector_norm(partner[k]);
    for (auto& z : partner[k]) z /= mu[k];
  }
  for_each_block([&](std::size_t s, std::size_t e) { orthonormalize_block(partner, s, e); });

  SchmidtDecomposition out;
  out.coefficients = mu;
  out.basis_a = ComplexMatrix(dim_a, r);
  out.basis_b = ComplexMatrix(dim_b, r);
  for (std::size_t k = 0; k < r; ++k) {
    if (reduce_on_a) {
      out.basis_a.set_col(k, primary[k]);
      out.basis_b.set_col(k, partner[k]);
    } else {
      ComplexVector b = primary[k];
      for (auto& z : b) z = std::conj(z);
      out.basis_a.set_col(k, partner[k]);
      out.basis_b.set_col(k, b);
    }
  }
  return out;
}

ComplexVector schmidt_reconstruct(const SchmidtDecomposition& s) {
  const std::size_t da = s.basis_a.rows();
  const std::size_t db = s.basis_b.rows();
  ComplexVector psi(da * db);
  for (std::size_t k = 0; k < s.rank(); ++k)
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < db; ++j)
        psi[i * db + j] += s.coefficients[k] * s.basis_a(i, k) * s.basis_b(j, k);
  return psi;
}

}  // namespace lhvlab
