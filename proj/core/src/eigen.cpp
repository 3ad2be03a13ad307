#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lhvlab/errors.hpp"
#include "lhvlab/linalg.hpp"

namespace lhvlab {

namespace {

// Symmetric real matrix in row-major storage together with its accumulated
// rotations.
struct RealJacobi {
  std::size_t n;
  std::vector<double> a;
  std::vector<double> v;

  explicit RealJacobi(std::size_t size) : n(size), a(size * size), v(size * size, 0.0) {
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }

  double off_norm2() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    return s;
  }

  double diag_norm2() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i * n + i] * a[i * n + i];
    return s;
  }

  // Annihilates a(p, q) with a classical rotation (Golub & Van Loan sym.schur2).
  void rotate(std::size_t p, std::size_t q) {
    const double apq = at(p, q);
    if (apq == 0.0) return;
    const double app = at(p, p);
    const double aqq = at(q, q);
    const double tau = (aqq - app) / (2.0 * apq);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    for (std::size_t k = 0; k < n; ++k) {
      const double akp = at(k, p);
      const double akq = at(k, q);
      at(k, p) = c * akp - s * akq;
      at(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double apk = at(p, k);
      const double aqk = at(q, k);
      at(p, k) = c * apk - s * aqk;
      at(q, k) = s * apk + c * aqk;
    }
    at(p, q) = 0.0;
    at(q, p) = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double vkp = v[k * n + p];
      const double vkq = v[k * n + q];
      v[k * n + p] = c * vkp - s * vkq;
      v[k * n + q] = s * vkp + c * vkq;
    }
  }
};

}  // namespace

EigenDecomposition hermitian_eigen(const HermitianCheckedMatrix& h, int max_sweeps) {
  const ComplexMatrix& m = h.matrix();
  const std::size_t n = m.rows();
  EigenDecomposition out;
  if (n == 0) return out;

  // Embedding [[Re, -Im], [Im, Re]], averaged with its transpose so that the
  // tolerated hermiticity residual does not leak into the rotations.
  const std::size_t n2 = 2 * n;
  RealJacobi jac(n2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      jac.at(i, j) = z.real();
      jac.at(i + n, j + n) = z.real();
      jac.at(i, j + n) = -z.imag();
      jac.at(i + n, j) = z.imag();
    }

  const double scale2 = jac.off_norm2() + jac.diag_norm2();
  const double eps2 = 1e-28 * scale2;
  int sweep = 0;
  while (jac.off_norm2() > eps2 && scale2 > 0.0) {
    if (sweep++ >= max_sweeps) {
      throw ConvergenceError("hermitian_eigen: no convergence after " +
                             std::to_string(max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n2; ++p)
      for (std::size_t q = p + 1; q < n2; ++q) jac.rotate(p, q);
  }

  // Every eigenvalue of the embedding appears twice; (u, v) and (-v, u)
  // both map to the complex ray of u + i v. Pick n mutually orthogonal
  // complex vectors, always taking the candidate with the largest component
  // outside the span accepted so far.
  std::vector<ComplexVector> cand(n2, ComplexVector(n));
  for (std::size_t c = 0; c < n2; ++c)
    for (std::size_t i = 0; i < n; ++i)
      cand[c][i] = Complex(jac.v[i * n2 + c], jac.v[(i + n) * n2 + c]);

  std::vector<ComplexVector> chosen;
  std::vector<bool> used(n2, false);
  chosen.reserve(n);
  while (chosen.size() < n) {
    std::size_t best = n2;
    double best_norm = -1.0;
    ComplexVector best_vec;
    for (std::size_t c = 0; c < n2; ++c) {
      if (used[c]) continue;
      ComplexVector r = cand[c];
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : chosen) {
          const Complex ov = inner(b, r);
          for (std::size_t i = 0; i < n; ++i) r[i] -= ov * b[i];
        }
      const double nr = vector_norm(r);
      if (nr > best_norm + 1e-12) {
        best_norm = nr;
        best = c;
        best_vec = std::move(r);
      }
    }
    used[best] = true;
    for (auto& z : best_vec) z /= best_norm;
    chosen.push_back(std::move(best_vec));
  }

  std::vector<double> rq(n);
  for (std::size_t j = 0; j < n; ++j) {
    rq[j] = inner(chosen[j], lhvlab::apply(m, chosen[j])).real();
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return rq[x] < rq[y]; });

  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = rq[order[j]];
    out.vectors.set_col(j, chosen[order[j]]);
  }
  return out;
}

EigenPair min_eigenpair(const HermitianCheckedMatrix& h) {
  auto e = hermitian_eigen(h);
  return {e.values.front(), e.vectors.col(0)};
}

EigenPair max_eigenpair(const HermitianCheckedMatrix& h) {
  auto e = hermitian_eigen(h);
  return {e.values.back(), e.vectors.col(e.values.size() - 1)};
}

}  // namespace lhvlab
