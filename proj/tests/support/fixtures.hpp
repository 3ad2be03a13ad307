#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lhvlab/quantum.hpp"
#include "lhvlab/random.hpp"

namespace fixture {

using lhvlab::Complex;
using lhvlab::ComplexMatrix;

inline const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

inline ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

inline ComplexMatrix hadamard() {
  return {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
}

/// Two-outcome projective measurement of the +-1 observable `obs`.
inline lhvlab::Povm observable(const ComplexMatrix& obs) {
  const ComplexMatrix id = ComplexMatrix::identity(obs.rows());
  return lhvlab::Povm(std::vector<ComplexMatrix>{0.5 * (id + obs), 0.5 * (id - obs)});
}

inline lhvlab::MeasurementAssemblage z_and_hadamard() {
  return lhvlab::MeasurementAssemblage(
      {lhvlab::Povm::projective(ComplexMatrix::identity(2)), lhvlab::Povm::projective(hadamard())});
}

inline lhvlab::MeasurementAssemblage chsh_alice() {
  return lhvlab::MeasurementAssemblage({observable(pauli_z()), observable(pauli_x())});
}

inline lhvlab::MeasurementAssemblage chsh_bob() {
  return lhvlab::MeasurementAssemblage({observable(kInvSqrt2 * (pauli_z() + pauli_x())),
                                        observable(kInvSqrt2 * (pauli_z() - pauli_x()))});
}

inline ComplexMatrix random_hermitian(std::size_t n, lhvlab::Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = Complex(g(rng), g(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, lhvlab::Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(r, c);
  for (auto& z : m.entries()) z = Complex(g(rng), g(rng));
  return m;
}

/// E_{a,b}[(-1)^{a+b}] for setting pair (x, y).
inline double correlator(const lhvlab::CorrelationTensor& p, std::size_t x, std::size_t y) {
  double e = 0.0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) e += ((a + b) % 2 == 0 ? 1.0 : -1.0) * p(a, b, x, y);
  return e;
}

inline double chsh_value(const lhvlab::CorrelationTensor& p) {
  return correlator(p, 0, 0) + correlator(p, 0, 1) + correlator(p, 1, 0) - correlator(p, 1, 1);
}

}  // namespace fixture
