#pragma once

// Seeded random instances for tests, benchmarks and the acceptance suite.

#include <cstddef>
#include <random>

#include "lhvlab/quantum.hpp"

namespace lhvlab {

using Rng = std::mt19937_64;

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
ComplexMatrix random_unitary(std::size_t n, Rng& rng);
/// Uniform unit vector in C^n.
ComplexVector random_unit_vector(std::size_t n, Rng& rng);
/// Ginibre-induced mixed state of full rank (almost surely).
DensityMatrix random_density(std::size_t n, Rng& rng);
DensityMatrix random_pure(std::size_t n, Rng& rng);
DensityMatrix random_product(std::size_t dim_a, std::size_t dim_b, Rng& rng);
/// Convex mixture of `terms` random product pure states with random weights.
DensityMatrix random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, Rng& rng);
/// Projective measurement onto a Haar-random basis.
Povm random_projective(std::size_t n, Rng& rng);
/// Two-outcome POVM {E, 1 - E} with E having random spectrum in [0, 1].
Povm random_dichotomic(std::size_t n, Rng& rng);

}  // namespace lhvlab
