#pragma once

// States, measurements and the objects derived from them: joint outcome
// statistics and conditional-state assemblages.

#include <cstddef>
#include <span>
#include <vector>

#include "lhvlab/linalg.hpp"

namespace lhvlab {

/// Tolerance on the smallest eigenvalue for positivity checks.
inline constexpr double kPsdTol = 1e-9;

bool is_psd(const HermitianCheckedMatrix& m, double tol = kPsdTol);

/// Unit-trace positive semidefinite operator.
class DensityMatrix {
 public:
  /// Throws DomainError for a non-Hermitian or non-PSD matrix and
  /// NormalizationError when the trace is off by more than 1e-9.
  explicit DensityMatrix(ComplexMatrix m);

  /// |psi><psi|; |psi| must be 1 within 1e-9.
  static DensityMatrix pure(std::span<const Complex> psi);

  const ComplexMatrix& matrix() const noexcept { return matrix_.matrix(); }
  const HermitianCheckedMatrix& hermitian() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

 private:
  HermitianCheckedMatrix matrix_;
};

/// Positive operator-valued measure; effects are PSD and sum to identity.
class Povm {
 public:
  explicit Povm(std::vector<HermitianCheckedMatrix> effects);
  explicit Povm(const std::vector<ComplexMatrix>& effects);

  /// Rank-one projectors onto the columns of an orthonormal set.
  static Povm projective(const ComplexMatrix& columns);

  std::size_t outcomes() const noexcept { return effects_.size(); }
  std::size_t dim() const noexcept { return effects_.front().dim(); }
  const HermitianCheckedMatrix& effect(std::size_t a) const { return effects_.at(a); }
  const std::vector<HermitianCheckedMatrix>& effects() const noexcept { return effects_; }

 private:
  std::vector<HermitianCheckedMatrix> effects_;
};

/// A party's finite family of measurement settings. Settings with fewer
/// outcomes than the largest one are padded with zero effects.
class MeasurementAssemblage {
 public:
  explicit MeasurementAssemblage(std::vector<Povm> povms);

  std::size_t settings() const noexcept { return povms_.size(); }
  std::size_t outcomes() const noexcept { return outcomes_; }
  std::size_t dim() const noexcept { return povms_.front().dim(); }
  const Povm& povm(std::size_t x) const { return povms_.at(x); }
  const std::vector<Povm>& povms() const noexcept { return povms_; }
  const ComplexMatrix& effect(std::size_t a, std::size_t x) const {
    return povms_.at(x).effect(a).matrix();
  }

 private:
  std::vector<Povm> povms_;
  std::size_t outcomes_ = 0;
};

/// Bob's unnormalized conditional states rho_{a|x}.
class Assemblage {
 public:
  /// `members[x][a]`. Checks positivity (-1e-9), that sum_a rho_{a|x} is the
  /// same for every x (1e-8 Frobenius) and that it has unit trace (1e-8).
  explicit Assemblage(std::vector<std::vector<ComplexMatrix>> members);

  std::size_t settings() const noexcept { return settings_; }
  std::size_t outcomes() const noexcept { return outcomes_; }
  std::size_t dim() const noexcept { return dim_; }
  const ComplexMatrix& member(std::size_t a, std::size_t x) const {
    return members_[x * outcomes_ + a];
  }
  /// sum_a rho_{a|0}
  ComplexMatrix reduced_state() const;

 private:
  std::size_t settings_ = 0;
  std::size_t outcomes_ = 0;
  std::size_t dim_ = 0;
  std::vector<ComplexMatrix> members_;
};

/// P(a, b | x, y). Stored with the (x, y) blocks contiguous:
/// index ((x * m_b + y) * o_a + a) * o_b + b.
class CorrelationTensor {
 public:
  /// Checks every (x, y) block sums to 1 within 1e-9 and entries >= -1e-12.
  CorrelationTensor(std::size_t o_a, std::size_t o_b, std::size_t m_a, std::size_t m_b,
                    std::vector<double> values);

  std::size_t outcomes_a() const noexcept { return o_a_; }
  std::size_t outcomes_b() const noexcept { return o_b_; }
  std::size_t settings_a() const noexcept { return m_a_; }
  std::size_t settings_b() const noexcept { return m_b_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t index(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const noexcept {
    return ((x * m_b_ + y) * o_a_ + a) * o_b_ + b;
  }
  double operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return values_[index(a, b, x, y)];
  }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const CorrelationTensor& other) const noexcept {
    return o_a_ == other.o_a_ && o_b_ == other.o_b_ && m_a_ == other.m_a_ && m_b_ == other.m_b_;
  }

 private:
  std::size_t o_a_, o_b_, m_a_, m_b_;
  std::vector<double> values_;
};

/// t * p + (1 - t) * q
CorrelationTensor mix(const CorrelationTensor& p, const CorrelationTensor& q, double t);

/// Orthonormal basis stored as the columns of a unitary.
class Basis {
 public:
  /// Throws NonUnitaryError when the unitarity residual exceeds 1e-9.
  explicit Basis(ComplexMatrix columns);
  static Basis computational(std::size_t n);

  std::size_t dim() const noexcept { return columns_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return columns_; }
  ComplexVector vector(std::size_t i) const { return columns_.col(i); }
  /// Entrywise complex conjugate of every basis vector.
  Basis conjugate() const { return Basis(columns_.conjugate()); }

 private:
  ComplexMatrix columns_;
};

/// Joint statistics tr[(M_{a|x} (x) N_{b|y}) rho].
CorrelationTensor correlations_of(const DensityMatrix& rho, const MeasurementAssemblage& alice,
                                  const MeasurementAssemblage& bob);

/// rho_{a|x} = tr_A[(M_{a|x} (x) 1) rho]; Bob's dimension is inferred.
Assemblage assemblage_of(const DensityMatrix& rho, const MeasurementAssemblage& alice);

/// Swaps the tensor factors of an operator on C^dim_a (x) C^dim_b.
DensityMatrix swap_parties(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b);

/// Columns omega^{(k)(j)} / sqrt(n), omega = exp(2 pi i / n).
Basis fourier_basis(std::size_t n);

inline constexpr double kDisjointTol = 1e-9;

/// True iff no |e_i><e_i| coincides with any |f_j><f_j|, tested as
/// |<e_i|f_j>| < 1 - tol.
bool is_disjoint(const Basis& e, const Basis& f, double tol = kDisjointTol);
/// Same test for families of unit vectors that need not be orthogonal.
bool is_disjoint_rays(const ComplexMatrix& e, const ComplexMatrix& f, double tol = kDisjointTol);

/// (1/sqrt(n)) sum_i |i>|i>, as a density matrix on C^n (x) C^n.
DensityMatrix maximally_entangled(std::size_t n);
ComplexVector maximally_entangled_vector(std::size_t n);

/// sum_i mu_i |a_i>|b_i> using the first mu.size() vectors of each basis.
DensityMatrix pure_from_schmidt(std::span<const double> mu, const Basis& basis_a,
                                const Basis& basis_b);
ComplexVector pure_vector_from_schmidt(std::span<const double> mu, const Basis& basis_a,
                                       const Basis& basis_b);

/// (U (x) V) rho (U (x) V)^dagger.
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                                  const ComplexMatrix& v);
/// {U M_{a|x} U^dagger}.
MeasurementAssemblage conjugate_assemblage(const MeasurementAssemblage& ma,
                                           const ComplexMatrix& u);
/// {V rho_{a|x} V^dagger}.
Assemblage conjugate_assemblage(const Assemblage& sigma, const ComplexMatrix& v);

/// P(a | x, lambda) laid out as response[x][lambda][a].
using ResponseTable = std::vector<std::vector<std::vector<double>>>;

/// M_{a|x} = sum_lambda P(a|x,lambda) N_lambda. Throws DomainError when a
/// response column is not a probability distribution.
MeasurementAssemblage smear_parent_povm(const Povm& parent, const ResponseTable& response);

/// Projective measurement onto a basis, optionally conjugating the vectors.
Povm projective_measurement(const Basis& basis, bool conjugate = false);

}  // namespace lhvlab
