#pragma once

// Dense complex linear algebra for the small matrices that appear in
// bipartite quantum problems (a few dozen rows per factor at most).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lhvlab {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kRankTol = 1e-9;

/// Row-major dense complex matrix. Every entry is finite.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major `entries`; throws DimensionError on a
  /// size mismatch and DomainError on NaN/Inf.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// n x 1 column holding `v`.
  static ComplexMatrix column(std::span<const Complex> v);
  /// |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexVector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const Complex> v);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);
  ComplexMatrix& operator*=(double s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// Frobenius norm of a - b.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
/// max |H[i][j] - conj(H[j][i])|.
double hermiticity_residual(const ComplexMatrix& m);
/// Frobenius norm of U^dagger U - I.
double unitarity_residual(const ComplexMatrix& u);

double vector_norm(std::span<const Complex> v);
/// <x|y>, conjugating the left operand.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
ComplexVector apply(const ComplexMatrix& m, std::span<const Complex> v);
/// |i> in C^n.
ComplexVector basis_vector(std::size_t n, std::size_t i);

/// Square matrix verified to be Hermitian within a tolerance.
class HermitianCheckedMatrix {
 public:
  /// Throws DimensionError for non-square input and DomainError when the
  /// hermiticity residual exceeds `tol`.
  explicit HermitianCheckedMatrix(ComplexMatrix m, double tol = kHermitianTol);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  double hermiticity_residual() const noexcept { return residual_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
  double residual_ = 0.0;
};

/// Kronecker product, block (i, j) equal to a[i][j] * b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(std::span<const Complex> a, std::span<const Complex> b);

enum class Subsystem { A, B };

/// Partial trace of an operator on C^dim_a (x) C^dim_b, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);

/// Hilbert-Schmidt inner product tr(X^dagger Y).
Complex hs_inner(const ComplexMatrix& x, const ComplexMatrix& y);
Complex hs_inner(const HermitianCheckedMatrix& x, const HermitianCheckedMatrix& y);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j pairs with values[j]
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations on
/// its real symmetric embedding [[Re, -Im], [Im, Re]]. Throws
/// ConvergenceError when `max_sweeps` sweeps do not annihilate the
/// off-diagonal part.
EigenDecomposition hermitian_eigen(const HermitianCheckedMatrix& h, int max_sweeps = 100);

/// Smallest eigenvalue and a unit eigenvector for it.
struct EigenPair {
  double value = 0.0;
  ComplexVector vector;
};
EigenPair min_eigenpair(const HermitianCheckedMatrix& h);
EigenPair max_eigenpair(const HermitianCheckedMatrix& h);

/// psi = sum_i coefficients[i] |a_i>|b_i>, strictly positive coefficients
/// only, sorted descending.
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  ComplexMatrix basis_a;  // dim_a x rank, orthonormal columns
  ComplexMatrix basis_b;  // dim_b x rank, orthonormal columns
  std::size_t rank() const noexcept { return coefficients.size(); }
};

/// Throws NormalizationError unless |psi| = 1 within 1e-9 and
/// DimensionError unless psi has dim_a * dim_b entries.
SchmidtDecomposition schmidt(std::span<const Complex> psi, std::size_t dim_a, std::size_t dim_b,
                             double rank_tol = kRankTol);

/// Rebuilds sum_i mu_i |a_i>|b_i>.
ComplexVector schmidt_reconstruct(const SchmidtDecomposition& s);

/// Extends orthonormal columns to a full unitary using the canonical
/// vectors, in order, as Gram-Schmidt candidates.
ComplexMatrix complete_to_unitary(const ComplexMatrix& columns);

}  // namespace lhvlab
