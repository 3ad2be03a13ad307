#pragma once

// Phase-one dense-tableau simplex for { x >= 0 : A x = b } that returns
// either a feasible point or a Farkas certificate of infeasibility.

#include <cstddef>
#include <span>
#include <vector>

namespace lhvlab {

/// Row-major dense real matrix.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct SimplexOptions {
  /// Rank-revealing elimination threshold for redundant rows.
  double pivot_tol = 1e-10;
  /// Reduced costs above -cost_tol count as nonnegative.
  double cost_tol = 1e-11;
  std::size_t max_pivots = 1'000'000;
};

struct PhaseOneResult {
  /// Nonnegative point minimizing |A x - b|_1 over the retained rows.
  std::vector<double> x;
  /// Attained value of min |A x - b|_1 (0 when feasible up to rounding).
  double infeasibility = 0.0;
  /// y over all rows of A with y^T A <= 0 columnwise, |y|_inf <= 1 and
  /// y^T b = infeasibility. Carries no information when feasible.
  std::vector<double> farkas;
  /// Rows kept after removing linearly dependent ones.
  std::vector<std::size_t> kept_rows;
  std::size_t pivots = 0;
  /// True when b violates a linear dependency among the rows of A; the
  /// certificate then satisfies y^T A = 0.
  bool inconsistent_rows = false;
};

/// Minimizes |A x - b|_1 over x >= 0 with Bland's rule, starting from the
/// slack basis. Throws SolverError if the pivot budget runs out.
PhaseOneResult phase_one(const RealMatrix& a, std::span<const double> b,
                         const SimplexOptions& options = {});

}  // namespace lhvlab
