#include "lhvlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lhvlab/errors.hpp"

namespace lhvlab {

namespace {

constexpr double kConsistencyTol = 1e-9;

struct Reduction {
  std::vector<std::size_t> kept;
  // Set when a dependent row has an incompatible right-hand side.
  std::vector<double> conflict;
};

// Gaussian elimination over the rows of [A | b], keeping the rows that add
// rank. Each echelon row also carries its expression in original rows so a
// conflicting dependency can be reported as a left null vector of A.
Reduction remove_dependent_rows(const RealMatrix& a, std::span<const double> b, double pivot_tol) {
  Reduction out;
  std::vector<std::vector<double>> ech;
  std::vector<std::vector<double>> comb;
  std::vector<double> ech_b;
  std::vector<std::size_t> pivot;

  for (std::size_t r = 0; r < a.rows; ++r) {
    std::vector<double> row(a.data.begin() + static_cast<std::ptrdiff_t>(r * a.cols),
                            a.data.begin() + static_cast<std::ptrdiff_t>((r + 1) * a.cols));
    std::vector<double> c(a.rows, 0.0);
    c[r] = 1.0;
    double rb = b[r];
    double scale = 1.0;
    for (double v : row) scale = std::max(scale, std::abs(v));

    for (std::size_t e = 0; e < ech.size(); ++e) {
      const double f = row[pivot[e]] / ech[e][pivot[e]];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < a.cols; ++j) row[j] -= f * ech[e][j];
      for (std::size_t i = 0; i < a.rows; ++i) c[i] -= f * comb[e][i];
      rb -= f * ech_b[e];
    }
    std::size_t best = 0;
    double best_abs = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (std::abs(row[j]) > best_abs) {
        best_abs = std::abs(row[j]);
        best = j;
      }
    }
    if (best_abs > pivot_tol * scale) {
      ech.push_back(std::move(row));
      comb.push_back(std::move(c));
      ech_b.push_back(rb);
      pivot.push_back(best);
      out.kept.push_back(r);
    } else if (std::abs(rb) > kConsistencyTol && out.conflict.empty()) {
      const double sign = rb > 0.0 ? 1.0 : -1.0;
      double cmax = 0.0;
      for (double v : c) cmax = std::max(cmax, std::abs(v));
      for (auto& v : c) v *= sign / cmax;
      out.conflict = std::move(c);
    }
  }
  return out;
}

}  // namespace

PhaseOneResult phase_one(const RealMatrix& a, std::span<const double> b,
                         const SimplexOptions& options) {
  if (b.size() != a.rows) throw DimensionError("phase_one: right-hand side length mismatch");
  PhaseOneResult result;
  result.x.assign(a.cols, 0.0);
  result.farkas.assign(a.rows, 0.0);

  Reduction red = remove_dependent_rows(a, b, options.pivot_tol);
  result.kept_rows = red.kept;
  if (!red.conflict.empty()) {
    result.inconsistent_rows = true;
    result.farkas = red.conflict;
    double yb = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) yb += result.farkas[i] * b[i];
    result.infeasibility = yb;
    return result;
  }

  // Tableau over the kept rows for A x + s+ - s- = b with b >= 0 after
  // sign flips. Columns: x (n), s+ (m), s- (m), rhs.
  const std::size_t m = red.kept.size();
  const std::size_t n = a.cols;
  const std::size_t width = n + 2 * m + 1;
  const std::size_t rhs = n + 2 * m;
  std::vector<double> sign(m, 1.0);
  RealMatrix t(m, width);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = red.kept[i];
    sign[i] = b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = sign[i] * a(r, j);
    t(i, n + i) = 1.0;
    t(i, n + m + i) = -1.0;
    t(i, rhs) = sign[i] * b[r];
  }
  std::vector<double> cost(width - 1, 0.0);
  for (std::size_t j = n; j < n + 2 * m; ++j) cost[j] = 1.0;
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // reduced costs d_j = c_j - c_B^T B^{-1} A_j
  std::vector<double> d(width - 1);
  for (std::size_t j = 0; j + 1 < width; ++j) {
    double s = cost[j];
    for (std::size_t i = 0; i < m; ++i) s -= cost[basis[i]] * t(i, j);
    d[j] = s;
  }

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (d[j] < -options.cost_tol) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double piv = t(i, enter);
      if (piv <= options.cost_tol) continue;
      const double ratio = t(i, rhs) / piv;
      if (leave == m || ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    // The objective is bounded below by 0, so an improving column always
    // has a blocking row.
    if (leave == m) throw SolverError("phase_one: unbounded direction in a bounded problem");

    if (++result.pivots > options.max_pivots) {
      throw SolverError("phase_one: pivot budget of " + std::to_string(options.max_pivots) +
                        " exhausted");
    }
    const double piv = t(leave, enter);
    for (std::size_t j = 0; j < width; ++j) t(leave, j) /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t(i, j) -= f * t(leave, j);
    }
    const double fd = d[enter];
    for (std::size_t j = 0; j + 1 < width; ++j) d[j] -= fd * t(leave, j);
    basis[leave] = enter;
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] = std::max(0.0, t(i, rhs));
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = red.kept[i];
    double s = -b[r];
    for (std::size_t j = 0; j < n; ++j) s += a(r, j) * result.x[j];
    l1 += std::abs(s);
  }
  result.infeasibility = l1;

  // y_i = c_{s+_i} - d_{s+_i}, mapped back through the sign flips.
  for (std::size_t i = 0; i < m; ++i) {
    const double y = std::clamp(1.0 - d[n + i], -1.0, 1.0);
    result.farkas[red.kept[i]] = sign[i] * y;
  }
  return result;
}

}  // namespace lhvlab
