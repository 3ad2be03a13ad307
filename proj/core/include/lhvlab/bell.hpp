#pragma once

// Membership of a correlation tensor in the local polytope of a fixed
// measurement scenario, decided by linear programming over the
// deterministic vertices.

#include <cstddef>
#include <optional>
#include <vector>

#include "lhvlab/quantum.hpp"
#include "lhvlab/simplex.hpp"

namespace lhvlab {

inline constexpr std::size_t kVertexCap = std::size_t{1} << 16;
inline constexpr double kFeasTol = 1e-7;

/// Deterministic vertices; vertex k * N_B + j pairs Alice's strategy k with
/// Bob's strategy j and is laid out like CorrelationTensor::values().
/// Throws CapacityError when N_A * N_B exceeds `cap`.
std::vector<std::vector<double>> local_vertices(std::size_t settings_a, std::size_t outcomes_a,
                                                std::size_t settings_b, std::size_t outcomes_b,
                                                std::size_t cap = kVertexCap);

/// Weights q_{k,j} over pairs of deterministic strategies.
struct BellLocalModel {
  std::size_t strategies_a = 0;
  std::size_t strategies_b = 0;
  std::vector<double> weights;  // index k * strategies_b + j

  double weight(std::size_t k, std::size_t j) const { return weights[k * strategies_b + j]; }
};

/// Affine separating functional: <L, p'> >= local_bound on every local p',
/// value_on_target = <L, p> < local_bound.
struct BellWitness {
  std::size_t outcomes_a = 0, outcomes_b = 0, settings_a = 0, settings_b = 0;
  std::vector<double> coefficients;
  double local_bound = 0.0;
  double value_on_target = 0.0;

  double margin() const noexcept { return local_bound - value_on_target; }
};

enum class BellTag { Local, Nonlocal };

struct BellVerdict {
  BellTag tag = BellTag::Local;
  std::optional<BellLocalModel> model;
  std::optional<BellWitness> witness;
  /// Local: largest entrywise reconstruction error of the model.
  /// Nonlocal: L1 distance reached by the phase-one LP.
  double residual = 0.0;
};

struct BellOptions {
  double feas_tol = kFeasTol;
  std::size_t vertex_cap = kVertexCap;
  SimplexOptions simplex{};
};

/// Local when the phase-one L1 infeasibility is at most feas_tol (boundary
/// points count as local); otherwise Nonlocal with a Farkas witness whose
/// margin, re-checked against every vertex, is at least feas_tol. Throws
/// SolverError when neither certificate verifies.
BellVerdict decide_bell_local(const CorrelationTensor& p, const BellOptions& options = {});

/// <L, p>
double evaluate_witness(const BellWitness& w, const CorrelationTensor& p);

/// min over deterministic vertices of <L, vertex>, by exhaustive sweep.
double local_bound(std::span<const double> coefficients, std::size_t outcomes_a,
                   std::size_t outcomes_b, std::size_t settings_a, std::size_t settings_b,
                   std::size_t cap = kVertexCap);

/// Builds a witness for given coefficients, with an exact local bound.
BellWitness make_bell_witness(std::vector<double> coefficients, const CorrelationTensor& target);

/// sum_{k,j} q_{k,j} delta_{a,J_k(x)} delta_{b,K_j(y)}
std::vector<double> reconstruct_correlations(const BellLocalModel& model, std::size_t outcomes_a,
                                             std::size_t outcomes_b, std::size_t settings_a,
                                             std::size_t settings_b);

}  // namespace lhvlab
