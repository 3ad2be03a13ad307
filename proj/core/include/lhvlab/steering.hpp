#pragma once

// One-way steering from Alice to Bob for a fixed set of Alice's
// measurements.
//
// An assemblage {rho_{a|x}} admits a local hidden state model iff there are
// PSD operators tau_k, one per deterministic strategy J_k, with unit total
// trace and rho_{a|x} = sum_k delta_{a,J_k(x)} tau_k. The decider minimizes
// the squared Hilbert-Schmidt distance to that convex set by accelerated
// projected gradient. The Frank-Wolfe linear oracle (a smallest eigenpair per
// block) supplies the duality gap, which bounds the suboptimality and so
// certifies a lower bound on the distance.

#include <cstddef>
#include <optional>
#include <vector>

#include "lhvlab/quantum.hpp"
#include "lhvlab/strategies.hpp"

namespace lhvlab {

inline constexpr double kDistTol = 1e-6;
inline constexpr double kGapTol = 1e-8;
inline constexpr std::size_t kMaxIters = 50000;
inline constexpr double kCriterionTol = 1e-8;

struct SteeringOptions {
  double dist_tol = kDistTol;
  double gap_tol = kGapTol;
  std::size_t max_iters = kMaxIters;
  std::size_t strategy_cap = kStrategyCap;
  /// Workers for the per-block eigenproblems; results do not depend on it.
  std::size_t threads = 1;
};

/// tau_k indexed by the lexicographic strategy rank of the space
/// enumerate_strategies(settings, outcomes).
struct LhsModel {
  std::size_t settings = 0;
  std::size_t outcomes = 0;
  std::vector<ComplexMatrix> tau;

  /// pi_k = tr(tau_k)
  double weight(std::size_t k) const { return tau.at(k).trace().real(); }
  /// sigma_k = tau_k / pi_k; zero when pi_k = 0.
  ComplexMatrix hidden_state(std::size_t k) const;
};

/// sum_k delta_{a,J_k(x)} tau_k, as grid[x][a].
std::vector<std::vector<ComplexMatrix>> reconstruct_assemblage(const LhsModel& model);

/// sqrt(sum_{a,x} |reconstruction - rho_{a|x}|_F^2), summed directly.
double reconstruction_distance(const LhsModel& model, const Assemblage& sigma);

/// Functionals F(a, x) with value = sum tr(F rho_{a|x}) and lhs_bound = max
/// over LHS assemblages, i.e. max_J lambda_max(sum_x F(J(x), x)).
struct SteeringWitness {
  std::size_t settings = 0;
  std::size_t outcomes = 0;
  std::vector<ComplexMatrix> functionals;  // index x * outcomes + a
  double lhs_bound = 0.0;
  double value_on_target = 0.0;

  const ComplexMatrix& functional(std::size_t a, std::size_t x) const {
    return functionals.at(x * outcomes + a);
  }
  double margin() const noexcept { return value_on_target - lhs_bound; }
};

/// sum_{a,x} tr(F(a,x) rho_{a|x}).
double steering_functional_value(const std::vector<ComplexMatrix>& functionals,
                                 const Assemblage& sigma);
/// Exhaustive sweep over all strategies of max_J lambda_max(sum_x F(J(x), x)).
double steering_lhs_bound(const std::vector<ComplexMatrix>& functionals, std::size_t settings,
                          std::size_t outcomes, std::size_t cap = kStrategyCap);
/// Witness with exact bound and value for the given functionals.
SteeringWitness make_steering_witness(std::vector<ComplexMatrix> functionals,
                                      const Assemblage& sigma, std::size_t cap = kStrategyCap);

struct NearestLhsResult {
  LhsModel model;
  double distance = 0.0;  // sqrt of the attained objective
  double fw_gap = 0.0;    // Frank-Wolfe gap at the returned model
  std::size_t iterations = 0;
  bool converged = false;  // fw_gap <= gap_tol before the iteration cap

  /// sqrt(max(0, distance^2 - fw_gap)) <= true distance to the LHS set.
  double distance_lower_bound() const;
};

/// Throws CapacityError when o^m exceeds the strategy cap and SolverError
/// if the objective ever increases.
NearestLhsResult nearest_lhs_model(const Assemblage& sigma, const SteeringOptions& options = {});

/// F(a,x) = rho_{a|x} - reconstruction_{a|x}, scaled to unit maximal
/// operator norm, with the bound computed by exhaustive strategy sweep.
/// Throws DomainError when the model already reproduces the assemblage.
SteeringWitness witness_from_gradient(const Assemblage& sigma, const LhsModel& model,
                                      std::size_t cap = kStrategyCap);

enum class SteeringTag { Unsteerable, Steerable };

struct SteeringVerdict {
  SteeringTag tag = SteeringTag::Unsteerable;
  std::optional<LhsModel> model;
  std::optional<SteeringWitness> witness;
  double distance = 0.0;
  double distance_lower_bound = 0.0;
  double fw_gap = 0.0;
  std::size_t iterations = 0;
};

/// Unsteerable when the nearest model lies within dist_tol (model attached
/// and re-verified); Steerable when the certified lower bound on the
/// distance exceeds dist_tol (witness attached and re-verified). Otherwise
/// throws IndeterminateError.
SteeringVerdict decide_unsteerable(const Assemblage& sigma, const SteeringOptions& options = {});

/// Conditional directions of Alice's measurements P and Q, each a rank-one
/// c_i |e_i><e_i| resp. d_i |f_i><f_i| on Bob's side. Columns of e and f are
/// unit vectors; they need not be orthogonal.
struct DisjointCriterionCertificate {
  ComplexMatrix e;
  ComplexMatrix f;
  std::vector<double> c;
  std::vector<double> d;
  Povm p;
  Povm q;
};

/// Returns a certificate when every conditional state of P and of Q is
/// numerically rank one with weight above tol and the two families of
/// directions share no ray. nullopt is not a claim of unsteerability.
std::optional<DisjointCriterionCertificate> criterion_disjoint_bases(const DensityMatrix& rho,
                                                                     const Povm& p, const Povm& q,
                                                                     double tol = kCriterionTol);

struct SteeringMeasurementPair {
  Povm p;                  // {U|i><i|U^dagger}
  Povm q;                  // {U F|j><j|F^dagger U^dagger}
  ComplexMatrix rotation;  // U, columns are Alice's Schmidt vectors completed to a basis
  std::vector<double> schmidt_coefficients;
};

/// Projective pair on Alice's side that steers an entangled pure state of
/// C^n (x) C^n. Throws NotEntangledError at Schmidt rank 1, DomainError for a
/// mixed input and DimensionError when the dimension is not a square.
SteeringMeasurementPair steering_measurements_for_pure(const DensityMatrix& psi,
                                                       double rank_tol = kRankTol);

}  // namespace lhvlab
