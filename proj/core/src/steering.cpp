#include "lhvlab/steering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "lhvlab/errors.hpp"
#include "lhvlab/thread_pool.hpp"

namespace lhvlab {

namespace {

using Blocks = std::vector<ComplexMatrix>;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double squared_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return s;
}

double real_inner(const ComplexMatrix& x, const ComplexMatrix& y) { return hs_inner(x, y).real(); }

// The fixed data of one LHS feasibility problem.
struct Problem {
  std::size_t settings;
  std::size_t outcomes;
  std::size_t dim;
  StrategySpace space;
  Blocks target;  // x * outcomes + a

  std::size_t cell(std::size_t a, std::size_t x) const { return x * outcomes + a; }

  // (A tau)_{a,x} = sum_{k : J_k(x) = a} tau_k
  Blocks apply(const Blocks& tau) const {
    Blocks out(settings * outcomes, ComplexMatrix(dim, dim));
    for (std::size_t k = 0; k < space.size(); ++k)
      for (std::size_t x = 0; x < settings; ++x) out[cell(space.outcome(k, x), x)] += tau[k];
    return out;
  }

  // (A^T E)_k = sum_x E_{J_k(x), x}
  Blocks adjoint_apply(const Blocks& e) const {
    Blocks out(space.size(), ComplexMatrix(dim, dim));
    for (std::size_t k = 0; k < space.size(); ++k)
      for (std::size_t x = 0; x < settings; ++x) out[k] += e[cell(space.outcome(k, x), x)];
    return out;
  }
};

Problem make_problem(const Assemblage& sigma, std::size_t cap) {
  Problem p{sigma.settings(), sigma.outcomes(), sigma.dim(),
            enumerate_strategies(sigma.settings(), sigma.outcomes(), cap), {}};
  p.target.reserve(p.settings * p.outcomes);
  for (std::size_t x = 0; x < p.settings; ++x)
    for (std::size_t a = 0; a < p.outcomes; ++a) p.target.push_back(sigma.member(a, x));
  return p;
}

// State of one iterate: tau, its residual E = A tau - sigma, the objective
// |E|^2 and the gradient G = 2 A^T E.
struct Iterate {
  Blocks tau;
  Blocks residual;
  Blocks gradient;
  double objective = 0.0;
};

void refresh(const Problem& p, Iterate& it) {
  it.residual = p.apply(it.tau);
  it.objective = 0.0;
  for (std::size_t c = 0; c < it.residual.size(); ++c) {
    it.residual[c] -= p.target[c];
    it.objective += squared_norm(it.residual[c]);
  }
  it.gradient = p.adjoint_apply(it.residual);
  for (auto& g : it.gradient) g = hermitian_part(2.0 * g);
}

struct LinearOracle {
  std::size_t block = 0;
  EigenPair pair;
  double gap = 0.0;
};

// min over the feasible set of <G, s>: a rank-one |v><v| on the block whose
// gradient has the smallest eigenvalue.
LinearOracle linear_oracle(const Iterate& it, ThreadPool& pool) {
  const std::size_t n = it.gradient.size();
  std::vector<EigenPair> pairs(n);
  pool.parallel_for(n, [&](std::size_t k) {
    pairs[k] = min_eigenpair(HermitianCheckedMatrix(it.gradient[k]));
  });
  LinearOracle lo;
  for (std::size_t k = 1; k < n; ++k)
    if (pairs[k].value < pairs[lo.block].value) lo.block = k;
  double current = 0.0;
  for (std::size_t k = 0; k < n; ++k) current += real_inner(it.gradient[k], it.tau[k]);
  lo.gap = current - pairs[lo.block].value;
  lo.pair = std::move(pairs[lo.block]);
  return lo;
}

// Euclidean projection onto {tau_k >= 0, sum_k tr tau_k = 1}: project the
// pooled spectrum onto the probability simplex.
Blocks project_feasible(const Blocks& z, ThreadPool& pool) {
  const std::size_t n = z.size();
  std::vector<EigenDecomposition> eig(n);
  pool.parallel_for(n, [&](std::size_t k) { eig[k] = hermitian_eigen(HermitianCheckedMatrix(z[k])); });

  std::vector<double> all;
  for (const auto& e : eig) all.insert(all.end(), e.values.begin(), e.values.end());
  std::sort(all.begin(), all.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < all.size(); ++j) {
    cumsum += all[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (all[j] - t > 0.0) theta = t;
  }

  Blocks out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t d = eig[k].values.size();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      const double w = eig[k].values[i] - theta;
      if (w <= 0.0) continue;
      const ComplexVector v = eig[k].vectors.col(i);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) += w * v[r] * std::conj(v[c]);
    }
    out[k] = hermitian_part(m);
  }
  return out;
}

}  // namespace

ComplexMatrix LhsModel::hidden_state(std::size_t k) const {
  const double w = weight(k);
  if (w <= 0.0) return ComplexMatrix(tau.at(k).rows(), tau.at(k).cols());
  return tau[k] * (1.0 / w);
}

std::vector<std::vector<ComplexMatrix>> reconstruct_assemblage(const LhsModel& model) {
  const auto space = enumerate_strategies(model.settings, model.outcomes);
  if (model.tau.size() != space.size()) {
    throw DimensionError("reconstruct_assemblage: model has " + std::to_string(model.tau.size()) +
                         " operators for " + std::to_string(space.size()) + " strategies");
  }
  const std::size_t d = model.tau.front().rows();
  std::vector<std::vector<ComplexMatrix>> grid(
      model.settings, std::vector<ComplexMatrix>(model.outcomes, ComplexMatrix(d, d)));
  for (std::size_t x = 0; x < model.settings; ++x)
    for (std::size_t a = 0; a < model.outcomes; ++a)
      for (std::size_t k = 0; k < space.size(); ++k)
        if (space.strategy(k)(x) == a) grid[x][a] += model.tau[k];
  return grid;
}

double reconstruction_distance(const LhsModel& model, const Assemblage& sigma) {
  if (model.settings != sigma.settings() || model.outcomes != sigma.outcomes()) {
    throw DimensionError("reconstruction_distance: model and assemblage scenarios differ");
  }
  const auto grid = reconstruct_assemblage(model);
  double s = 0.0;
  for (std::size_t x = 0; x < sigma.settings(); ++x)
    for (std::size_t a = 0; a < sigma.outcomes(); ++a) {
      const double dist = frobenius_distance(grid[x][a], sigma.member(a, x));
      s += dist * dist;
    }
  return std::sqrt(s);
}

double steering_functional_value(const std::vector<ComplexMatrix>& functionals,
                                 const Assemblage& sigma) {
  if (functionals.size() != sigma.settings() * sigma.outcomes()) {
    throw DimensionError("steering_functional_value: functional grid does not match");
  }
  double s = 0.0;
  for (std::size_t x = 0; x < sigma.settings(); ++x)
    for (std::size_t a = 0; a < sigma.outcomes(); ++a)
      s += hs_inner(functionals[x * sigma.outcomes() + a], sigma.member(a, x)).real();
  return s;
}

double steering_lhs_bound(const std::vector<ComplexMatrix>& functionals, std::size_t settings,
                          std::size_t outcomes, std::size_t cap) {
  if (functionals.size() != settings * outcomes) {
    throw DimensionError("steering_lhs_bound: functional grid does not match");
  }
  const auto space = enumerate_strategies(settings, outcomes, cap);
  const std::size_t d = functionals.front().rows();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < space.size(); ++k) {
    ComplexMatrix h(d, d);
    for (std::size_t x = 0; x < settings; ++x) h += functionals[x * outcomes + space.outcome(k, x)];
    best = std::max(best, max_eigenpair(HermitianCheckedMatrix(hermitian_part(h), 1e-8)).value);
  }
  return best;
}

SteeringWitness make_steering_witness(std::vector<ComplexMatrix> functionals,
                                      const Assemblage& sigma, std::size_t cap) {
  SteeringWitness w;
  w.settings = sigma.settings();
  w.outcomes = sigma.outcomes();
  w.functionals = std::move(functionals);
  w.lhs_bound = steering_lhs_bound(w.functionals, w.settings, w.outcomes, cap);
  w.value_on_target = steering_functional_value(w.functionals, sigma);
  return w;
}

double NearestLhsResult::distance_lower_bound() const {
  return std::sqrt(std::max(0.0, distance * distance - fw_gap));
}

NearestLhsResult nearest_lhs_model(const Assemblage& sigma, const SteeringOptions& options) {
  const Problem p = make_problem(sigma, options.strategy_cap);
  const std::size_t n = p.space.size();
  ThreadPool pool(options.threads);

  // Start from the uncorrelated model tau_k = prod_x P(J_k(x)|x) rho_B.
  std::vector<double> marginal(p.settings * p.outcomes);
  for (std::size_t c = 0; c < marginal.size(); ++c)
    marginal[c] = std::max(0.0, p.target[c].trace().real());
  const ComplexMatrix rho_b = hermitian_part(sigma.reduced_state());
  Iterate it;
  it.tau.resize(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double w = 1.0;
    for (std::size_t x = 0; x < p.settings; ++x) w *= marginal[p.cell(p.space.outcome(k, x), x)];
    it.tau[k] = w * rho_b;
    total += w * rho_b.trace().real();
  }
  for (auto& t : it.tau) t *= 1.0 / total;
  refresh(p, it);

  // Largest eigenvalue of A^T A is m o^(m-1) (constant row sums), so the
  // gradient is Lipschitz with constant 2 m o^(m-1).
  const double lipschitz =
      2.0 * static_cast<double>(p.settings) * static_cast<double>(n) / static_cast<double>(p.outcomes);
  const double step = 1.0 / lipschitz;

  // Monotone accelerated projected gradient with adaptive restart. The
  // accepted iterate never increases the objective; the extrapolation point
  // y carries the momentum and is reset whenever the candidate is rejected
  // or the step turns against the gradient.
  NearestLhsResult result;
  LinearOracle lo = linear_oracle(it, pool);
  std::size_t iter = 0;
  Iterate y = it;
  double momentum = 1.0;
  while (lo.gap > options.gap_tol && iter < options.max_iters) {
    ++iter;
    Blocks shifted(n);
    for (std::size_t k = 0; k < n; ++k) shifted[k] = y.tau[k] - step * y.gradient[k];
    Iterate candidate;
    candidate.tau = project_feasible(shifted, pool);
    refresh(p, candidate);

    double turn = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      turn += real_inner(y.gradient[k], candidate.tau[k] - it.tau[k]);

    const Blocks previous = it.tau;
    const double before = it.objective;
    const bool accepted = candidate.objective <= before;
    if (accepted) it = std::move(candidate);
    if (it.objective > before * (1.0 + 1e-10) + 1e-24) {
      throw SolverError("nearest_lhs_model: objective increased from " + std::to_string(before) +
                        " to " + std::to_string(it.objective));
    }

    if (!accepted || turn > 0.0) {
      momentum = 1.0;
      y = it;
    } else {
      const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      const double beta = (momentum - 1.0) / next;
      y.tau.resize(n);
      for (std::size_t k = 0; k < n; ++k) y.tau[k] = it.tau[k] + beta * (it.tau[k] - previous[k]);
      refresh(p, y);
      momentum = next;
    }
    lo = linear_oracle(it, pool);
  }

  result.model.settings = p.settings;
  result.model.outcomes = p.outcomes;
  result.model.tau = std::move(it.tau);
  result.distance = std::sqrt(it.objective);
  result.fw_gap = std::max(0.0, lo.gap);
  result.iterations = iter;
  result.converged = lo.gap <= options.gap_tol;
  return result;
}

SteeringWitness witness_from_gradient(const Assemblage& sigma, const LhsModel& model,
                                      std::size_t cap) {
  const auto grid = reconstruct_assemblage(model);
  if (grid.size() != sigma.settings() || grid.front().size() != sigma.outcomes()) {
    throw DimensionError("witness_from_gradient: model and assemblage scenarios differ");
  }
  std::vector<ComplexMatrix> f;
  double scale = 0.0;
  for (std::size_t x = 0; x < sigma.settings(); ++x)
    for (std::size_t a = 0; a < sigma.outcomes(); ++a) {
      ComplexMatrix diff = hermitian_part(sigma.member(a, x) - grid[x][a]);
      const auto e = hermitian_eigen(HermitianCheckedMatrix(diff));
      scale = std::max({scale, std::abs(e.values.front()), std::abs(e.values.back())});
      f.push_back(std::move(diff));
    }
  if (!(scale > 1e-14)) {
    throw DomainError("witness_from_gradient: the model reproduces the assemblage");
  }
  for (auto& m : f) m *= 1.0 / scale;
  return make_steering_witness(std::move(f), sigma, cap);
}

SteeringVerdict decide_unsteerable(const Assemblage& sigma, const SteeringOptions& options) {
  NearestLhsResult r = nearest_lhs_model(sigma, options);
  SteeringVerdict v;
  v.distance = r.distance;
  v.distance_lower_bound = r.distance_lower_bound();
  v.fw_gap = r.fw_gap;
  v.iterations = r.iterations;

  if (r.distance <= options.dist_tol) {
    const double check = reconstruction_distance(r.model, sigma);
    if (check > options.dist_tol) {
      throw SolverError("decide_unsteerable: LHS model re-verifies only to " +
                        std::to_string(check));
    }
    v.tag = SteeringTag::Unsteerable;
    v.model = std::move(r.model);
    return v;
  }
  if (v.distance_lower_bound > options.dist_tol) {
    SteeringWitness w = witness_from_gradient(sigma, r.model, options.strategy_cap);
    if (!(w.margin() > 0.0)) {
      throw SolverError("decide_unsteerable: witness does not separate (margin " +
                        std::to_string(w.margin()) + ")");
    }
    v.tag = SteeringTag::Steerable;
    v.witness = std::move(w);
    return v;
  }
  throw IndeterminateError("decide_unsteerable: distance " + std::to_string(r.distance) +
                               " with Frank-Wolfe gap " + std::to_string(r.fw_gap) +
                               " cannot be resolved at dist_tol; tighten gap_tol or raise max_iters",
                           r.distance, r.fw_gap);
}

}  // namespace lhvlab
