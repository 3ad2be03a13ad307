#include "lhvlab/bell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lhvlab/errors.hpp"
#include "lhvlab/strategies.hpp"

namespace lhvlab {

namespace {

struct VertexSpaces {
  StrategySpace alice;
  StrategySpace bob;
};

VertexSpaces vertex_spaces(std::size_t ma, std::size_t oa, std::size_t mb, std::size_t ob,
                           std::size_t cap) {
  const std::size_t na = strategy_count(ma, oa, cap);
  const std::size_t nb = strategy_count(mb, ob, cap);
  if (na > cap || nb > cap || na * nb > cap) {
    const std::size_t required = (na > cap || nb > cap) ? cap + 1 : na * nb;
    throw CapacityError("local_vertices: " + std::to_string(na) + " x " + std::to_string(nb) +
                            " vertices exceed the cap of " + std::to_string(cap),
                        required, cap);
  }
  return {enumerate_strategies(ma, oa, cap), enumerate_strategies(mb, ob, cap)};
}

}  // namespace

std::vector<std::vector<double>> local_vertices(std::size_t settings_a, std::size_t outcomes_a,
                                                std::size_t settings_b, std::size_t outcomes_b,
                                                std::size_t cap) {
  const auto spaces = vertex_spaces(settings_a, outcomes_a, settings_b, outcomes_b, cap);
  const std::size_t na = spaces.alice.size(), nb = spaces.bob.size();
  const std::size_t len = outcomes_a * outcomes_b * settings_a * settings_b;
  std::vector<std::vector<double>> out;
  out.reserve(na * nb);
  for (std::size_t k = 0; k < na; ++k)
    for (std::size_t j = 0; j < nb; ++j) {
      std::vector<double> v(len, 0.0);
      for (std::size_t x = 0; x < settings_a; ++x)
        for (std::size_t y = 0; y < settings_b; ++y) {
          const std::size_t a = spaces.alice.outcome(k, x);
          const std::size_t b = spaces.bob.outcome(j, y);
          v[((x * settings_b + y) * outcomes_a + a) * outcomes_b + b] = 1.0;
        }
      out.push_back(std::move(v));
    }
  return out;
}

double local_bound(std::span<const double> coefficients, std::size_t outcomes_a,
                   std::size_t outcomes_b, std::size_t settings_a, std::size_t settings_b,
                   std::size_t cap) {
  if (coefficients.size() != outcomes_a * outcomes_b * settings_a * settings_b) {
    throw DimensionError("local_bound: coefficient count does not match the scenario");
  }
  const auto spaces = vertex_spaces(settings_a, outcomes_a, settings_b, outcomes_b, cap);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < spaces.alice.size(); ++k)
    for (std::size_t j = 0; j < spaces.bob.size(); ++j) {
      double s = 0.0;
      for (std::size_t x = 0; x < settings_a; ++x)
        for (std::size_t y = 0; y < settings_b; ++y) {
          const std::size_t a = spaces.alice.outcome(k, x);
          const std::size_t b = spaces.bob.outcome(j, y);
          s += coefficients[((x * settings_b + y) * outcomes_a + a) * outcomes_b + b];
        }
      best = std::min(best, s);
    }
  return best;
}

double evaluate_witness(const BellWitness& w, const CorrelationTensor& p) {
  if (w.outcomes_a != p.outcomes_a() || w.outcomes_b != p.outcomes_b() ||
      w.settings_a != p.settings_a() || w.settings_b != p.settings_b() ||
      w.coefficients.size() != p.size()) {
    throw DimensionError("evaluate_witness: witness and tensor shapes differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += w.coefficients[i] * p.values()[i];
  return s;
}

BellWitness make_bell_witness(std::vector<double> coefficients, const CorrelationTensor& target) {
  BellWitness w;
  w.outcomes_a = target.outcomes_a();
  w.outcomes_b = target.outcomes_b();
  w.settings_a = target.settings_a();
  w.settings_b = target.settings_b();
  w.coefficients = std::move(coefficients);
  w.local_bound = local_bound(w.coefficients, w.outcomes_a, w.outcomes_b, w.settings_a,
                              w.settings_b);
  w.value_on_target = evaluate_witness(w, target);
  return w;
}

std::vector<double> reconstruct_correlations(const BellLocalModel& model, std::size_t outcomes_a,
                                             std::size_t outcomes_b, std::size_t settings_a,
                                             std::size_t settings_b) {
  const auto sa = enumerate_strategies(settings_a, outcomes_a);
  const auto sb = enumerate_strategies(settings_b, outcomes_b);
  if (sa.size() != model.strategies_a || sb.size() != model.strategies_b ||
      model.weights.size() != sa.size() * sb.size()) {
    throw DimensionError("reconstruct_correlations: model does not match the scenario");
  }
  std::vector<double> p(outcomes_a * outcomes_b * settings_a * settings_b, 0.0);
  for (std::size_t k = 0; k < sa.size(); ++k)
    for (std::size_t j = 0; j < sb.size(); ++j) {
      const double q = model.weight(k, j);
      if (q == 0.0) continue;
      for (std::size_t x = 0; x < settings_a; ++x)
        for (std::size_t y = 0; y < settings_b; ++y)
          p[((x * settings_b + y) * outcomes_a + sa.outcome(k, x)) * outcomes_b +
            sb.outcome(j, y)] += q;
    }
  return p;
}

BellVerdict decide_bell_local(const CorrelationTensor& p, const BellOptions& options) {
  const std::size_t oa = p.outcomes_a(), ob = p.outcomes_b();
  const std::size_t ma = p.settings_a(), mb = p.settings_b();
  const auto vertices = local_vertices(ma, oa, mb, ob, options.vertex_cap);

  RealMatrix v(p.size(), vertices.size());
  for (std::size_t c = 0; c < vertices.size(); ++c)
    for (std::size_t r = 0; r < p.size(); ++r) v(r, c) = vertices[c][r];

  const PhaseOneResult lp = phase_one(v, p.values(), options.simplex);

  BellVerdict verdict;
  if (!lp.inconsistent_rows && lp.infeasibility <= options.feas_tol) {
    BellLocalModel model;
    model.strategies_a = strategy_count(ma, oa, options.vertex_cap);
    model.strategies_b = strategy_count(mb, ob, options.vertex_cap);
    model.weights = lp.x;
    const double total = std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
      for (auto& q : model.weights) q /= total;
    }
    const auto recon = reconstruct_correlations(model, oa, ob, ma, mb);
    double residual = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      residual = std::max(residual, std::abs(recon[i] - p.values()[i]));
    if (residual > options.feas_tol) {
      throw SolverError("decide_bell_local: local model reconstructs only within " +
                        std::to_string(residual));
    }
    verdict.tag = BellTag::Local;
    verdict.model = std::move(model);
    verdict.residual = residual;
    return verdict;
  }

  // Farkas: y^T V <= 0 and y^T p > 0, so L = -y is >= 0 on every vertex.
  std::vector<double> coeffs(p.size());
  double ymax = 0.0;
  for (double y : lp.farkas) ymax = std::max(ymax, std::abs(y));
  if (ymax == 0.0) throw SolverError("decide_bell_local: empty infeasibility certificate");
  for (std::size_t i = 0; i < p.size(); ++i) coeffs[i] = -lp.farkas[i] / ymax;

  BellWitness witness = make_bell_witness(std::move(coeffs), p);
  if (!(witness.margin() >= options.feas_tol)) {
    throw SolverError("decide_bell_local: witness separates by only " +
                      std::to_string(witness.margin()) + " (LP infeasibility " +
                      std::to_string(lp.infeasibility) + ")");
  }
  verdict.tag = BellTag::Nonlocal;
  verdict.witness = std::move(witness);
  verdict.residual = lp.infeasibility;
  return verdict;
}

}  // namespace lhvlab
