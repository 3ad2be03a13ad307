#include <cmath>
#include <string>

#include "lhvlab/errors.hpp"
#include "lhvlab/steering.hpp"

namespace lhvlab {

namespace {

struct RankOneFamily {
  ComplexMatrix directions;
  std::vector<double> weights;
};

// Each conditional state of `povm` as w |v><v|, or nullopt if one of them is
// not numerically rank one with positive weight.
std::optional<RankOneFamily> rank_one_family(const DensityMatrix& rho, const Povm& povm,
                                             double tol) {
  const std::size_t db = rho.dim() / povm.dim();
  if (povm.outcomes() != db) return std::nullopt;
  const Assemblage sigma = assemblage_of(rho, MeasurementAssemblage({povm}));
  RankOneFamily out{ComplexMatrix(db, db), {}};
  for (std::size_t i = 0; i < db; ++i) {
    const auto& m = sigma.member(i, 0);
    const auto eig = hermitian_eigen(HermitianCheckedMatrix(0.5 * (m + m.adjoint())));
    const double top = eig.values.back();
    if (db >= 2 && eig.values[db - 2] > tol) return std::nullopt;
    if (!(top > tol)) return std::nullopt;
    out.directions.set_col(i, eig.vectors.col(db - 1));
    out.weights.push_back(top);
  }
  return out;
}

}  // namespace

std::optional<DisjointCriterionCertificate> criterion_disjoint_bases(const DensityMatrix& rho,
                                                                     const Povm& p, const Povm& q,
                                                                     double tol) {
  if (p.dim() != q.dim() || p.dim() == 0 || rho.dim() % p.dim() != 0) return std::nullopt;
  const auto e = rank_one_family(rho, p, tol);
  if (!e) return std::nullopt;
  const auto f = rank_one_family(rho, q, tol);
  if (!f) return std::nullopt;
  for (std::size_t i = 0; i < e->weights.size(); ++i)
    if (!(e->weights[i] * f->weights[i] > tol)) return std::nullopt;
  if (!is_disjoint_rays(e->directions, f->directions)) return std::nullopt;
  return DisjointCriterionCertificate{e->directions, f->directions, e->weights, f->weights, p, q};
}

SteeringMeasurementPair steering_measurements_for_pure(const DensityMatrix& psi, double rank_tol) {
  const std::size_t dim = psi.dim();
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim))));
  if (n * n != dim) {
    throw DimensionError("steering_measurements_for_pure: dimension " + std::to_string(dim) +
                         " is not n * n");
  }
  const auto top = max_eigenpair(psi.hermitian());
  if (top.value < 1.0 - 1e-9) {
    throw DomainError("steering_measurements_for_pure: state is not pure (largest eigenvalue " +
                      std::to_string(top.value) + ")");
  }
  const auto s = schmidt(top.vector, n, n, rank_tol);
  if (s.rank() < 2) {
    throw NotEntangledError("steering_measurements_for_pure: Schmidt rank 1 state is a product");
  }
  const ComplexMatrix u = complete_to_unitary(s.basis_a);
  const ComplexMatrix uf = u * fourier_basis(n).matrix();
  return {Povm::projective(u), Povm::projective(uf), u, s.coefficients};
}

}  // namespace lhvlab
