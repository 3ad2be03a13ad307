#include "lhvlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lhvlab/errors.hpp"

namespace lhvlab {

namespace {

// tr_A[(M (x) 1) rho] without validation of the result.
ComplexMatrix conditional_state(const ComplexMatrix& rho, const ComplexMatrix& m,
                                std::size_t dim_a, std::size_t dim_b) {
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j) {
      const Complex mij = m(i, j);
      if (mij == Complex(0.0)) continue;
      for (std::size_t k = 0; k < dim_b; ++k)
        for (std::size_t l = 0; l < dim_b; ++l) out(k, l) += mij * rho(j * dim_b + k, i * dim_b + l);
    }
  return out;
}

// tr(X Y) for square matrices of equal size.
Complex trace_product(const ComplexMatrix& x, const ComplexMatrix& y) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < x.rows(); ++k)
    for (std::size_t l = 0; l < x.cols(); ++l) s += x(k, l) * y(l, k);
  return s;
}

ComplexMatrix symmetrized(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

bool is_psd(const HermitianCheckedMatrix& m, double tol) {
  if (m.dim() == 0) return true;
  return hermitian_eigen(m).values.front() >= -tol;
}

DensityMatrix::DensityMatrix(ComplexMatrix m)
    : matrix_([&] {
        if (!m.is_square()) throw DimensionError("DensityMatrix: matrix is not square");
        return HermitianCheckedMatrix(std::move(m));
      }()) {
  const double tr = matrix_.matrix().trace().real();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw NormalizationError("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  if (!is_psd(matrix_)) throw DomainError("DensityMatrix: matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  const double n = vector_norm(psi);
  if (std::abs(n - 1.0) > 1e-9) {
    throw NormalizationError("DensityMatrix::pure: |psi| = " + std::to_string(n));
  }
  return DensityMatrix(ComplexMatrix::outer(psi));
}

Povm::Povm(std::vector<HermitianCheckedMatrix> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw DomainError("Povm: no effects");
  const std::size_t d = effects_.front().dim();
  ComplexMatrix total(d, d);
  for (std::size_t a = 0; a < effects_.size(); ++a) {
    if (effects_[a].dim() != d) throw DimensionError("Povm: effects of different dimension");
    if (!is_psd(effects_[a])) {
      throw DomainError("Povm: effect " + std::to_string(a) + " is not positive semidefinite");
    }
    total += effects_[a].matrix();
  }
  const double dev = frobenius_distance(total, ComplexMatrix::identity(d));
  if (dev > 1e-9) {
    throw DomainError("Povm: effects sum to identity only within " + std::to_string(dev));
  }
}

Povm::Povm(const std::vector<ComplexMatrix>& effects)
    : Povm([&] {
        std::vector<HermitianCheckedMatrix> h;
        h.reserve(effects.size());
        for (const auto& e : effects) h.emplace_back(e);
        return h;
      }()) {}

Povm Povm::projective(const ComplexMatrix& columns) {
  std::vector<ComplexMatrix> effects;
  for (std::size_t j = 0; j < columns.cols(); ++j)
    effects.push_back(symmetrized(ComplexMatrix::outer(columns.col(j))));
  return Povm(effects);
}

MeasurementAssemblage::MeasurementAssemblage(std::vector<Povm> povms) : povms_(std::move(povms)) {
  if (povms_.empty()) throw DomainError("MeasurementAssemblage: no settings");
  const std::size_t d = povms_.front().dim();
  for (const auto& p : povms_) {
    if (p.dim() != d) throw DimensionError("MeasurementAssemblage: settings of different dimension");
    outcomes_ = std::max(outcomes_, p.outcomes());
  }
  for (auto& p : povms_) {
    if (p.outcomes() == outcomes_) continue;
    std::vector<HermitianCheckedMatrix> padded = p.effects();
    while (padded.size() < outcomes_) padded.emplace_back(ComplexMatrix(d, d));
    p = Povm(std::move(padded));
  }
}

Assemblage::Assemblage(std::vector<std::vector<ComplexMatrix>> members) {
  if (members.empty() || members.front().empty()) throw DomainError("Assemblage: empty grid");
  settings_ = members.size();
  outcomes_ = members.front().size();
  dim_ = members.front().front().rows();
  members_.reserve(settings_ * outcomes_);
  ComplexMatrix first_marginal;
  for (std::size_t x = 0; x < settings_; ++x) {
    if (members[x].size() != outcomes_) throw DimensionError("Assemblage: ragged grid");
    ComplexMatrix marginal(dim_, dim_);
    for (std::size_t a = 0; a < outcomes_; ++a) {
      const ComplexMatrix& m = members[x][a];
      if (m.rows() != dim_ || m.cols() != dim_) throw DimensionError("Assemblage: member shape");
      HermitianCheckedMatrix h(m, 1e-9);
      if (!is_psd(h)) {
        throw DomainError("Assemblage: member (" + std::to_string(a) + "|" + std::to_string(x) +
                          ") is not positive semidefinite");
      }
      marginal += m;
      members_.push_back(m);
    }
    if (x == 0) {
      first_marginal = marginal;
    } else if (frobenius_distance(marginal, first_marginal) > 1e-8) {
      throw DomainError("Assemblage: setting " + std::to_string(x) +
                        " changes Bob's reduced state (signalling)");
    }
  }
  const double tr = first_marginal.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) {
    throw NormalizationError("Assemblage: total trace " + std::to_string(tr));
  }
}

ComplexMatrix Assemblage::reduced_state() const {
  ComplexMatrix r(dim_, dim_);
  for (std::size_t a = 0; a < outcomes_; ++a) r += member(a, 0);
  return r;
}

CorrelationTensor::CorrelationTensor(std::size_t o_a, std::size_t o_b, std::size_t m_a,
                                     std::size_t m_b, std::vector<double> values)
    : o_a_(o_a), o_b_(o_b), m_a_(m_a), m_b_(m_b), values_(std::move(values)) {
  if (o_a * o_b * m_a * m_b == 0) throw DomainError("CorrelationTensor: empty shape");
  if (values_.size() != o_a * o_b * m_a * m_b) {
    throw DimensionError("CorrelationTensor: " + std::to_string(values_.size()) +
                         " values for shape");
  }
  const std::size_t block = o_a * o_b;
  for (std::size_t s = 0; s < m_a * m_b; ++s) {
    double sum = 0.0;
    for (std::size_t k = 0; k < block; ++k) {
      const double v = values_[s * block + k];
      if (!std::isfinite(v) || v < -1e-12) {
        throw DomainError("CorrelationTensor: invalid probability " + std::to_string(v));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw NormalizationError("CorrelationTensor: block sums to " + std::to_string(sum));
    }
  }
}

CorrelationTensor mix(const CorrelationTensor& p, const CorrelationTensor& q, double t) {
  if (!p.same_shape(q)) throw DimensionError("mix: shape mismatch");
  std::vector<double> v(p.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = t * p.values()[k] + (1.0 - t) * q.values()[k];
  return CorrelationTensor(p.outcomes_a(), p.outcomes_b(), p.settings_a(), p.settings_b(),
                           std::move(v));
}

Basis::Basis(ComplexMatrix columns) : columns_(std::move(columns)) {
  if (!columns_.is_square() || columns_.rows() == 0) {
    throw DimensionError("Basis: column matrix must be square and non-empty");
  }
  const double r = unitarity_residual(columns_);
  if (r > 1e-9) throw NonUnitaryError("Basis: unitarity residual " + std::to_string(r));
}

Basis Basis::computational(std::size_t n) { return Basis(ComplexMatrix::identity(n)); }

CorrelationTensor correlations_of(const DensityMatrix& rho, const MeasurementAssemblage& alice,
                                  const MeasurementAssemblage& bob) {
  const std::size_t da = alice.dim();
  const std::size_t db = bob.dim();
  if (rho.dim() != da * db) {
    throw DimensionError("correlations_of: state of dimension " + std::to_string(rho.dim()) +
                         " vs measurements " + std::to_string(da) + "x" + std::to_string(db));
  }
  const std::size_t oa = alice.outcomes(), ob = bob.outcomes();
  const std::size_t ma = alice.settings(), mb = bob.settings();
  std::vector<double> values(oa * ob * ma * mb);
  for (std::size_t x = 0; x < ma; ++x)
    for (std::size_t a = 0; a < oa; ++a) {
      const ComplexMatrix cond = conditional_state(rho.matrix(), alice.effect(a, x), da, db);
      for (std::size_t y = 0; y < mb; ++y)
        for (std::size_t b = 0; b < ob; ++b)
          values[((x * mb + y) * oa + a) * ob + b] = trace_product(bob.effect(b, y), cond).real();
    }
  return CorrelationTensor(oa, ob, ma, mb, std::move(values));
}

Assemblage assemblage_of(const DensityMatrix& rho, const MeasurementAssemblage& alice) {
  const std::size_t da = alice.dim();
  if (da == 0 || rho.dim() % da != 0) {
    throw DimensionError("assemblage_of: state of dimension " + std::to_string(rho.dim()) +
                         " does not factor through Alice's dimension " + std::to_string(da));
  }
  const std::size_t db = rho.dim() / da;
  std::vector<std::vector<ComplexMatrix>> members(alice.settings());
  for (std::size_t x = 0; x < alice.settings(); ++x)
    for (std::size_t a = 0; a < alice.outcomes(); ++a)
      members[x].push_back(
          symmetrized(conditional_state(rho.matrix(), alice.effect(a, x), da, db)));
  return Assemblage(std::move(members));
}

DensityMatrix swap_parties(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b) {
  if (rho.dim() != dim_a * dim_b) throw DimensionError("swap_parties: dimension mismatch");
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t k = 0; k < dim_b; ++k)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t l = 0; l < dim_b; ++l)
          out(k * dim_a + i, l * dim_a + j) = m(i * dim_b + k, j * dim_b + l);
  return DensityMatrix(std::move(out));
}

Basis fourier_basis(std::size_t n) {
  if (n == 0) throw DomainError("fourier_basis: n must be positive");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      // reduce the exponent mod n to keep the phase argument small
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) /
                           static_cast<double>(n);
      f(k, j) = std::polar(scale, phase);
    }
  return Basis(std::move(f));
}

bool is_disjoint_rays(const ComplexMatrix& e, const ComplexMatrix& f, double tol) {
  if (e.rows() != f.rows()) throw DimensionError("is_disjoint: dimension mismatch");
  for (std::size_t i = 0; i < e.cols(); ++i) {
    const ComplexVector ei = e.col(i);
    for (std::size_t j = 0; j < f.cols(); ++j) {
      if (std::abs(inner(ei, f.col(j))) >= 1.0 - tol) return false;
    }
  }
  return true;
}

bool is_disjoint(const Basis& e, const Basis& f, double tol) {
  return is_disjoint_rays(e.matrix(), f.matrix(), tol);
}

ComplexVector maximally_entangled_vector(std::size_t n) {
  if (n < 2) throw DomainError("maximally_entangled: n must be at least 2");
  ComplexVector psi(n * n);
  const double c = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) psi[i * n + i] = c;
  return psi;
}

DensityMatrix maximally_entangled(std::size_t n) {
  return DensityMatrix::pure(maximally_entangled_vector(n));
}

ComplexVector pure_vector_from_schmidt(std::span<const double> mu, const Basis& basis_a,
                                       const Basis& basis_b) {
  if (mu.empty() || mu.size() > basis_a.dim() || mu.size() > basis_b.dim()) {
    throw DimensionError("pure_from_schmidt: rank exceeds the local dimensions");
  }
  double norm2 = 0.0;
  for (double m : mu) {
    if (!(m > 0.0)) throw DomainError("pure_from_schmidt: coefficients must be positive");
    norm2 += m * m;
  }
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw NormalizationError("pure_from_schmidt: sum of squared coefficients is " +
                             std::to_string(norm2));
  }
  const std::size_t da = basis_a.dim(), db = basis_b.dim();
  ComplexVector psi(da * db);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const ComplexVector t = tensor(basis_a.vector(k), basis_b.vector(k));
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += mu[k] * t[i];
  }
  return psi;
}

DensityMatrix pure_from_schmidt(std::span<const double> mu, const Basis& basis_a,
                                const Basis& basis_b) {
  return DensityMatrix::pure(pure_vector_from_schmidt(mu, basis_a, basis_b));
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                                  const ComplexMatrix& v) {
  if (!u.is_square() || !v.is_square() || unitarity_residual(u) > 1e-9 ||
      unitarity_residual(v) > 1e-9) {
    throw NonUnitaryError("apply_local_unitary: operand is not unitary");
  }
  if (rho.dim() != u.rows() * v.rows()) throw DimensionError("apply_local_unitary: dimension mismatch");
  const ComplexMatrix w = tensor(u, v);
  return DensityMatrix(symmetrized(w * rho.matrix() * w.adjoint()));
}

MeasurementAssemblage conjugate_assemblage(const MeasurementAssemblage& ma,
                                           const ComplexMatrix& u) {
  if (!u.is_square() || unitarity_residual(u) > 1e-9) {
    throw NonUnitaryError("conjugate_assemblage: operand is not unitary");
  }
  if (u.rows() != ma.dim()) throw DimensionError("conjugate_assemblage: dimension mismatch");
  const ComplexMatrix ud = u.adjoint();
  std::vector<Povm> povms;
  for (const auto& p : ma.povms()) {
    std::vector<ComplexMatrix> effects;
    for (const auto& e : p.effects()) effects.push_back(symmetrized(u * e.matrix() * ud));
    povms.emplace_back(effects);
  }
  return MeasurementAssemblage(std::move(povms));
}

Assemblage conjugate_assemblage(const Assemblage& sigma, const ComplexMatrix& v) {
  if (!v.is_square() || unitarity_residual(v) > 1e-9) {
    throw NonUnitaryError("conjugate_assemblage: operand is not unitary");
  }
  if (v.rows() != sigma.dim()) throw DimensionError("conjugate_assemblage: dimension mismatch");
  const ComplexMatrix vd = v.adjoint();
  std::vector<std::vector<ComplexMatrix>> members(sigma.settings());
  for (std::size_t x = 0; x < sigma.settings(); ++x)
    for (std::size_t a = 0; a < sigma.outcomes(); ++a)
      members[x].push_back(symmetrized(v * sigma.member(a, x) * vd));
  return Assemblage(std::move(members));
}

MeasurementAssemblage smear_parent_povm(const Povm& parent, const ResponseTable& response) {
  if (response.empty()) throw DomainError("smear_parent_povm: no settings");
  const std::size_t lambdas = parent.outcomes();
  const std::size_t d = parent.dim();
  std::vector<Povm> povms;
  for (std::size_t x = 0; x < response.size(); ++x) {
    if (response[x].size() != lambdas) {
      throw DimensionError("smear_parent_povm: setting " + std::to_string(x) +
                           " does not cover every parent outcome");
    }
    const std::size_t o = response[x].front().size();
    std::vector<ComplexMatrix> effects(o, ComplexMatrix(d, d));
    for (std::size_t l = 0; l < lambdas; ++l) {
      const auto& column = response[x][l];
      if (column.size() != o) throw DimensionError("smear_parent_povm: ragged response");
      double sum = 0.0;
      for (double p : column) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw DomainError("smear_parent_povm: negative or non-finite response");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw DomainError("smear_parent_povm: response column sums to " + std::to_string(sum));
      }
      for (std::size_t a = 0; a < o; ++a) effects[a] += column[a] * parent.effect(l).matrix();
    }
    povms.emplace_back(effects);
  }
  return MeasurementAssemblage(std::move(povms));
}

Povm projective_measurement(const Basis& basis, bool conjugate) {
  return Povm::projective(conjugate ? basis.matrix().conjugate() : basis.matrix());
}

}  // namespace lhvlab
