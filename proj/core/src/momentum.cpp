#include "jetphase/momentum.hpp"

#include <algorithm>
#include <cmath>

namespace jetphase {

AffineMap AffineMap::inverse() const {
  AffineMap inv;
  Eigen::FullPivLU<Mat4> lu(linear);
  if (!lu.isInvertible()) throw Error(ErrorKind::InvalidArgument, "affine map is not invertible");
  inv.linear = lu.inverse();
  inv.shift = -inv.linear * shift;
  return inv;
}

std::vector<std::string> SymmetryAlgebra::names() const {
  std::vector<std::string> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(b.name);
  return out;
}

namespace {

// Columns are basis fields stacked over probes.
Eigen::MatrixXd stacked_basis(const std::vector<SpecialPhaseFunction>& basis,
                              const std::vector<Vec4>& probes) {
  Eigen::MatrixXd m(4 * probes.size(), basis.size());
  for (std::size_t l = 0; l < basis.size(); ++l)
    for (std::size_t k = 0; k < probes.size(); ++k)
      m.block<4, 1>(4 * k, l) = basis[l].field(probes[k]);
  return m;
}

struct LstsqResult {
  Eigen::VectorXd coeffs;
  double residual;
};

LstsqResult lstsq(const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>& cod,
                  const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
  LstsqResult r;
  r.coeffs = cod.solve(rhs);
  r.residual = rhs.size() ? (a * r.coeffs - rhs).cwiseAbs().maxCoeff() : 0.0;
  return r;
}

}  // namespace

SymmetryAlgebra SymmetryAlgebra::from_basis(std::vector<SpecialPhaseFunction> basis,
                                            std::vector<Vec4> probes,
                                            std::vector<AffineMap> group_elements) {
  SymmetryAlgebra alg;
  alg.basis = std::move(basis);
  alg.probes = std::move(probes);
  alg.group_elements = std::move(group_elements);
  const std::size_t n = alg.basis.size();
  alg.structure_constants.assign(n, Eigen::MatrixXd::Zero(n, n));
  if (n == 0 || alg.probes.empty()) return alg;
  const Eigen::MatrixXd b = stacked_basis(alg.basis, alg.probes);
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(b);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Eigen::VectorXd rhs(4 * alg.probes.size());
      for (std::size_t k = 0; k < alg.probes.size(); ++k) {
        const Vec4& x = alg.probes[k];
        const auto& X = alg.basis[i].field;
        const auto& Y = alg.basis[j].field;
        rhs.segment<4>(4 * k) = Y.jacobian_at(x).transpose() * X(x) - X.jacobian_at(x).transpose() * Y(x);
      }
      const LstsqResult fit = lstsq(cod, b, rhs);
      alg.structure_fit_residual = std::max(alg.structure_fit_residual, fit.residual);
      for (std::size_t k = 0; k < n; ++k) {
        alg.structure_constants[k](i, j) = fit.coeffs[k];
        alg.structure_constants[k](j, i) = -fit.coeffs[k];
      }
    }
  }
  return alg;
}

AlgebraCheck validate_algebra(const SpacetimeModel& model, const SymmetryAlgebra& algebra) {
  AlgebraCheck out;
  out.structure = algebra.structure_fit_residual;
  for (const auto& b : algebra.basis) {
    for (const auto& x : algebra.probes) {
      out.killing = std::max(out.killing, lie_metric(model, b.field, x).cwiseAbs().maxCoeff());
      out.lie_em = std::max(out.lie_em, lie_em(model, b.field, x).cwiseAbs().maxCoeff());
      out.em_symmetry = std::max(out.em_symmetry, em_symmetry_residual(model, b, x));
    }
  }
  return out;
}

Eigen::VectorXd momentum_map(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                             const PhasePoint& p) {
  const Vec4 th = potential_theta(model, p).head<4>();
  Eigen::VectorXd j(algebra.size());
  for (std::size_t k = 0; k < algebra.size(); ++k) j[k] = th.dot(algebra.basis[k].field(p.x()));
  return j;
}

Vec7 momentum_gradient(const SpacetimeModel& model, const SpecialPhaseFunction& xi,
                       const PhasePoint& p) {
  SpecialPhaseFunction metric_part{xi.name, xi.field, SpacetimeScalar::constant(0.0)};
  Vec7 dj = -special_gradient(model, metric_part, p);
  if (model.em) {
    const Vec4& x = p.x();
    const Vec4 a = model.em->potential_at(x);
    dj.head<4>() += model.em->potential_jacobian_at(x) * xi.field(x) + xi.field.jacobian_at(x) * a;
  }
  return dj;
}

double momentum_symplectic_residual(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                                    const PhasePoint& p) {
  const Mat7 om = omega(model, p);
  double r = 0.0;
  for (const auto& b : algebra.basis) {
    const Vec7 y = holonomic_lift(model, b.field, p);
    const Vec7 res = om.transpose() * y + momentum_gradient(model, b, p);
    r = std::max(r, res.cwiseAbs().maxCoeff());
  }
  return r;
}

PhasePoint prolong_action(const SpacetimeModel& model, const AffineMap& g, const PhasePoint& p) {
  const Mat4& a = g.linear;
  const double den = a(0, 0) + a.block<1, 3>(0, 1).dot(p.v());
  if (!(std::abs(den) >= 1e-14)) throw Error(ErrorKind::DegenerateDenominator, "jet denominator vanishes");
  const Vec3 num = a.block<3, 1>(1, 0) + a.block<3, 3>(1, 1) * p.v();
  return PhasePoint::make(model, g.apply(p.x()), num / den);
}

AdjointFit adjoint_matrix(const SymmetryAlgebra& algebra, const AffineMap& g) {
  const std::size_t n = algebra.size();
  AdjointFit out;
  out.matrix = Eigen::MatrixXd::Zero(n, n);
  if (n == 0 || algebra.probes.empty()) return out;
  const Eigen::MatrixXd b = stacked_basis(algebra.basis, algebra.probes);
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(b);
  const Mat4 a_inv = g.inverse().linear;
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXd rhs(4 * algebra.probes.size());
    for (std::size_t m = 0; m < algebra.probes.size(); ++m)
      rhs.segment<4>(4 * m) = a_inv * algebra.basis[k].field(g.apply(algebra.probes[m]));
    const LstsqResult fit = lstsq(cod, b, rhs);
    out.matrix.row(k) = fit.coeffs.transpose();
    out.residual = std::max(out.residual, fit.residual);
  }
  return out;
}

double equivariance_residual(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                             const AffineMap& g, const PhasePoint& p) {
  const AdjointFit ad = adjoint_matrix(algebra, g);
  const Eigen::VectorXd lhs = momentum_map(model, algebra, prolong_action(model, g, p));
  const Eigen::VectorXd rhs = ad.matrix * momentum_map(model, algebra, p);
  return lhs.size() ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
}

Eigen::VectorXd charge_drift(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                             const Trajectory& traj) {
  Eigen::VectorXd drift = Eigen::VectorXd::Zero(algebra.size());
  if (traj.samples.size() < 2) return drift;
  const Eigen::VectorXd j0 = momentum_map(model, algebra, traj.point(model, 0));
  const Eigen::VectorXd scale = j0.cwiseAbs().cwiseMax(1.0);
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const Eigen::VectorXd jk = momentum_map(model, algebra, traj.point(model, k));
    drift = drift.cwiseMax((jk - j0).cwiseAbs().cwiseQuotient(scale));
  }
  return drift;
}

}  // namespace jetphase
