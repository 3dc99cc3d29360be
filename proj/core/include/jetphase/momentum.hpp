#pragma once

#include <vector>

#include "jetphase/motion.hpp"
#include "jetphase/symmetry.hpp"

namespace jetphase {

// Affine spacetime map x ↦ A x + b.
struct AffineMap {
  Mat4 linear = Mat4::Identity();
  Vec4 shift = Vec4::Zero();

  Vec4 apply(const Vec4& x) const { return linear * x + shift; }
  AffineMap inverse() const;
  static AffineMap identity() { return {}; }
};

struct SymmetryAlgebra {
  std::vector<SpecialPhaseFunction> basis;
  // structure_constants[k](i, j) = c^k_{ij} with [X_i, X_j] = c^k_{ij} X_k.
  std::vector<Eigen::MatrixXd> structure_constants;
  double structure_fit_residual = 0.0;
  std::vector<AffineMap> group_elements;
  std::vector<Vec4> probes;  // points used for least-squares fits

  std::size_t size() const { return basis.size(); }
  std::vector<std::string> names() const;

  // Fits structure constants from commutators evaluated at the probes.
  static SymmetryAlgebra from_basis(std::vector<SpecialPhaseFunction> basis,
                                    std::vector<Vec4> probes,
                                    std::vector<AffineMap> group_elements = {});
};

struct AlgebraCheck {
  double killing = 0.0;      // max ‖L_X g‖
  double em_symmetry = 0.0;  // max ‖df̆ − X⌟F̂‖
  double lie_em = 0.0;       // max ‖L_X F̂‖
  double structure = 0.0;    // commutator fit residual
};

AlgebraCheck validate_algebra(const SpacetimeModel& model, const SymmetryAlgebra& algebra);

// J_k = Θ(X_k) = −τ̂(X_k) + Â(X_k).
Eigen::VectorXd momentum_map(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                             const PhasePoint& p);
// Analytic 7-gradient of J_k.
Vec7 momentum_gradient(const SpacetimeModel& model, const SpecialPhaseFunction& xi,
                       const PhasePoint& p);
// max_k ‖X_k(1)⌟Ω + dJ_k‖∞
double momentum_symplectic_residual(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                                    const PhasePoint& p);

PhasePoint prolong_action(const SpacetimeModel& model, const AffineMap& g, const PhasePoint& p);

struct AdjointFit {
  Eigen::MatrixXd matrix;  // (Φ⁻¹_* X_k) = Σ_l matrix(k, l) X_l
  double residual = 0.0;
};

AdjointFit adjoint_matrix(const SymmetryAlgebra& algebra, const AffineMap& g);

// ‖J(Φ_g p) − Ad-transported J(p)‖∞
double equivariance_residual(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                             const AffineMap& g, const PhasePoint& p);

// max_k |J(p_k) − J(p_0)| / max(1, |J(p_0)|) for each basis element.
Eigen::VectorXd charge_drift(const SpacetimeModel& model, const SymmetryAlgebra& algebra,
                             const Trajectory& traj);

}  // namespace jetphase
