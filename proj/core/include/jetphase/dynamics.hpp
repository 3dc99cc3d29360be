#pragma once

#include <functional>

#include "jetphase/phase.hpp"

namespace jetphase {

enum class ConnectionPart { gravitational, electromagnetic, total };

// Γ(λ, i-1) = Γ_λ^i_0, rows are spacetime indices.
Mat43 phase_connection(const SpacetimeModel& model, const PhasePoint& p, ConnectionPart part);
Mat43 phase_connection(const SpacetimeModel& model, const Kinematics& s, ConnectionPart part);

// 7×7 matrices hold evaluations M(∂_a, ∂_b) in the ordering of types.hpp.
struct TwoFormParts {
  Mat7 gravitational;
  Mat7 electromagnetic;
  Mat7 total;
};

Mat7 omega(const SpacetimeModel& model, const PhasePoint& p);
TwoFormParts omega_parts(const SpacetimeModel& model, const PhasePoint& p);

// Bivector (1/(cα⁰)) Ḡ^{jλ}(∂_λ + Γ_λ^i ∂⁰_i) ∧ ∂⁰_j for a given Γ.
Mat7 lambda_display(const SpacetimeModel& model, const Kinematics& s, const Mat43& gamma);

Mat7 lambda(const SpacetimeModel& model, const PhasePoint& p);
TwoFormParts lambda_parts(const SpacetimeModel& model, const PhasePoint& p);

struct ReebField {
  Vec7 gamma;      // cα⁰(∂₀ + vⁱ∂ᵢ + γ₀ⁱ∂⁰ᵢ)
  Vec7 gamma_hat;  // (ħ/mc²) γ
};

ReebField reeb(const SpacetimeModel& model, const PhasePoint& p);

struct PhaseStructure {
  Vec7 tau_hat;  // τ̂ with zero velocity components
  Mat7 omega;
  Mat7 lambda;
  Vec7 reeb;     // E = −γ̂
  Vec7 gamma;
};

PhaseStructure phase_structure(const SpacetimeModel& model, const PhasePoint& p);

struct DualityResiduals {
  double r1 = 0.0;  // |w(E) − 1|
  double r2 = 0.0;  // ‖E⌟Ω‖
  double r3 = 0.0;  // ‖w⌟Λ‖
  double r4 = 0.0;  // ‖ΛΩ − (I − E⊗w)‖
  double max() const;
};

DualityResiduals duality_residuals(const PhaseStructure& s);
DualityResiduals duality_residuals(const SpacetimeModel& model, const PhasePoint& p);

// Θ = −τ̂ + Â. Â is zero when the model has no field; a field without a
// potential raises MissingPotential.
Vec7 potential_theta(const SpacetimeModel& model, const PhasePoint& p);
double lagrangian(const SpacetimeModel& model, const PhasePoint& p);
// ∂²L₀/∂vⁱ∂vʲ = +(mc/ħ) α⁰ g⊥_{ij}. L₀ = −mc/(ħα⁰) is convex in v, so the
// Hessian is positive definite (not −(mc/ħ)α⁰g⊥).
Mat3 lagrangian_hessian(const SpacetimeModel& model, const PhasePoint& p);

struct Observer {
  std::function<Vec3(const Vec4&)> velocity;

  static Observer at_rest();
  Vec3 operator()(const Vec4& x) const { return velocity(x); }
};

// 𝓗[o] = −Θ(∂₀ + oⁱ∂ᵢ).
double hamiltonian(const SpacetimeModel& model, const Observer& o, const PhasePoint& p);
// |𝓗 − (∂L₀/∂vⁱ vⁱ − L₀)|; needs o(x) = 0 in the chart.
double legendre_residual(const SpacetimeModel& model, const Observer& o, const PhasePoint& p);

// η_j for a prescribed second derivative x^i_00.
Vec3 el_density(const SpacetimeModel& model, const PhasePoint& p, const Vec3& accel);

// Per-coordinate finite-difference steps at p: base·max(1, |x^λ|) for events
// and base·(−ĝ₀₀)/√g_ii for velocities, which keeps every stencil point well
// inside the light cone.
Vec7 phase_fd_steps(const SpacetimeModel& model, const PhasePoint& p, double base = 3e-4);

// Raw-coordinate adapters for finite-difference oracles.
std::function<Vec7(const Vec7&)> theta_form(const SpacetimeModel& model);
std::function<Mat7(const Vec7&)> omega_form(const SpacetimeModel& model);

}  // namespace jetphase
