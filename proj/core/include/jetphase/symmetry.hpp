#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jetphase/dynamics.hpp"
#include "jetphase/forms.hpp"

namespace jetphase {

// Spacetime vector field with optional analytic derivatives.
//   jacobian(x)(μ, λ) = ∂_μ X^λ
//   hessian(x)[μ](ν, λ) = ∂_μ ∂_ν X^λ
struct SpacetimeVectorField {
  std::string name;
  std::function<Vec4(const Vec4&)> value;
  std::function<Mat4(const Vec4&)> jacobian;
  std::function<Tensor3(const Vec4&)> hessian;

  Vec4 operator()(const Vec4& x) const { return value(x); }
  Mat4 jacobian_at(const Vec4& x) const;   // MissingDerivatives if absent
  Tensor3 hessian_at(const Vec4& x) const;  // MissingDerivatives if absent

  // Fills absent derivative callbacks with central differences.
  SpacetimeVectorField with_finite_differences() const;
  static SpacetimeVectorField zero(std::string name = "0");
};

struct SpacetimeScalar {
  std::function<double(const Vec4&)> value;
  std::function<Vec4(const Vec4&)> gradient;

  double operator()(const Vec4& x) const { return value(x); }
  Vec4 gradient_at(const Vec4& x) const;  // MissingDerivatives if absent
  SpacetimeScalar with_finite_differences() const;
  static SpacetimeScalar constant(double c);
};

// The pair (X, f̆) with f = τ̂(X) + f̆.
struct SpecialPhaseFunction {
  std::string name;
  SpacetimeVectorField field;
  SpacetimeScalar f_breve;
};

Mat4 lie_metric(const SpacetimeModel& model, const SpacetimeVectorField& X, const Vec4& x);
Mat4 lie_em(const SpacetimeModel& model, const SpacetimeVectorField& X, const Vec4& x);
// (L_X K)[μ](λ, ν) for the Levi-Civita symbols of christoffel().
Tensor3 lie_connection(const SpacetimeModel& model, const SpacetimeVectorField& X, const Vec4& x);

struct KillingCheck {
  bool killing = false;
  double max_residual = 0.0;
};

KillingCheck is_killing(const SpacetimeModel& model, const SpacetimeVectorField& X,
                        const std::vector<Vec4>& probes, double tol);

// max |∂_μ f̆ − X^λ F̂_{λμ}|, zero for models without a field.
double em_symmetry_residual(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                            const Vec4& x);

Vec7 holonomic_lift(const SpacetimeModel& model, const SpacetimeVectorField& X, const PhasePoint& p);

double special_eval(const SpacetimeModel& model, const SpecialPhaseFunction& f, const PhasePoint& p);
// Analytic 7-gradient.
Vec7 special_gradient(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                      const PhasePoint& p);

// Coordinate display of X↑[f].
Vec7 special_hamiltonian_lift(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                              const PhasePoint& p);
// df♯ + τ̂(X)γ̂ from Λ and the Reeb field.
Vec7 special_hamiltonian_lift_dual(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                                   const PhasePoint& p);

// [X, Y] with analytic Jacobian when both inputs carry Hessians, otherwise
// central-difference derivative callbacks.
SpacetimeVectorField lie_bracket(const SpacetimeVectorField& X, const SpacetimeVectorField& Y);

struct BracketValue {
  Vec4 field;
  double f_breve = 0.0;
};

// Structural bracket ([X, X'], X.h̆ − X'.f̆ + F̂(X, X')).
BracketValue special_bracket_at(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                                const SpecialPhaseFunction& h, const Vec4& x);
// The same bracket as a special phase function; the model is copied.
SpecialPhaseFunction special_bracket(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                                     const SpecialPhaseFunction& h);
// Λ(df, dh) + τ̂(X)γ̂.h − τ̂(X')γ̂.f
double jacobi_bracket(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                      const SpecialPhaseFunction& h, const PhasePoint& p);

struct ConservationResidual {
  double gamma_f = 0.0;    // γ.f
  double criterion = 0.0;  // 𝕕.f̆ − (X⌟F̂)(𝕕) − ½(L_X G)(𝕕, 𝕕)
};

ConservationResidual conservation_residual(const SpacetimeModel& model,
                                           const SpecialPhaseFunction& f, const PhasePoint& p);

// ‖X₍₁₎⌟Ω − df‖∞
double self_holonomy_residual(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                              const PhasePoint& p);

// L_{X₍₁₎}Γᵍ from the closed-form display δ̄^i_σ δ̄^ρ_0 (L_X K)_λ^σ_ρ (with the
// phase-connection sign), layout (λ, i-1).
Mat43 lie_phase_connection(const SpacetimeModel& model, const SpacetimeVectorField& X,
                           const PhasePoint& p);

// Raw-coordinate adapters for finite-difference oracles.
PhaseVectorField holonomic_lift_field(const SpacetimeModel& model, const SpacetimeVectorField& X);
PhaseVectorField special_lift_field(const SpacetimeModel& model, const SpecialPhaseFunction& f);

}  // namespace jetphase
