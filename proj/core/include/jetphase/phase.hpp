#pragma once

#include "jetphase/fields.hpp"

namespace jetphase {

inline constexpr double kTimelikeMargin = 1e-12;

// A point of the first jet space: event x and velocity v^i = dx^i/dx^0.
class PhasePoint {
 public:
  // Throws ChartDomain or NotTimelike.
  static PhasePoint make(const SpacetimeModel& model, const Vec4& x, const Vec3& v);
  static PhasePoint make(const SpacetimeModel& model, const Vec7& coords);
  // No validation; for callers that have already checked the point.
  static PhasePoint unchecked(const Vec4& x, const Vec3& v) { return PhasePoint(x, v); }

  const Vec4& x() const { return x_; }
  const Vec3& v() const { return v_; }
  Vec7 coords() const;

 private:
  PhasePoint(const Vec4& x, const Vec3& v) : x_(x), v_(v) {}
  Vec4 x_;
  Vec3 v_;
};

bool is_timelike(const SpacetimeModel& model, const Vec4& x, const Vec3& v);

// Quantities shared by every structure evaluated at one phase point.
struct Kinematics {
  Vec4 x;
  Vec3 v;
  Mat4 g;
  Mat4 g_inv;
  Tensor3 dg;      // ∂_ρ g_{λμ}
  Vec4 d0;         // δ̄^μ_0 = (1, v)
  Mat34 dbar;      // δ̄^i_λ = δ^i_λ − v^i δ^0_λ
  Vec4 g_breve;    // ğ_{0λ} = δ̄^ρ_0 g_{ρλ}
  double g_hat;    // ĝ_00 = g(d0, d0) < 0
  double alpha0;
  Vec4 tau;        // τ_λ
  Mat3 g_perp;     // g⊥_{ij}
  Mat34 G_bar;     // Ḡ^{iμ} = δ̄^i_σ (ħ/m) g^{σμ}
};

Kinematics kinematics(const SpacetimeModel& model, const PhasePoint& p);

double alpha0(const SpacetimeModel& model, const PhasePoint& p);
Vec4 tau(const SpacetimeModel& model, const PhasePoint& p);
Vec4 tau_hat(const SpacetimeModel& model, const PhasePoint& p);
Vec4 normalized_d(const SpacetimeModel& model, const PhasePoint& p);

struct AdaptedFrame {
  Vec4 D0;
  std::array<Vec4, 3> N;
  Vec4 N0;                     // covector
  std::array<Vec4, 3> omega;   // covectors ω^i
  double alpha0 = 1.0;

  // Rows: (N⁰, ω¹, ω², ω³); columns: (D₀, N₁, N₂, N₃).
  Mat4 pairing() const;
};

AdaptedFrame adapted_frame(const SpacetimeModel& model, const PhasePoint& p);

struct PerpMetrics {
  Mat3 g_perp;      // g⊥_{ij} = g_ij + c² τ_i τ_j
  Mat3 g_perp_bar;  // ḡ⊥^{ij}
  Mat3 G_perp;      // (m/ħ) g⊥_{ij}
};

PerpMetrics perp_metrics(const SpacetimeModel& model, const PhasePoint& p);

// θ = id − τ⊗𝕕 as a 4×4 matrix θ^λ_μ = δ^λ_μ − 𝕕^λ τ_μ.
Mat4 splitting_projector(const SpacetimeModel& model, const PhasePoint& p);

}  // namespace jetphase
