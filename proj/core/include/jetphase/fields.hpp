#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jetphase/errors.hpp"
#include "jetphase/types.hpp"

namespace jetphase {

struct Constants {
  double m = 1.0;
  double q = 0.0;
  double c = 1.0;
  double hbar = 1.0;

  void validate() const;

  double m_over_hbar() const { return m / hbar; }
  double hbar_over_m() const { return hbar / m; }
  double mc_over_hbar() const { return m * c / hbar; }
  double mc2_over_hbar() const { return m * c * c / hbar; }
};

// Default central-difference step for a point x.
double fd_step(const Vec4& x, double base = 1e-5);

// Metric components g_{λμ}. Derivatives are laid out d[ρ](λ, μ) = ∂_ρ g_{λμ}.
struct MetricField {
  std::function<Mat4(const Vec4&)> components;
  std::function<Tensor3(const Vec4&)> derivatives;  // optional analytic path

  Mat4 at(const Vec4& x) const { return components(x); }
  Tensor3 derivative_at(const Vec4& x) const;
  Tensor3 fd_derivative(const Vec4& x, double h) const;
  bool has_analytic_derivatives() const { return static_cast<bool>(derivatives); }
};

// Electromagnetic field stored already scaled by q/ħ: F̂ and Â.
// The potential convention is F̂_{λμ} = ∂_λÂ_μ − ∂_μÂ_λ.
struct EMField {
  std::function<Mat4(const Vec4&)> field;
  std::function<Tensor3(const Vec4&)> field_derivatives;  // d[ρ](λ, μ) = ∂_ρ F̂_{λμ}
  std::function<Vec4(const Vec4&)> potential;
  std::function<Mat4(const Vec4&)> potential_jacobian;  // J(μ, λ) = ∂_μ Â_λ

  Mat4 at(const Vec4& x) const { return field(x); }
  Tensor3 derivative_at(const Vec4& x) const;
  bool has_potential() const { return static_cast<bool>(potential); }
  Vec4 potential_at(const Vec4& x) const;
  Mat4 potential_jacobian_at(const Vec4& x) const;
};

// A chart boundary function, strictly positive inside the chart domain.
struct ChartBoundary {
  std::string name;
  std::function<double(const Vec4&)> value;
};

struct SpacetimeModel {
  std::string name;
  Constants constants;
  MetricField metric;
  std::optional<EMField> em;
  std::vector<ChartBoundary> boundaries;

  bool in_domain(const Vec4& x) const;
  void require_domain(const Vec4& x) const;
  const EMField& require_em() const;
  bool has_field() const { return em.has_value(); }
};

Mat4 metric_inverse(const SpacetimeModel& model, const Vec4& x);

// Levi-Civita symbols, layout K[μ](λ, ν) = Γ^λ_{μν}.
Tensor3 christoffel(const SpacetimeModel& model, const Vec4& x);
Tensor3 christoffel(const Mat4& g_inv, const Tensor3& dg);

// max |∂_ρF_{λμ} + ∂_λF_{μρ} + ∂_μF_{ρλ}| by central differences.
double check_closed(const EMField& em, const Vec4& x, double h);

// max |∂_λÂ_μ − ∂_μÂ_λ − F̂_{λμ}| by central differences of the potential.
double check_potential(const EMField& em, const Vec4& x, double h);

// max |∂_ρ g_{λμ} − K_ρ^σ_λ g_{σμ} − K_ρ^σ_μ g_{λσ}|.
double metric_compatibility_residual(const SpacetimeModel& model, const Vec4& x);

// True when g has one negative and three positive eigenvalues at every probe.
bool check_signature(const SpacetimeModel& model, const std::vector<Vec4>& probes);

}  // namespace jetphase
