#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "jetphase/momentum.hpp"

namespace jetphase {

struct CatalogModel {
  std::string name;
  std::string chart;
  SpacetimeModel model;
  SymmetryAlgebra killing;
  Observer observer;
  // Raw coordinates (x, v) of a random timelike phase point inside the probe
  // region of the chart. Independent of this object's address.
  std::function<Vec7(std::mt19937_64&)> sampler;

  std::vector<PhasePoint> sample_points(std::size_t n, std::uint64_t seed) const;
  std::vector<Vec4> sample_events(std::size_t n, std::uint64_t seed) const;
  const SpecialPhaseFunction* find_symmetry(const std::string& name) const;
};

CatalogModel minkowski(const Constants& constants);

// Outer root of 1 − k_s/r + k_q²/r², or 0 when there is none.
double outer_horizon(double k_s, double k_q);

CatalogModel reissner_nordstrom(const Constants& constants, double k_s, double k_q, double q0,
                                bool with_potential = true);

// X^λ = c(λ, 0) + Σ_μ c(λ, 1 + μ) x^μ
SpacetimeVectorField affine_field(std::string name, const Eigen::Matrix<double, 4, 5>& coeffs);

}  // namespace jetphase
