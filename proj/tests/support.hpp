#pragma once

#include <cstdint>

#include "jetphase/catalog.hpp"

namespace testing_support {

using namespace jetphase;

// Non-trivial constants so that every m, q, c, ħ factor is exercised.
inline Constants odd_constants() { return Constants{1.3, 0.7, 1.7, 0.9}; }
inline Constants natural_constants() { return Constants{1.0, 1.0, 1.0, 1.0}; }

inline CatalogModel rn_default(const Constants& k = odd_constants()) {
  return reissner_nordstrom(k, 1.0, 0.4, 0.3);
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline constexpr std::uint64_t kSeed = 20240611ULL;

// Flat spacetime with a uniform electric field F̂_{01} = e_hat, potential
// Â = (−e_hat x¹, 0, 0, 0). Not part of the catalog.
inline SpacetimeModel flat_with_uniform_field(const Constants& k, double e_hat,
                                              bool with_potential = true) {
  SpacetimeModel m = minkowski(k).model;
  m.name = "flat_uniform_field";
  EMField em;
  em.field = [e_hat](const Vec4&) {
    Mat4 f = Mat4::Zero();
    f(0, 1) = e_hat;
    f(1, 0) = -e_hat;
    return f;
  };
  em.field_derivatives = [](const Vec4&) { return zero_tensor3(); };
  if (with_potential) {
    em.potential = [e_hat](const Vec4& x) { return Vec4(-e_hat * x[1], 0, 0, 0); };
    em.potential_jacobian = [e_hat](const Vec4&) {
      Mat4 j = Mat4::Zero();
      j(1, 0) = -e_hat;
      return j;
    };
  }
  m.em = em;
  return m;
}

}  // namespace testing_support
