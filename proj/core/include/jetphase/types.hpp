#pragma once

#include <array>

#include <Eigen/Dense>

namespace jetphase {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat43 = Eigen::Matrix<double, 4, 3>;

// Rank-3 array over spacetime indices. t[a](b, c); the meaning of each slot is
// documented at every producer.
using Tensor3 = std::array<Mat4, 4>;

inline Tensor3 zero_tensor3() {
  Tensor3 t;
  for (auto& m : t) m.setZero();
  return t;
}

// Phase-space basis ordering: (d0, d1, d2, d3, d0_1, d0_2, d0_3).
inline constexpr int kSpacetimeDim = 4;
inline constexpr int kPhaseDim = 7;
inline constexpr int velocity_slot(int i) { return 3 + i; }  // i = 1..3

}  // namespace jetphase
