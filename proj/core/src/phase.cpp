#include "jetphase/phase.hpp"

#include <cmath>

namespace jetphase {

namespace {

double g_hat00(const Mat4& g, const Vec3& v) {
  Vec4 d0;
  d0 << 1.0, v;
  return d0.dot(g * d0);
}

}  // namespace

bool is_timelike(const SpacetimeModel& model, const Vec4& x, const Vec3& v) {
  if (!model.in_domain(x) || !v.allFinite()) return false;
  const double gh = g_hat00(model.metric.at(x), v);
  return std::isfinite(gh) && gh < -kTimelikeMargin;
}

PhasePoint PhasePoint::make(const SpacetimeModel& model, const Vec4& x, const Vec3& v) {
  model.require_domain(x);
  if (!v.allFinite()) throw Error(ErrorKind::NotTimelike, "non-finite velocity");
  const double gh = g_hat00(model.metric.at(x), v);
  if (!(gh < -kTimelikeMargin)) throw Error(ErrorKind::NotTimelike, "velocity is not timelike");
  return PhasePoint(x, v);
}

PhasePoint PhasePoint::make(const SpacetimeModel& model, const Vec7& coords) {
  return make(model, coords.head<4>(), coords.tail<3>());
}

Vec7 PhasePoint::coords() const {
  Vec7 c;
  c << x_, v_;
  return c;
}

Kinematics kinematics(const SpacetimeModel& model, const PhasePoint& p) {
  const Constants& k = model.constants;
  Kinematics s;
  s.x = p.x();
  s.v = p.v();
  s.g_inv = metric_inverse(model, s.x);
  s.g = model.metric.at(s.x);
  s.dg = model.metric.derivative_at(s.x);
  s.d0 << 1.0, s.v;
  s.dbar.setZero();
  for (int i = 0; i < 3; ++i) {
    s.dbar(i, 0) = -s.v[i];
    s.dbar(i, i + 1) = 1.0;
  }
  s.g_breve = s.g * s.d0;
  s.g_hat = s.d0.dot(s.g_breve);
  if (!(s.g_hat < 0.0)) throw Error(ErrorKind::NotTimelike, "g_00 hat is not negative");
  s.alpha0 = 1.0 / std::sqrt(-s.g_hat);
  s.tau = -s.alpha0 / k.c * s.g_breve;
  const Vec3 cts = k.c * s.tau.tail<3>();
  s.g_perp = s.g.bottomRightCorner<3, 3>() + cts * cts.transpose();
  s.G_bar = k.hbar_over_m() * s.dbar * s.g_inv;
  return s;
}

double alpha0(const SpacetimeModel& model, const PhasePoint& p) {
  model.require_domain(p.x());
  const double gh = g_hat00(model.metric.at(p.x()), p.v());
  if (!(gh < 0.0)) throw Error(ErrorKind::NotTimelike, "g_00 hat is not negative");
  return 1.0 / std::sqrt(-gh);
}

Vec4 tau(const SpacetimeModel& model, const PhasePoint& p) {
  Vec4 d0;
  d0 << 1.0, p.v();
  return -alpha0(model, p) / model.constants.c * (model.metric.at(p.x()) * d0);
}

Vec4 tau_hat(const SpacetimeModel& model, const PhasePoint& p) {
  return model.constants.mc2_over_hbar() * tau(model, p);
}

Vec4 normalized_d(const SpacetimeModel& model, const PhasePoint& p) {
  Vec4 d0;
  d0 << 1.0, p.v();
  return model.constants.c * alpha0(model, p) * d0;
}

Mat4 AdaptedFrame::pairing() const {
  Mat4 cov, vec;
  cov.row(0) = N0.transpose();
  for (int i = 0; i < 3; ++i) cov.row(i + 1) = omega[i].transpose();
  vec.col(0) = D0;
  for (int i = 0; i < 3; ++i) vec.col(i + 1) = N[i];
  return cov * vec;
}

AdaptedFrame adapted_frame(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  const double ca = model.constants.c * s.alpha0;
  AdaptedFrame f;
  f.alpha0 = s.alpha0;
  f.D0 = s.d0;
  f.N0 = Vec4::UnitX();
  for (int i = 0; i < 3; ++i) {
    f.N[i] = Vec4::Unit(i + 1) - ca * s.tau[i + 1] * s.d0;
    f.omega[i] = s.dbar.row(i).transpose();
    f.N0 += ca * s.tau[i + 1] * f.omega[i];
  }
  return f;
}

PerpMetrics perp_metrics(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  PerpMetrics out;
  out.g_perp = s.g_perp;
  out.g_perp_bar = s.dbar * s.g_inv * s.dbar.transpose();
  out.G_perp = model.constants.m_over_hbar() * s.g_perp;
  return out;
}

Mat4 splitting_projector(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  const Vec4 dd = model.constants.c * s.alpha0 * s.d0;
  return Mat4::Identity() - dd * s.tau.transpose();
}

}  // namespace jetphase
