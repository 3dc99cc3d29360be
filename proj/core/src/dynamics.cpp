#include "jetphase/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace jetphase {

namespace {

Mat43 grav_connection(const Kinematics& s, const Tensor3& chr) {
  // Γ_φ^i = −δ̄^i_σ Γ^σ_{φρ} δ̄^ρ_0 (the phase connection uses minus Levi-Civita).
  Mat43 out;
  for (int phi = 0; phi < 4; ++phi) out.row(phi) = -(s.dbar * (chr[phi] * s.d0)).transpose();
  return out;
}

Mat43 em_connection(const SpacetimeModel& model, const Kinematics& s) {
  const Mat4 F = model.require_em().at(s.x);
  const double ca = model.constants.c * s.alpha0;
  const Eigen::RowVector4d dF = s.d0.transpose() * F;
  const Mat4 b = F - s.alpha0 * s.alpha0 * s.g_breve * dF;
  return -(1.0 / (2.0 * ca)) * b * s.G_bar.transpose();
}

Mat7 antisym(const Mat7& m) { return m - m.transpose(); }

Mat7 omega_grav(const SpacetimeModel& model, const Kinematics& s, const Mat43& gamma_g) {
  Eigen::Matrix<double, 7, 3> a = Eigen::Matrix<double, 7, 3>::Zero();
  Eigen::Matrix<double, 7, 3> b = Eigen::Matrix<double, 7, 3>::Zero();
  a.topRows<4>() = -gamma_g;
  a.bottomRows<3>().setIdentity();
  b.topRows<4>() = s.dbar.transpose();
  const Mat3 G = model.constants.m_over_hbar() * s.g_perp;
  return model.constants.c * s.alpha0 * antisym(a * G * b.transpose());
}

Mat7 em_block(const SpacetimeModel& model, const Vec4& x) {
  Mat7 out = Mat7::Zero();
  if (model.em) out.topLeftCorner<4, 4>() = model.em->at(x);
  return out;
}

Mat7 lambda_em(const SpacetimeModel& model, const Kinematics& s) {
  Mat7 out = Mat7::Zero();
  if (!model.em) return out;
  const double ca = model.constants.c * s.alpha0;
  out.bottomRightCorner<3, 3>() = s.G_bar * model.em->at(s.x) * s.G_bar.transpose() / (ca * ca);
  return out;
}

}  // namespace

Mat43 phase_connection(const SpacetimeModel& model, const Kinematics& s, ConnectionPart part) {
  switch (part) {
    case ConnectionPart::gravitational:
      return grav_connection(s, christoffel(s.g_inv, s.dg));
    case ConnectionPart::electromagnetic:
      return em_connection(model, s);
    case ConnectionPart::total: {
      Mat43 out = grav_connection(s, christoffel(s.g_inv, s.dg));
      if (model.em) out += em_connection(model, s);
      return out;
    }
  }
  return Mat43::Zero();
}

Mat43 phase_connection(const SpacetimeModel& model, const PhasePoint& p, ConnectionPart part) {
  if (part == ConnectionPart::electromagnetic) model.require_em();
  return phase_connection(model, kinematics(model, p), part);
}

TwoFormParts omega_parts(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  TwoFormParts out;
  out.gravitational = omega_grav(model, s, phase_connection(model, s, ConnectionPart::gravitational));
  out.electromagnetic = em_block(model, s.x);
  out.total = out.gravitational + out.electromagnetic;
  return out;
}

Mat7 omega(const SpacetimeModel& model, const PhasePoint& p) { return omega_parts(model, p).total; }

Mat7 lambda_display(const SpacetimeModel& model, const Kinematics& s, const Mat43& gamma) {
  Eigen::Matrix<double, 7, 4> u = Eigen::Matrix<double, 7, 4>::Zero();
  u.topRows<4>().setIdentity();
  u.bottomRows<3>() = gamma.transpose();
  Eigen::Matrix<double, 7, 3> v = Eigen::Matrix<double, 7, 3>::Zero();
  v.bottomRows<3>().setIdentity();
  return antisym(u * s.G_bar.transpose() * v.transpose()) / (model.constants.c * s.alpha0);
}

TwoFormParts lambda_parts(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  TwoFormParts out;
  out.gravitational =
      lambda_display(model, s, phase_connection(model, s, ConnectionPart::gravitational));
  out.electromagnetic = lambda_em(model, s);
  out.total = out.gravitational + out.electromagnetic;
  return out;
}

Mat7 lambda(const SpacetimeModel& model, const PhasePoint& p) { return lambda_parts(model, p).total; }

namespace {

ReebField reeb_from(const SpacetimeModel& model, const Kinematics& s) {
  const Mat43 gamma = phase_connection(model, s, ConnectionPart::total);
  ReebField r;
  r.gamma << s.d0, gamma.transpose() * s.d0;
  r.gamma *= model.constants.c * s.alpha0;
  r.gamma_hat = r.gamma / (model.constants.c * model.constants.c * model.constants.m_over_hbar());
  return r;
}

}  // namespace

ReebField reeb(const SpacetimeModel& model, const PhasePoint& p) {
  return reeb_from(model, kinematics(model, p));
}

PhaseStructure phase_structure(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  PhaseStructure out;
  out.tau_hat.setZero();
  out.tau_hat.head<4>() = model.constants.mc2_over_hbar() * s.tau;
  const Mat43 gg = phase_connection(model, s, ConnectionPart::gravitational);
  out.omega = omega_grav(model, s, gg) + em_block(model, s.x);
  out.lambda = lambda_display(model, s, gg) + lambda_em(model, s);
  const ReebField r = reeb_from(model, s);
  out.gamma = r.gamma;
  out.reeb = -r.gamma_hat;
  return out;
}

double DualityResiduals::max() const { return std::max({r1, r2, r3, r4}); }

DualityResiduals duality_residuals(const PhaseStructure& s) {
  const Vec7 w = -s.tau_hat;
  const Vec7& e = s.reeb;
  DualityResiduals r;
  r.r1 = std::abs(w.dot(e) - 1.0);
  r.r2 = (e.transpose() * s.omega).cwiseAbs().maxCoeff();
  r.r3 = (w.transpose() * s.lambda).cwiseAbs().maxCoeff();
  r.r4 = (s.lambda * s.omega - (Mat7::Identity() - e * w.transpose())).cwiseAbs().maxCoeff();
  return r;
}

DualityResiduals duality_residuals(const SpacetimeModel& model, const PhasePoint& p) {
  return duality_residuals(phase_structure(model, p));
}

namespace {

Vec4 potential_or_zero(const SpacetimeModel& model, const Vec4& x) {
  if (!model.em) return Vec4::Zero();
  return model.em->potential_at(x);
}

}  // namespace

Vec7 potential_theta(const SpacetimeModel& model, const PhasePoint& p) {
  Vec7 th = Vec7::Zero();
  th.head<4>() = -tau_hat(model, p) + potential_or_zero(model, p.x());
  return th;
}

double lagrangian(const SpacetimeModel& model, const PhasePoint& p) {
  const double a0 = alpha0(model, p);
  Vec4 d0;
  d0 << 1.0, p.v();
  return -model.constants.mc_over_hbar() / a0 + potential_or_zero(model, p.x()).dot(d0);
}

Mat3 lagrangian_hessian(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  return model.constants.mc_over_hbar() * s.alpha0 * s.g_perp;
}

Observer Observer::at_rest() {
  return Observer{[](const Vec4&) { return Vec3::Zero().eval(); }};
}

double hamiltonian(const SpacetimeModel& model, const Observer& o, const PhasePoint& p) {
  const Vec7 th = potential_theta(model, p);
  Vec4 dir;
  dir << 1.0, o(p.x());
  return -th.head<4>().dot(dir);
}

double legendre_residual(const SpacetimeModel& model, const Observer& o, const PhasePoint& p) {
  if (o(p.x()).cwiseAbs().maxCoeff() != 0.0)
    throw Error(ErrorKind::ObserverNotAdapted, "chart velocity of the observer is not zero");
  const double H = hamiltonian(model, o, p);
  const double L = lagrangian(model, p);
  auto L_at = [&](const Vec7& q) { return lagrangian(model, PhasePoint::unchecked(q.head<4>(), q.tail<3>())); };
  Vec7 h = phase_fd_steps(model, p, 1e-3);
  Vec3 dL;
  for (int attempt = 0;; ++attempt) {
    try {
      for (int i = 0; i < 3; ++i) {
        const int a = 4 + i;
        auto shift = [&](double t) {
          Vec7 q = p.coords();
          q[a] += t * h[a];
          return L_at(q);
        };
        dL[i] = (672.0 * (shift(1) - shift(-1)) - 168.0 * (shift(2) - shift(-2)) +
                 32.0 * (shift(3) - shift(-3)) - 3.0 * (shift(4) - shift(-4))) /
                (840.0 * h[a]);
      }
      break;
    } catch (const Error&) {
      if (attempt > 6) throw;
      h *= 0.1;
    }
  }
  return std::abs(H - (dL.dot(p.v()) - L));
}

Vec3 el_density(const SpacetimeModel& model, const PhasePoint& p, const Vec3& accel) {
  const Kinematics s = kinematics(model, p);
  const Vec3 gamma_g =
      phase_connection(model, s, ConnectionPart::gravitational).transpose() * s.d0;
  Vec3 eta = model.constants.m_over_hbar() * model.constants.c * s.alpha0 * s.g_perp *
             (accel - gamma_g);
  if (model.em) {
    const Eigen::RowVector4d dF = s.d0.transpose() * model.em->at(s.x);
    eta += dF.tail<3>().transpose();
  }
  return eta;
}

Vec7 phase_fd_steps(const SpacetimeModel& model, const PhasePoint& p, double base) {
  const Kinematics s = kinematics(model, p);
  Vec7 h;
  for (int l = 0; l < 4; ++l) h[l] = base * std::max(1.0, std::abs(s.x[l]));
  for (int i = 0; i < 3; ++i) h[4 + i] = 3.0 * base * (-s.g_hat) / std::sqrt(std::max(std::abs(s.g(i + 1, i + 1)), 1e-300));
  return h;
}

std::function<Vec7(const Vec7&)> theta_form(const SpacetimeModel& model) {
  return [&model](const Vec7& q) { return potential_theta(model, PhasePoint::make(model, q)); };
}

std::function<Mat7(const Vec7&)> omega_form(const SpacetimeModel& model) {
  return [&model](const Vec7& q) { return omega(model, PhasePoint::make(model, q)); };
}

}  // namespace jetphase
