#include "jetphase/symmetry.hpp"

#include <algorithm>
#include <cmath>

namespace jetphase {

namespace {

Mat4 fd_field_jacobian(const std::function<Vec4(const Vec4&)>& f, const Vec4& x) {
  const double h = fd_step(x);
  Mat4 j;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    j.row(mu) = ((f(xp) - f(xm)) / (2.0 * h)).transpose();
  }
  return j;
}

Tensor3 fd_field_hessian(const std::function<Mat4(const Vec4&)>& jac, const Vec4& x) {
  const double h = fd_step(x, 1e-4);
  Tensor3 t;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    t[mu] = (jac(xp) - jac(xm)) / (2.0 * h);
  }
  return t;
}

Vec4 fd_scalar_gradient(const std::function<double(const Vec4&)>& f, const Vec4& x) {
  const double h = fd_step(x);
  Vec4 g;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    g[mu] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Mat4 field_or_zero(const SpacetimeModel& model, const Vec4& x) {
  return model.em ? model.em->at(x) : Mat4::Zero().eval();
}

}  // namespace

Mat4 SpacetimeVectorField::jacobian_at(const Vec4& x) const {
  if (!jacobian) throw Error(ErrorKind::MissingDerivatives, "no Jacobian for field '" + name + "'");
  return jacobian(x);
}

Tensor3 SpacetimeVectorField::hessian_at(const Vec4& x) const {
  if (!hessian)
    throw Error(ErrorKind::MissingDerivatives, "no second derivatives for field '" + name + "'");
  return hessian(x);
}

SpacetimeVectorField SpacetimeVectorField::with_finite_differences() const {
  SpacetimeVectorField out = *this;
  if (!out.jacobian) {
    auto v = value;
    out.jacobian = [v](const Vec4& x) { return fd_field_jacobian(v, x); };
  }
  if (!out.hessian) {
    auto j = out.jacobian;
    out.hessian = [j](const Vec4& x) { return fd_field_hessian(j, x); };
  }
  return out;
}

SpacetimeVectorField SpacetimeVectorField::zero(std::string name) {
  SpacetimeVectorField out;
  out.name = std::move(name);
  out.value = [](const Vec4&) { return Vec4::Zero().eval(); };
  out.jacobian = [](const Vec4&) { return Mat4::Zero().eval(); };
  out.hessian = [](const Vec4&) { return zero_tensor3(); };
  return out;
}

Vec4 SpacetimeScalar::gradient_at(const Vec4& x) const {
  if (!gradient) throw Error(ErrorKind::MissingDerivatives, "no gradient for spacetime scalar");
  return gradient(x);
}

SpacetimeScalar SpacetimeScalar::with_finite_differences() const {
  SpacetimeScalar out = *this;
  if (!out.gradient) {
    auto v = value;
    out.gradient = [v](const Vec4& x) { return fd_scalar_gradient(v, x); };
  }
  return out;
}

SpacetimeScalar SpacetimeScalar::constant(double c) {
  return SpacetimeScalar{[c](const Vec4&) { return c; },
                         [](const Vec4&) { return Vec4::Zero().eval(); }};
}

Mat4 lie_metric(const SpacetimeModel& model, const SpacetimeVectorField& X, const Vec4& x) {
  model.require_domain(x);
  const Vec4 xv = X(x);
  const Mat4 j = X.jacobian_at(x);
  const Mat4 g = model.metric.at(x);
  const Tensor3 dg = model.metric.derivative_at(x);
  Mat4 out = j * g;
  out += out.transpose().eval();
  for (int rho = 0; rho < 4; ++rho) out += xv[rho] * dg[rho];
  return out;
}

Mat4 lie_em(const SpacetimeModel& model, const SpacetimeVectorField& X, const Vec4& x) {
  model.require_domain(x);
  if (!model.em) return Mat4::Zero();
  const Vec4 xv = X(x);
  const Mat4 j = X.jacobian_at(x);
  const Mat4 F = model.em->at(x);
  const Tensor3 dF = model.em->derivative_at(x);
  Mat4 out = j * F + F * j.transpose();
  for (int rho = 0; rho < 4; ++rho) out += xv[rho] * dF[rho];
  return out;
}

Tensor3 lie_connection(const SpacetimeModel& model, const SpacetimeVectorField& X, const Vec4& x) {
  const Tensor3 hx = X.hessian_at(x);
  const Mat4 j = X.jacobian_at(x);
  const Vec4 xv = X(x);
  const Tensor3 k = christoffel(model, x);
  // X^ρ ∂_ρ K by the nine-point stencil; the step shrinks if a stencil point
  // leaves the chart.
  Tensor3 dk = zero_tensor3();
  for (int rho = 0; rho < 4; ++rho) {
    if (xv[rho] == 0.0) continue;
    double h = 1e-3 * std::max(1.0, std::abs(x[rho]));
    for (int attempt = 0;; ++attempt) {
      try {
        auto at = [&](double t) {
          Vec4 y = x;
          y[rho] += t * h;
          return christoffel(model, y);
        };
        Tensor3 d = zero_tensor3();
        const double w[4] = {672.0, -168.0, 32.0, -3.0};
        for (int s = 1; s <= 4; ++s) {
          const Tensor3 kp = at(s), km = at(-s);
          for (int mu = 0; mu < 4; ++mu) d[mu] += w[s - 1] * (kp[mu] - km[mu]);
        }
        for (int mu = 0; mu < 4; ++mu) dk[mu] += xv[rho] * d[mu] / (840.0 * h);
        break;
      } catch (const Error&) {
        if (attempt > 4) throw;
        h *= 0.1;
      }
    }
  }
  Tensor3 out;
  for (int mu = 0; mu < 4; ++mu) {
    for (int lam = 0; lam < 4; ++lam) {
      for (int nu = 0; nu < 4; ++nu) {
        double v = dk[mu](lam, nu) + hx[mu](nu, lam);
        for (int rho = 0; rho < 4; ++rho) {
          v -= k[mu](rho, nu) * j(rho, lam);
          v += k[rho](lam, nu) * j(mu, rho);
          v += k[mu](lam, rho) * j(nu, rho);
        }
        out[mu](lam, nu) = v;
      }
    }
  }
  return out;
}

KillingCheck is_killing(const SpacetimeModel& model, const SpacetimeVectorField& X,
                        const std::vector<Vec4>& probes, double tol) {
  KillingCheck out;
  for (const auto& x : probes)
    out.max_residual = std::max(out.max_residual, lie_metric(model, X, x).cwiseAbs().maxCoeff());
  out.killing = !probes.empty() && out.max_residual < tol;
  return out;
}

double em_symmetry_residual(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                            const Vec4& x) {
  const Eigen::RowVector4d contraction = f.field(x).transpose() * field_or_zero(model, x);
  return (f.f_breve.gradient_at(x).transpose() - contraction).cwiseAbs().maxCoeff();
}

Vec7 holonomic_lift(const SpacetimeModel& model, const SpacetimeVectorField& X, const PhasePoint& p) {
  model.require_domain(p.x());
  const Vec4 xv = X(p.x());
  Vec4 d0;
  d0 << 1.0, p.v();
  const Vec4 s = X.jacobian_at(p.x()).transpose() * d0;
  Vec7 out;
  out << xv, s.tail<3>() - p.v() * s[0];
  return out;
}

double special_eval(const SpacetimeModel& model, const SpecialPhaseFunction& f, const PhasePoint& p) {
  const Vec4 th = tau_hat(model, p);
  return th.dot(f.field(p.x())) + f.f_breve(p.x());
}

Vec7 special_gradient(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                      const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  const Vec4 xv = f.field(s.x);
  const Mat4 j = f.field.jacobian_at(s.x);
  const double P = s.g_breve.dot(xv);
  const double a3 = 0.5 * s.alpha0 * s.alpha0 * s.alpha0;
  const double scale = -model.constants.c * model.constants.m_over_hbar();
  Vec7 df;
  const Vec4 gj = j * s.g_breve;  // (ρ) -> ∂_ρX^λ ğ_λ
  for (int rho = 0; rho < 4; ++rho) {
    const double dgh = s.d0.dot(s.dg[rho] * s.d0);
    const double dP = s.d0.dot(s.dg[rho] * xv) + gj[rho];
    df[rho] = scale * (a3 * dgh * P + s.alpha0 * dP);
  }
  const Vec4 gx = s.g * xv;
  for (int i = 0; i < 3; ++i) {
    const double dgh = 2.0 * s.g_breve[i + 1];
    df[4 + i] = scale * (a3 * dgh * P + s.alpha0 * gx[i + 1]);
  }
  df.head<4>() += f.f_breve.gradient_at(s.x);
  return df;
}

Vec7 special_hamiltonian_lift(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                              const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  const double mh = model.constants.m_over_hbar();
  const double ca = model.constants.c * s.alpha0;
  const Vec4 xv = f.field(s.x);
  const Mat4 j = f.field.jacobian_at(s.x);
  Vec4 inner = -f.f_breve.gradient_at(s.x) / ca;
  for (int rho = 0; rho < 4; ++rho) inner += xv[rho] * mh * (s.dg[rho] * s.d0);
  inner += j * (mh * s.g_breve);
  inner += (xv.transpose() * field_or_zero(model, s.x)).transpose() / ca;
  Vec7 out;
  out << xv, -s.G_bar * inner;
  return out;
}

Vec7 special_hamiltonian_lift_dual(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                                   const PhasePoint& p) {
  const PhaseStructure st = phase_structure(model, p);
  const Vec7 df = special_gradient(model, f, p);
  const double tx = st.tau_hat.head<4>().dot(f.field(p.x()));
  return st.lambda.transpose() * df - tx * st.reeb;
}

SpacetimeVectorField lie_bracket(const SpacetimeVectorField& X, const SpacetimeVectorField& Y) {
  SpacetimeVectorField out;
  out.name = "[" + X.name + "," + Y.name + "]";
  out.value = [X, Y](const Vec4& x) {
    return (Y.jacobian_at(x).transpose() * X(x) - X.jacobian_at(x).transpose() * Y(x)).eval();
  };
  if (X.hessian && Y.hessian) {
    out.jacobian = [X, Y](const Vec4& x) {
      const Mat4 jx = X.jacobian_at(x), jy = Y.jacobian_at(x);
      const Tensor3 hx = X.hessian_at(x), hy = Y.hessian_at(x);
      const Vec4 xv = X(x), yv = Y(x);
      Mat4 jac = jx * jy - jy * jx;
      for (int mu = 0; mu < 4; ++mu) jac.row(mu) += xv.transpose() * hy[mu] - yv.transpose() * hx[mu];
      return jac;
    };
  }
  return out.with_finite_differences();
}

BracketValue special_bracket_at(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                                const SpecialPhaseFunction& h, const Vec4& x) {
  model.require_domain(x);
  const Vec4 xv = f.field(x), yv = h.field(x);
  BracketValue out;
  out.field = h.field.jacobian_at(x).transpose() * xv - f.field.jacobian_at(x).transpose() * yv;
  out.f_breve = xv.dot(h.f_breve.gradient_at(x)) - yv.dot(f.f_breve.gradient_at(x)) +
                xv.dot(field_or_zero(model, x) * yv);
  return out;
}

SpecialPhaseFunction special_bracket(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                                     const SpecialPhaseFunction& h) {
  // Fail early when derivatives are missing.
  if (!f.field.jacobian || !h.field.jacobian)
    throw Error(ErrorKind::MissingDerivatives, "special bracket needs field Jacobians");
  if (!f.f_breve.gradient || !h.f_breve.gradient)
    throw Error(ErrorKind::MissingDerivatives, "special bracket needs scalar gradients");
  SpecialPhaseFunction out;
  out.name = "{" + f.name + "," + h.name + "}";
  out.field = lie_bracket(f.field, h.field);
  std::function<Mat4(const Vec4&)> F = [](const Vec4&) { return Mat4::Zero().eval(); };
  if (model.em) F = model.em->field;
  out.f_breve.value = [f, h, F](const Vec4& x) {
    const Vec4 xv = f.field(x), yv = h.field(x);
    return xv.dot(h.f_breve.gradient_at(x)) - yv.dot(f.f_breve.gradient_at(x)) + xv.dot(F(x) * yv);
  };
  out.f_breve = out.f_breve.with_finite_differences();
  return out;
}

double jacobi_bracket(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                      const SpecialPhaseFunction& h, const PhasePoint& p) {
  const PhaseStructure st = phase_structure(model, p);
  const Vec7 df = special_gradient(model, f, p);
  const Vec7 dh = special_gradient(model, h, p);
  const Vec7 gh = -st.reeb;
  const double tx = st.tau_hat.head<4>().dot(f.field(p.x()));
  const double ty = st.tau_hat.head<4>().dot(h.field(p.x()));
  return df.dot(st.lambda * dh) + tx * gh.dot(dh) - ty * gh.dot(df);
}

ConservationResidual conservation_residual(const SpacetimeModel& model,
                                           const SpecialPhaseFunction& f, const PhasePoint& p) {
  ConservationResidual out;
  out.gamma_f = reeb(model, p).gamma.dot(special_gradient(model, f, p));
  const Vec4 dd = normalized_d(model, p);
  const Vec4 xv = f.field(p.x());
  const double lg = dd.dot(lie_metric(model, f.field, p.x()) * dd);
  out.criterion = dd.dot(f.f_breve.gradient_at(p.x())) -
                  xv.dot(field_or_zero(model, p.x()) * dd) -
                  0.5 * model.constants.m_over_hbar() * lg;
  return out;
}

double self_holonomy_residual(const SpacetimeModel& model, const SpecialPhaseFunction& f,
                              const PhasePoint& p) {
  const Vec7 y = holonomic_lift(model, f.field, p);
  const Vec7 iy = omega(model, p).transpose() * y;
  return (iy - special_gradient(model, f, p)).cwiseAbs().maxCoeff();
}

Mat43 lie_phase_connection(const SpacetimeModel& model, const SpacetimeVectorField& X,
                           const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  const Tensor3 lk = lie_connection(model, X, s.x);
  Mat43 out;
  for (int lam = 0; lam < 4; ++lam) out.row(lam) = -(s.dbar * (lk[lam] * s.d0)).transpose();
  return out;
}

PhaseVectorField holonomic_lift_field(const SpacetimeModel& model, const SpacetimeVectorField& X) {
  return [&model, X](const Vec7& q) {
    return holonomic_lift(model, X, PhasePoint::make(model, q));
  };
}

PhaseVectorField special_lift_field(const SpacetimeModel& model, const SpecialPhaseFunction& f) {
  return [&model, f](const Vec7& q) {
    return special_hamiltonian_lift(model, f, PhasePoint::make(model, q));
  };
}

}  // namespace jetphase
