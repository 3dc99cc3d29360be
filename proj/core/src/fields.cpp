#include "jetphase/fields.hpp"

#include <algorithm>
#include <cmath>

namespace jetphase {

void Constants::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::InvalidArgument, "mass must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "c must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw Error(ErrorKind::InvalidArgument, "hbar must be positive");
  if (!std::isfinite(q)) throw Error(ErrorKind::InvalidArgument, "charge must be finite");
}

double fd_step(const Vec4& x, double base) {
  return base * std::max(1.0, x.cwiseAbs().maxCoeff());
}

namespace {

template <class F>
Tensor3 central_tensor(const F& f, const Vec4& x, double h) {
  Tensor3 d;
  for (int rho = 0; rho < 4; ++rho) {
    Vec4 xp = x, xm = x;
    xp[rho] += h;
    xm[rho] -= h;
    d[rho] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return d;
}

}  // namespace

Tensor3 MetricField::fd_derivative(const Vec4& x, double h) const {
  return central_tensor(components, x, h);
}

Tensor3 MetricField::derivative_at(const Vec4& x) const {
  if (derivatives) return derivatives(x);
  return fd_derivative(x, fd_step(x));
}

Tensor3 EMField::derivative_at(const Vec4& x) const {
  if (field_derivatives) return field_derivatives(x);
  return central_tensor(field, x, fd_step(x));
}

Vec4 EMField::potential_at(const Vec4& x) const {
  if (!potential) throw Error(ErrorKind::MissingPotential, "electromagnetic potential not supplied");
  return potential(x);
}

Mat4 EMField::potential_jacobian_at(const Vec4& x) const {
  if (!potential) throw Error(ErrorKind::MissingPotential, "electromagnetic potential not supplied");
  if (potential_jacobian) return potential_jacobian(x);
  const double h = fd_step(x);
  Mat4 j;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    j.row(mu) = ((potential(xp) - potential(xm)) / (2.0 * h)).transpose();
  }
  return j;
}

bool SpacetimeModel::in_domain(const Vec4& x) const {
  if (!x.allFinite()) return false;
  return std::all_of(boundaries.begin(), boundaries.end(),
                     [&](const ChartBoundary& b) { return b.value(x) > 0.0; });
}

void SpacetimeModel::require_domain(const Vec4& x) const {
  if (!x.allFinite()) throw Error(ErrorKind::ChartDomain, "non-finite coordinates");
  for (const auto& b : boundaries) {
    if (!(b.value(x) > 0.0)) throw Error(ErrorKind::ChartDomain, "outside chart (" + b.name + ")");
  }
}

const EMField& SpacetimeModel::require_em() const {
  if (!em) throw Error(ErrorKind::MissingEMField, "model '" + name + "' has no electromagnetic field");
  return *em;
}

Mat4 metric_inverse(const SpacetimeModel& model, const Vec4& x) {
  model.require_domain(x);
  const Mat4 g = model.metric.at(x);
  const double det = g.determinant();
  // Hadamard bound |det| ≤ Π‖row‖; diagonal metrics with very different
  // scales (r² sin²θ next to f) stay regular.
  double bound = 1.0;
  for (int i = 0; i < 4; ++i) bound *= g.row(i).norm();
  if (!std::isfinite(det) || !(std::abs(det) > 1e-14 * bound))
    throw Error(ErrorKind::SingularMetric, "metric determinant vanishes");
  return g.inverse();
}

Tensor3 christoffel(const Mat4& g_inv, const Tensor3& dg) {
  Tensor3 k;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      Vec4 lower;  // Γ_{ρ μν}
      for (int rho = 0; rho < 4; ++rho)
        lower[rho] = 0.5 * (dg[mu](rho, nu) + dg[nu](rho, mu) - dg[rho](mu, nu));
      const Vec4 upper = g_inv * lower;
      for (int lam = 0; lam < 4; ++lam) k[mu](lam, nu) = upper[lam];
    }
  }
  return k;
}

Tensor3 christoffel(const SpacetimeModel& model, const Vec4& x) {
  const Mat4 g_inv = metric_inverse(model, x);
  return christoffel(g_inv, model.metric.derivative_at(x));
}

double check_closed(const EMField& em, const Vec4& x, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  Tensor3 d;
  for (int rho = 0; rho < 4; ++rho) {
    Vec4 xp = x, xm = x;
    xp[rho] += h;
    xm[rho] -= h;
    d[rho] = (em.field(xp) - em.field(xm)) / (2.0 * h);
  }
  double r = 0.0;
  for (int rho = 0; rho < 4; ++rho)
    for (int lam = 0; lam < 4; ++lam)
      for (int mu = 0; mu < 4; ++mu)
        r = std::max(r, std::abs(d[rho](lam, mu) + d[lam](mu, rho) + d[mu](rho, lam)));
  return r;
}

double check_potential(const EMField& em, const Vec4& x, double h) {
  if (!em.potential) throw Error(ErrorKind::MissingPotential, "electromagnetic potential not supplied");
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  Mat4 j;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    j.row(mu) = ((em.potential(xp) - em.potential(xm)) / (2.0 * h)).transpose();
  }
  const Mat4 curl = j - j.transpose();
  return (curl - em.field(x)).cwiseAbs().maxCoeff();
}

double metric_compatibility_residual(const SpacetimeModel& model, const Vec4& x) {
  const Mat4 g = model.metric.at(x);
  const Tensor3 dg = model.metric.derivative_at(x);
  const Tensor3 k = christoffel(metric_inverse(model, x), dg);
  double r = 0.0;
  for (int rho = 0; rho < 4; ++rho) {
    const Mat4 kg = k[rho].transpose() * g;  // (λ, μ) -> K_ρ^σ_λ g_{σμ}
    const Mat4 res = dg[rho] - kg - kg.transpose();
    r = std::max(r, res.cwiseAbs().maxCoeff());
  }
  return r;
}

bool check_signature(const SpacetimeModel& model, const std::vector<Vec4>& probes) {
  for (const auto& x : probes) {
    const Mat4 g = model.metric.at(x);
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
      return false;
    Eigen::SelfAdjointEigenSolver<Mat4> es(g, Eigen::EigenvaluesOnly);
    const Vec4 ev = es.eigenvalues();
    int neg = 0, pos = 0;
    for (int i = 0; i < 4; ++i) {
      if (ev[i] < 0.0) ++neg;
      if (ev[i] > 0.0) ++pos;
    }
    if (neg != 1 || pos != 3) return false;
  }
  return true;
}

}  // namespace jetphase
