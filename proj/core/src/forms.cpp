#include "jetphase/forms.hpp"

#include <algorithm>
#include <cmath>

#include "jetphase/errors.hpp"

namespace jetphase {

double pfaffian(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::InvalidArgument, "pfaffian needs a square matrix");
  if (n % 2 == 1) return 0.0;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index piv;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&piv);
    piv += k + 1;
    if (piv != k + 1) {
      a.row(k + 1).swap(a.row(piv));
      a.col(k + 1).swap(a.col(piv));
      pf = -pf;
    }
    const double akk1 = a(k, k + 1);
    if (akk1 == 0.0) return 0.0;
    pf *= akk1;
    if (k + 2 < n) {
      const Eigen::VectorXd tau = a.row(k).tail(n - k - 2) / akk1;
      const Eigen::VectorXd col = a.col(k + 1).tail(n - k - 2);
      // Rank-2 update keeps the trailing block antisymmetric.
      a.bottomRightCorner(n - k - 2, n - k - 2) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

double top_form_coefficient(const Vec7& w, const Mat7& omega) {
  // (w∧Ω³)(∂_1..∂_7) = 3! · Pf([[0, w], [−wᵀ, Ω]]).
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  m.block(0, 1, 1, 7) = w.transpose();
  m.block(1, 0, 7, 1) = -w;
  m.block(1, 1, 7, 7) = omega;
  return 6.0 * pfaffian(m);
}

namespace {

// Nine-point (eighth-order) central derivative along coordinate a.
template <class F>
auto central(const F& f, const Vec7& p, int a, double h) {
  auto at = [&](double k) {
    Vec7 q = p;
    q[a] += k * h;
    return f(q);
  };
  return (672.0 * (at(1) - at(-1)) - 168.0 * (at(2) - at(-2)) + 32.0 * (at(3) - at(-3)) -
          3.0 * (at(4) - at(-4))) /
         (840.0 * h);
}

}  // namespace

Vec7 fd_gradient(const PhaseScalarField& f, const Vec7& p, const Vec7& h) {
  Vec7 g;
  for (int a = 0; a < 7; ++a) g[a] = central(f, p, a, h[a]);
  return g;
}

Mat7 fd_jacobian(const PhaseVectorField& f, const Vec7& p, const Vec7& h) {
  Mat7 j;
  for (int b = 0; b < 7; ++b) j.col(b) = central(f, p, b, h[b]);
  return j;
}

Mat7 exterior_derivative(const PhaseOneForm& theta, const Vec7& p, const Vec7& h) {
  // jac(b, a) = ∂_a θ_b
  const Mat7 jac = fd_jacobian(theta, p, h);
  return jac.transpose() - jac;
}

double closure_residual(const PhaseTwoForm& omega, const Vec7& p, const Vec7& h) {
  std::array<Mat7, 7> d;
  for (int a = 0; a < 7; ++a) d[a] = central(omega, p, a, h[a]);
  double r = 0.0;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b)
      for (int c = b + 1; c < 7; ++c)
        r = std::max(r, std::abs(d[a](b, c) + d[b](c, a) + d[c](a, b)));
  return r;
}

Vec7 commutator(const PhaseVectorField& y1, const PhaseVectorField& y2, const Vec7& p,
                const Vec7& h) {
  return fd_jacobian(y2, p, h) * y1(p) - fd_jacobian(y1, p, h) * y2(p);
}

Vec7 flow(const PhaseVectorField& y, const Vec7& p, double t, int substeps) {
  const double dt = t / substeps;
  Vec7 s = p;
  for (int k = 0; k < substeps; ++k) {
    const Vec7 k1 = y(s);
    const Vec7 k2 = y(s + 0.5 * dt * k1);
    const Vec7 k3 = y(s + 0.5 * dt * k2);
    const Vec7 k4 = y(s + dt * k3);
    s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

namespace {

Mat7 flow_jacobian(const PhaseVectorField& y, const Vec7& p, double t, const FlowOptions& o) {
  return fd_jacobian([&](const Vec7& q) { return flow(y, q, t, o.substeps); }, p, o.h);
}

}  // namespace

Vec7 lie_flow_one_form(const PhaseVectorField& y, const PhaseOneForm& alpha, const Vec7& p,
                         const FlowOptions& o) {
  auto pulled = [&](double t) -> Vec7 {
    const Mat7 j = flow_jacobian(y, p, t, o);
    return j.transpose() * alpha(flow(y, p, t, o.substeps));
  };
  return (8.0 * (pulled(o.eps) - pulled(-o.eps)) - (pulled(2 * o.eps) - pulled(-2 * o.eps))) / (12.0 * o.eps);
}

Mat7 lie_flow_two_form(const PhaseVectorField& y, const PhaseTwoForm& omega, const Vec7& p,
                         const FlowOptions& o) {
  auto pulled = [&](double t) -> Mat7 {
    const Mat7 j = flow_jacobian(y, p, t, o);
    return j.transpose() * omega(flow(y, p, t, o.substeps)) * j;
  };
  return (8.0 * (pulled(o.eps) - pulled(-o.eps)) - (pulled(2 * o.eps) - pulled(-2 * o.eps))) / (12.0 * o.eps);
}

Mat7 lie_flow_bivector(const PhaseVectorField& y, const PhaseTwoForm& lambda,
                                  const Vec7& p, const FlowOptions& o) {
  auto pushed = [&](double t) -> Mat7 {
    const Mat7 jinv = flow_jacobian(y, p, t, o).inverse();
    return jinv * lambda(flow(y, p, t, o.substeps)) * jinv.transpose();
  };
  return (8.0 * (pushed(o.eps) - pushed(-o.eps)) - (pushed(2 * o.eps) - pushed(-2 * o.eps))) / (12.0 * o.eps);
}

}  // namespace jetphase
