#include "jetphase/catalog.hpp"

#include <cmath>
#include <numbers>

namespace jetphase {

namespace {

constexpr std::uint64_t kProbeSeed = 0x5eed5eedULL;
constexpr std::size_t kProbeCount = 24;

Vec3 ball_sample(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec3 b(u(rng), u(rng), u(rng));
    if (b.squaredNorm() < 1.0) return radius * b;
  }
}

SpecialPhaseFunction metric_special(SpacetimeVectorField field) {
  SpecialPhaseFunction s;
  s.name = field.name;
  s.field = std::move(field);
  s.f_breve = SpacetimeScalar::constant(0.0);
  return s;
}

std::vector<Vec4> events_from(const std::function<Vec7(std::mt19937_64&)>& sampler, std::size_t n,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec4> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(sampler(rng).head<4>());
  return out;
}

}  // namespace

std::vector<PhasePoint> CatalogModel::sample_points(std::size_t n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(PhasePoint::make(model, sampler(rng)));
  return out;
}

std::vector<Vec4> CatalogModel::sample_events(std::size_t n, std::uint64_t seed) const {
  return events_from(sampler, n, seed);
}

const SpecialPhaseFunction* CatalogModel::find_symmetry(const std::string& name) const {
  for (const auto& b : killing.basis)
    if (b.name == name) return &b;
  return nullptr;
}

SpacetimeVectorField affine_field(std::string name, const Eigen::Matrix<double, 4, 5>& coeffs) {
  SpacetimeVectorField f;
  f.name = std::move(name);
  const Vec4 c0 = coeffs.col(0);
  const Mat4 lin = coeffs.rightCols<4>();
  f.value = [c0, lin](const Vec4& x) { return (c0 + lin * x).eval(); };
  f.jacobian = [lin](const Vec4&) { return lin.transpose().eval(); };
  f.hessian = [](const Vec4&) { return zero_tensor3(); };
  return f;
}

CatalogModel minkowski(const Constants& constants) {
  constants.validate();
  CatalogModel cm;
  cm.name = "minkowski";
  cm.chart = "Cartesian (x0, x1, x2, x3), global";
  cm.model.name = "minkowski";
  cm.model.constants = constants;
  const Mat4 eta = Vec4(-1.0, 1.0, 1.0, 1.0).asDiagonal();
  cm.model.metric.components = [eta](const Vec4&) { return eta; };
  cm.model.metric.derivatives = [](const Vec4&) { return zero_tensor3(); };
  cm.observer = Observer::at_rest();
  cm.sampler = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    Vec7 q;
    q << u(rng), u(rng), u(rng), u(rng), ball_sample(rng, 0.9);
    return q;
  };

  using Coeffs = Eigen::Matrix<double, 4, 5>;
  std::vector<SpecialPhaseFunction> basis;
  for (int l = 0; l < 4; ++l) {
    Coeffs c = Coeffs::Zero();
    c(l, 0) = 1.0;
    basis.push_back(metric_special(affine_field("P" + std::to_string(l), c)));
  }
  // x^i ∂_j − x^j ∂_i
  for (int i = 1; i <= 3; ++i) {
    for (int j = i + 1; j <= 3; ++j) {
      Coeffs c = Coeffs::Zero();
      c(j, 1 + i) = 1.0;
      c(i, 1 + j) = -1.0;
      basis.push_back(metric_special(affine_field("J" + std::to_string(i) + std::to_string(j), c)));
    }
  }
  // x^0 ∂_i + x^i ∂_0
  for (int i = 1; i <= 3; ++i) {
    Coeffs c = Coeffs::Zero();
    c(i, 1) = 1.0;
    c(0, 1 + i) = 1.0;
    basis.push_back(metric_special(affine_field("K" + std::to_string(i), c)));
  }

  std::vector<AffineMap> group;
  {
    AffineMap rot;
    rot.linear << 1, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
    group.push_back(rot);
    AffineMap boost;
    const double ch = std::cosh(0.2), sh = std::sinh(0.2);
    boost.linear << ch, sh, 0, 0, sh, ch, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
    group.push_back(boost);
    AffineMap shift;
    shift.shift << 0.5, -1.0, 2.0, 0.25;
    group.push_back(shift);
  }
  cm.killing = SymmetryAlgebra::from_basis(std::move(basis), events_from(cm.sampler, kProbeCount, kProbeSeed),
                                           std::move(group));
  return cm;
}

double outer_horizon(double k_s, double k_q) {
  const double disc = k_s * k_s - 4.0 * k_q * k_q;
  if (disc < 0.0) return 0.0;
  return 0.5 * (k_s + std::sqrt(disc));
}

CatalogModel reissner_nordstrom(const Constants& constants, double k_s, double k_q, double q0,
                                bool with_potential) {
  constants.validate();
  if (!(k_s >= 0.0) || !(k_q >= 0.0) || !std::isfinite(q0))
    throw Error(ErrorKind::InvalidArgument, "Reissner-Nordstrom parameters need k_s >= 0, k_q >= 0");
  const double kq2 = k_q * k_q;
  const double hbar = constants.hbar;
  const double r_plus = outer_horizon(k_s, k_q);

  CatalogModel cm;
  cm.name = "reissner_nordstrom";
  cm.chart = "static spherical (t, r, theta, phi), r > r+, 0 < theta < pi";
  SpacetimeModel& m = cm.model;
  m.name = "reissner_nordstrom";
  m.constants = constants;
  m.metric.components = [k_s, kq2](const Vec4& x) {
    const double r = x[1], s = std::sin(x[2]);
    const double f = 1.0 - k_s / r + kq2 / (r * r);
    Mat4 g = Mat4::Zero();
    g(0, 0) = -f;
    g(1, 1) = 1.0 / f;
    g(2, 2) = r * r;
    g(3, 3) = r * r * s * s;
    return g;
  };
  m.metric.derivatives = [k_s, kq2](const Vec4& x) {
    const double r = x[1], s = std::sin(x[2]), c = std::cos(x[2]);
    const double f = 1.0 - k_s / r + kq2 / (r * r);
    const double fp = k_s / (r * r) - 2.0 * kq2 / (r * r * r);
    Tensor3 d = zero_tensor3();
    d[1](0, 0) = -fp;
    d[1](1, 1) = -fp / (f * f);
    d[1](2, 2) = 2.0 * r;
    d[1](3, 3) = 2.0 * r * s * s;
    d[2](3, 3) = 2.0 * r * r * s * c;
    return d;
  };
  m.boundaries = {
      {"outer horizon", [r_plus](const Vec4& x) { return x[1] - r_plus; }},
      {"polar axis theta=0", [](const Vec4& x) { return x[2]; }},
      {"polar axis theta=pi", [](const Vec4& x) { return std::numbers::pi - x[2]; }},
  };

  EMField em;
  em.field = [q0, hbar](const Vec4& x) {
    const double e = q0 / (hbar * x[1] * x[1]);
    Mat4 F = Mat4::Zero();
    F(0, 1) = -e;
    F(1, 0) = e;
    return F;
  };
  em.field_derivatives = [q0, hbar](const Vec4& x) {
    const double r = x[1];
    const double de = 2.0 * q0 / (hbar * r * r * r);
    Tensor3 d = zero_tensor3();
    d[1](0, 1) = de;
    d[1](1, 0) = -de;
    return d;
  };
  if (with_potential) {
    em.potential = [q0, hbar](const Vec4& x) { return Vec4(-q0 / (hbar * x[1]), 0.0, 0.0, 0.0); };
    em.potential_jacobian = [q0, hbar](const Vec4& x) {
      Mat4 j = Mat4::Zero();
      j(1, 0) = q0 / (hbar * x[1] * x[1]);
      return j;
    };
  }
  m.em = std::move(em);

  cm.observer = Observer::at_rest();
  const double r_min = std::max(3.0, 1.5 * r_plus);
  cm.sampler = [k_s, kq2, r_min](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ut(-5.0, 5.0);
    std::uniform_real_distribution<double> ur(r_min, std::max(20.0, r_min + 1.0));
    std::uniform_real_distribution<double> uth(0.3, std::numbers::pi - 0.3);
    std::uniform_real_distribution<double> uph(0.0, 2.0 * std::numbers::pi);
    const double t = ut(rng), r = ur(rng), th = uth(rng), ph = uph(rng);
    const double f = 1.0 - k_s / r + kq2 / (r * r);
    const Vec3 b = ball_sample(rng, 0.9);
    Vec7 q;
    q << t, r, th, ph, f * b[0], std::sqrt(f) * b[1] / r, std::sqrt(f) * b[2] / (r * std::sin(th));
    return q;
  };

  std::vector<SpecialPhaseFunction> basis;
  {
    SpecialPhaseFunction energy;
    energy.name = "energy";
    energy.field.name = "dt";
    energy.field.value = [](const Vec4&) { return Vec4(1.0, 0.0, 0.0, 0.0); };
    energy.field.jacobian = [](const Vec4&) { return Mat4::Zero().eval(); };
    energy.field.hessian = [](const Vec4&) { return zero_tensor3(); };
    // df̆ = ∂_t ⌟ F̂
    energy.f_breve.value = [q0, hbar](const Vec4& x) { return q0 / (hbar * x[1]); };
    energy.f_breve.gradient = [q0, hbar](const Vec4& x) {
      return Vec4(0.0, -q0 / (hbar * x[1] * x[1]), 0.0, 0.0);
    };
    basis.push_back(std::move(energy));
  }
  {
    SpacetimeVectorField f;
    f.name = "rot_phi";
    f.value = [](const Vec4&) { return Vec4(0.0, 0.0, 0.0, 1.0); };
    f.jacobian = [](const Vec4&) { return Mat4::Zero().eval(); };
    f.hessian = [](const Vec4&) { return zero_tensor3(); };
    basis.push_back(metric_special(std::move(f)));
  }
  {
    // sinφ ∂_θ + cotθ cosφ ∂_φ
    SpacetimeVectorField f;
    f.name = "rot_1";
    f.value = [](const Vec4& x) {
      return Vec4(0.0, 0.0, std::sin(x[3]), std::cos(x[2]) / std::sin(x[2]) * std::cos(x[3]));
    };
    f.jacobian = [](const Vec4& x) {
      const double st = std::sin(x[2]), ct = std::cos(x[2]), sp = std::sin(x[3]), cp = std::cos(x[3]);
      Mat4 j = Mat4::Zero();
      j(2, 3) = -cp / (st * st);
      j(3, 2) = cp;
      j(3, 3) = -ct / st * sp;
      return j;
    };
    f.hessian = [](const Vec4& x) {
      const double st = std::sin(x[2]), ct = std::cos(x[2]), sp = std::sin(x[3]), cp = std::cos(x[3]);
      Tensor3 h = zero_tensor3();
      h[3](3, 2) = -sp;
      h[2](2, 3) = 2.0 * ct * cp / (st * st * st);
      h[2](3, 3) = sp / (st * st);
      h[3](2, 3) = sp / (st * st);
      h[3](3, 3) = -ct / st * cp;
      return h;
    };
    basis.push_back(metric_special(std::move(f)));
  }
  {
    // cosφ ∂_θ − cotθ sinφ ∂_φ
    SpacetimeVectorField f;
    f.name = "rot_2";
    f.value = [](const Vec4& x) {
      return Vec4(0.0, 0.0, std::cos(x[3]), -std::cos(x[2]) / std::sin(x[2]) * std::sin(x[3]));
    };
    f.jacobian = [](const Vec4& x) {
      const double st = std::sin(x[2]), ct = std::cos(x[2]), sp = std::sin(x[3]), cp = std::cos(x[3]);
      Mat4 j = Mat4::Zero();
      j(2, 3) = sp / (st * st);
      j(3, 2) = -sp;
      j(3, 3) = -ct / st * cp;
      return j;
    };
    f.hessian = [](const Vec4& x) {
      const double st = std::sin(x[2]), ct = std::cos(x[2]), sp = std::sin(x[3]), cp = std::cos(x[3]);
      Tensor3 h = zero_tensor3();
      h[3](3, 2) = -cp;
      h[2](2, 3) = -2.0 * ct * sp / (st * st * st);
      h[2](3, 3) = cp / (st * st);
      h[3](2, 3) = cp / (st * st);
      h[3](3, 3) = ct / st * sp;
      return h;
    };
    basis.push_back(metric_special(std::move(f)));
  }

  std::vector<AffineMap> group;
  {
    AffineMap phi_shift;
    phi_shift.shift << 0.0, 0.0, 0.0, 0.7;
    group.push_back(phi_shift);
    AffineMap t_shift;
    t_shift.shift << 1.3, 0.0, 0.0, 0.0;
    group.push_back(t_shift);
  }
  cm.killing = SymmetryAlgebra::from_basis(std::move(basis), events_from(cm.sampler, kProbeCount, kProbeSeed),
                                           std::move(group));
  return cm;
}

}  // namespace jetphase
