#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jetphase/symmetry.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

using Coeffs = Eigen::Matrix<double, 4, 5>;

SpacetimeVectorField constant_field(int l) {
  Coeffs c = Coeffs::Zero();
  c(l, 0) = 1.0;
  return affine_field("d" + std::to_string(l), c);
}

// Σ v·x^μ ∂_λ over the (λ, μ, v) entries
SpacetimeVectorField linear_field(std::string name, std::initializer_list<std::tuple<int, int, double>> entries) {
  Coeffs c = Coeffs::Zero();
  for (auto [l, mu, v] : entries) c(l, 1 + mu) += v;
  return affine_field(std::move(name), c);
}

SpecialPhaseFunction special(SpacetimeVectorField X, SpacetimeScalar fb = SpacetimeScalar::constant(0.0)) {
  SpecialPhaseFunction f;
  f.name = X.name;
  f.field = std::move(X);
  f.f_breve = std::move(fb);
  return f;
}

// (x¹)²∂₁, carries analytic derivatives
SpacetimeVectorField quadratic_field() {
  SpacetimeVectorField X;
  X.name = "x1sq_d1";
  X.value = [](const Vec4& x) { return Vec4(0.0, x[1] * x[1], 0.0, 0.0); };
  X.jacobian = [](const Vec4& x) {
    Mat4 j = Mat4::Zero();
    j(1, 1) = 2.0 * x[1];
    return j;
  };
  X.hessian = [](const Vec4&) {
    Tensor3 h = zero_tensor3();
    h[1](1, 1) = 2.0;
    return h;
  };
  return X;
}

const SpacetimeVectorField kDilation =
    linear_field("dilation", {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}});
const SpacetimeVectorField kStretch = linear_field("x1_d1", {{1, 1, 1.0}});

// Special functions of the flat uniform field F̂₀₁ = e with df̆ = X⌟F̂.
std::vector<SpecialPhaseFunction> uniform_field_specials(double e) {
  std::vector<SpecialPhaseFunction> out;
  out.push_back(special(constant_field(0), SpacetimeScalar{[e](const Vec4& x) { return e * x[1]; },
                                                           [e](const Vec4&) { return Vec4(0, e, 0, 0); }}));
  out.push_back(special(constant_field(1), SpacetimeScalar{[e](const Vec4& x) { return -e * x[0]; },
                                                           [e](const Vec4&) { return Vec4(-e, 0, 0, 0); }}));
  out.push_back(special(constant_field(2)));
  out.push_back(special(constant_field(3)));
  out.push_back(special(linear_field("J23", {{2, 3, 1.0}, {3, 2, -1.0}})));
  out.push_back(special(linear_field("K1", {{1, 0, 1.0}, {0, 1, 1.0}}),
                        SpacetimeScalar{[e](const Vec4& x) { return 0.5 * e * (x[1] * x[1] - x[0] * x[0]); },
                                        [e](const Vec4& x) { return Vec4(-e * x[0], e * x[1], 0, 0); }}));
  return out;
}

std::vector<PhasePoint> flat_points(const SpacetimeModel& m, std::size_t n, std::uint64_t seed) {
  std::vector<PhasePoint> out;
  for (const auto& p : minkowski(m.constants).sample_points(n, seed)) out.push_back(PhasePoint::make(m, p.coords()));
  return out;
}

// Holonomic lift by transporting a jet along the spacetime flow of X.
Vec7 flow_prolongation(const SpacetimeVectorField& X, const PhasePoint& p, double eps) {
  auto flow4 = [&](const Vec4& x, double t) {
    const int n = 16;
    const double dt = t / n;
    Vec4 s = x;
    for (int k = 0; k < n; ++k) {
      const Vec4 k1 = X(s), k2 = X(s + 0.5 * dt * k1), k3 = X(s + 0.5 * dt * k2), k4 = X(s + dt * k3);
      s += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return s;
  };
  auto image = [&](double t) {
    Vec4 d0;
    d0 << 1.0, p.v();
    const double h = 1e-3;
    const Vec4 dx = (8.0 * (flow4(p.x() + h * d0, t) - flow4(p.x() - h * d0, t)) -
                     (flow4(p.x() + 2 * h * d0, t) - flow4(p.x() - 2 * h * d0, t))) /
                    (12.0 * h);
    Vec7 out;
    out << flow4(p.x(), t), dx.tail<3>() / dx[0];
    return out;
  };
  return (8.0 * (image(eps) - image(-eps)) - (image(2 * eps) - image(-2 * eps))) / (12.0 * eps);
}

}  // namespace

TEST_CASE("lie derivative of the metric") {
  const auto mk = minkowski(odd_constants());
  const Vec4 x(0.3, -1.2, 0.7, 2.0);
  CHECK(max_abs(lie_metric(mk.model, constant_field(1), x)) == 0.0);
  CHECK(max_abs(lie_metric(mk.model, linear_field("J12", {{2, 1, 1.0}, {1, 2, -1.0}}), x)) == 0.0);
  Mat4 expect = Mat4::Zero();
  expect(1, 1) = 2.0;
  CHECK(max_abs(lie_metric(mk.model, kStretch, x) - expect) == 0.0);
  CHECK(max_abs(lie_metric(mk.model, kDilation, x) - 2.0 * mk.model.metric.at(x)) == 0.0);

  const auto rn = rn_default();
  for (const auto& y : rn.sample_events(30, kSeed + 40)) {
    for (const auto& b : rn.killing.basis) CHECK(max_abs(lie_metric(rn.model, b.field, y)) < 1e-12);
    CHECK(max_abs(lie_metric(rn.model, kStretch, y)) > 1e-3);
  }
  const auto no_jac = SpacetimeVectorField{"bare", [](const Vec4&) { return Vec4(1, 0, 0, 0); }, {}, {}};
  CHECK_THROWS_AS(lie_metric(mk.model, no_jac, x), Error);
  CHECK(max_abs(lie_metric(mk.model, no_jac.with_finite_differences(), x)) < 1e-12);
}

TEST_CASE("lie derivative of the field and the connection") {
  const auto mk = minkowski(odd_constants());
  const Vec4 x(0.3, -1.2, 0.7, 2.0);
  CHECK(max_abs(lie_em(mk.model, kDilation, x)) == 0.0);
  const auto rn = rn_default();
  const auto energy = rn.find_symmetry("energy");
  REQUIRE(energy != nullptr);
  for (const auto& y : rn.sample_events(30, kSeed + 41)) {
    for (const auto& b : rn.killing.basis) CHECK(max_abs(lie_em(rn.model, b.field, y)) < 1e-12);
    CHECK(max_abs(lie_em(rn.model, kStretch, y)) > 1e-6);
  }
  const Tensor3 lk = lie_connection(mk.model, constant_field(1), x);
  for (const auto& m : lk) CHECK(max_abs(m) == 0.0);
  // affine fields preserve the flat connection, a quadratic one does not:
  // (L_X Γ)^1_{11} = ∂₁∂₁X¹ = 2
  const Tensor3 lq = lie_connection(mk.model, quadratic_field(), x);
  CHECK(lq[1](1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& y : rn.sample_events(10, kSeed + 42)) {
    for (const auto& b : rn.killing.basis) {
      const Tensor3 t = lie_connection(rn.model, b.field, y);
      for (const auto& m : t) CHECK(max_abs(m) < 1e-9);
    }
  }
  const auto no_hess = SpacetimeVectorField{"bare", [](const Vec4&) { return Vec4(1, 0, 0, 0); },
                                            [](const Vec4&) { return Mat4::Zero().eval(); }, {}};
  CHECK_THROWS_AS(lie_connection(mk.model, no_hess, x), Error);
}

TEST_CASE("killing checks on the catalog") {
  const auto mk = minkowski(odd_constants());
  const auto probes = mk.sample_events(24, kSeed + 43);
  const KillingCheck boost = is_killing(mk.model, linear_field("K1", {{1, 0, 1.0}, {0, 1, 1.0}}), probes, 1e-12);
  CHECK(boost.killing);
  CHECK(boost.max_residual < 1e-12);
  const KillingCheck dil = is_killing(mk.model, kDilation, probes, 1e-12);
  CHECK_FALSE(dil.killing);
  CHECK(dil.max_residual == doctest::Approx(2.0));
  const auto rn = rn_default();
  const auto rot = rn.find_symmetry("rot_phi");
  REQUIRE(rot != nullptr);
  CHECK(is_killing(rn.model, rot->field, rn.sample_events(24, kSeed + 44), 1e-12).killing);
  for (const auto& b : rn.killing.basis)
    for (const auto& y : rn.sample_events(20, kSeed + 45)) CHECK(em_symmetry_residual(rn.model, b, y) < 1e-12);
  // ∂_t with f̆ = 0 fails the electromagnetic condition
  CHECK(em_symmetry_residual(rn.model, special(constant_field(0)), Vec4(0, 4, 1, 0)) > 1e-3);
}

TEST_CASE("holonomic lift") {
  const auto mk = minkowski(odd_constants());
  const auto rest = PhasePoint::make(mk.model, Vec4(0.2, 1.0, -0.5, 0.3), Vec3::Zero());
  Vec7 e1 = Vec7::Zero();
  e1[1] = 1.0;
  CHECK(max_abs(holonomic_lift(mk.model, constant_field(1), rest) - e1) == 0.0);
  const auto p = PhasePoint::make(mk.model, Vec4(0.2, 1.0, -0.5, 0.3), Vec3(0.5, 0.0, 0.0));
  const Vec7 rot = holonomic_lift(mk.model, linear_field("J12", {{2, 1, 1.0}, {1, 2, -1.0}}), p);
  CHECK(max_abs(rot.tail<3>() - Vec3(0.0, 0.5, 0.0)) == 0.0);
  const Vec7 bl = holonomic_lift(mk.model, linear_field("x0d1", {{1, 0, 1.0}}), rest);
  CHECK(bl[4] == 1.0);

  const auto rn = rn_default();
  for (const auto& q : rn.sample_points(20, kSeed + 46)) {
    for (const auto& b : rn.killing.basis)
      CHECK(max_abs(holonomic_lift(rn.model, b.field, q) - flow_prolongation(b.field, q, 1e-3)) < 1e-7);
    CHECK(max_abs(holonomic_lift(rn.model, kStretch, q) - flow_prolongation(kStretch, q, 1e-3)) < 1e-7);
  }
}

TEST_CASE("holonomic lift respects brackets") {
  const auto rn = rn_default();
  const auto& basis = rn.killing.basis;
  for (const auto& q : rn.sample_points(10, kSeed + 47)) {
    const Vec7 h = phase_fd_steps(rn.model, q);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        const auto& X = basis[i].field;
        const auto& Y = basis[j].field;
        const Vec7 lhs = commutator(holonomic_lift_field(rn.model, X), holonomic_lift_field(rn.model, Y), q.coords(), h);
        const Vec7 rhs = holonomic_lift(rn.model, lie_bracket(X, Y), q);
        CHECK(max_abs(lhs - rhs) < 1e-7);
      }
    }
  }
}

TEST_CASE("special phase function evaluation") {
  const Constants k = odd_constants();
  const auto mk = minkowski(k);
  const auto rest = PhasePoint::make(mk.model, Vec4(0.2, 1.0, -0.5, 0.3), Vec3::Zero());
  CHECK(special_eval(mk.model, special(constant_field(0)), rest) == doctest::Approx(k.mc_over_hbar()).epsilon(1e-15));
  CHECK(special_eval(mk.model, special(constant_field(1)), rest) == 0.0);
  const auto seven = special(SpacetimeVectorField::zero(), SpacetimeScalar::constant(7.0));
  const auto rn = rn_default(k);
  for (const auto& q : rn.sample_points(20, kSeed + 48)) {
    CHECK(special_eval(rn.model, seven, q) == 7.0);
    for (const auto& b : rn.killing.basis) {
      const double expect = tau_hat(rn.model, q).dot(b.field(q.x())) + b.f_breve(q.x());
      CHECK(special_eval(rn.model, b, q) == doctest::Approx(expect).epsilon(1e-12));
      // analytic gradient against nine-point differences
      const Vec7 fd = fd_gradient([&](const Vec7& c) { return special_eval(rn.model, b, PhasePoint::make(rn.model, c)); },
                                  q.coords(), phase_fd_steps(rn.model, q));
      const Vec7 an = special_gradient(rn.model, b, q);
      CHECK(max_abs(fd - an) < 1e-8 * std::max(1.0, max_abs(an)));
    }
  }
}

TEST_CASE("special hamiltonian lift: display against the dual route") {
  const Constants k = odd_constants();
  const auto mk = minkowski(k);
  const auto rn = rn_default(k);
  const SpacetimeModel flat_e = flat_with_uniform_field(k, 0.35);
  std::vector<SpecialPhaseFunction> extras = {special(kStretch), special(quadratic_field()),
                                              special(kDilation, SpacetimeScalar{[](const Vec4& x) { return x[0] * x[1]; },
                                                                                 [](const Vec4& x) { return Vec4(x[1], x[0], 0, 0); }})};
  auto run = [&](const SpacetimeModel& m, const std::vector<PhasePoint>& pts, const std::vector<SpecialPhaseFunction>& fs) {
    for (const auto& q : pts)
      for (const auto& f : fs) {
        const Vec7 a = special_hamiltonian_lift(m, f, q);
        const Vec7 b = special_hamiltonian_lift_dual(m, f, q);
        CHECK(max_abs(a - b) < 1e-9 * std::max(1.0, max_abs(a)));
      }
  };
  run(mk.model, mk.sample_points(30, kSeed + 49), mk.killing.basis);
  run(mk.model, mk.sample_points(30, kSeed + 50), extras);
  run(rn.model, rn.sample_points(30, kSeed + 51), rn.killing.basis);
  run(rn.model, rn.sample_points(30, kSeed + 52), extras);
  run(flat_e, flat_points(flat_e, 30, kSeed + 53), uniform_field_specials(0.35));

  const auto rest = PhasePoint::make(mk.model, Vec4(0.2, 1.0, -0.5, 0.3), Vec3::Zero());
  Vec7 e1 = Vec7::Zero();
  e1[1] = 1.0;
  CHECK(max_abs(special_hamiltonian_lift(mk.model, special(constant_field(1)), rest) - e1) < 1e-15);
  const auto vertical = special(SpacetimeVectorField::zero(),
                                SpacetimeScalar{[](const Vec4& x) { return std::sin(x[1]) * x[2]; },
                                                [](const Vec4& x) { return Vec4(0, std::cos(x[1]) * x[2], std::sin(x[1]), 0); }});
  for (const auto& q : rn.sample_points(10, kSeed + 54)) {
    const Vec7 v = special_hamiltonian_lift(rn.model, vertical, q);
    CHECK(max_abs(v.head<4>()) == 0.0);
    CHECK(max_abs(v.tail<3>()) > 0.0);
  }
}

TEST_CASE("lemma: killing fields with df̆ = X⌟F̂ lift holonomically") {
  const Constants k = odd_constants();
  const auto mk = minkowski(k);
  const auto rn = rn_default(k);
  const SpacetimeModel flat_e = flat_with_uniform_field(k, 0.35);
  auto worst = [](const SpacetimeModel& m, const std::vector<PhasePoint>& pts, const std::vector<SpecialPhaseFunction>& fs) {
    double r = 0.0;
    for (const auto& q : pts)
      for (const auto& f : fs) r = std::max(r, max_abs(special_hamiltonian_lift(m, f, q) - holonomic_lift(m, f.field, q)));
    return r;
  };
  CHECK(worst(mk.model, mk.sample_points(100, kSeed + 55), mk.killing.basis) < 1e-9);
  CHECK(worst(rn.model, rn.sample_points(100, kSeed + 56), rn.killing.basis) < 1e-9);
  CHECK(worst(flat_e, flat_points(flat_e, 100, kSeed + 57), uniform_field_specials(0.35)) < 1e-9);
  // negative control: a non-Killing field
  CHECK(worst(mk.model, mk.sample_points(100, kSeed + 58), {special(kStretch)}) > 1e-3);
}

TEST_CASE("special bracket examples") {
  const auto mk = minkowski(odd_constants());
  const Vec4 x(0.3, -1.2, 0.7, 2.0);
  const BracketValue t = special_bracket_at(mk.model, special(constant_field(1)), special(constant_field(2)), x);
  CHECK(max_abs(t.field) == 0.0);
  CHECK(t.f_breve == 0.0);
  const BracketValue r =
      special_bracket_at(mk.model, special(constant_field(1)), special(linear_field("J12", {{2, 1, 1.0}, {1, 2, -1.0}})), x);
  CHECK(max_abs(r.field - Vec4(0, 0, 1, 0)) == 0.0);
  CHECK(r.f_breve == 0.0);
  const auto rn = rn_default();
  const BracketValue e = special_bracket_at(rn.model, *rn.find_symmetry("energy"), *rn.find_symmetry("rot_phi"), Vec4(0, 5, 1, 0.4));
  CHECK(max_abs(e.field) < 1e-15);
  CHECK(std::abs(e.f_breve) < 1e-15);
}

TEST_CASE("structural bracket equals the jacobi-definition bracket") {
  const Constants k = odd_constants();
  const auto mk = minkowski(k);
  const auto rn = rn_default(k);
  const SpacetimeModel flat_e = flat_with_uniform_field(k, 0.35);
  auto sweep = [](const SpacetimeModel& m, const std::vector<PhasePoint>& pts, const std::vector<SpecialPhaseFunction>& fs) {
    double r = 0.0;
    for (const auto& q : pts)
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = 0; j < fs.size(); ++j) {
          const double s = special_eval(m, special_bracket(m, fs[i], fs[j]), q);
          r = std::max(r, std::abs(s - jacobi_bracket(m, fs[i], fs[j], q)) / std::max(1.0, std::abs(s)));
        }
    return r;
  };
  CHECK(sweep(mk.model, mk.sample_points(20, kSeed + 59), mk.killing.basis) < 1e-8);
  CHECK(sweep(rn.model, rn.sample_points(20, kSeed + 60), rn.killing.basis) < 1e-8);
  CHECK(sweep(flat_e, flat_points(flat_e, 20, kSeed + 61), uniform_field_specials(0.35)) < 1e-8);
  // also off the conserved sheaf
  std::vector<SpecialPhaseFunction> generic = {
      special(kStretch, SpacetimeScalar{[](const Vec4& x) { return x[2] * x[2]; }, [](const Vec4& x) { return Vec4(0, 0, 2 * x[2], 0); }}),
      special(quadratic_field()), *rn.find_symmetry("energy")};
  CHECK(sweep(rn.model, rn.sample_points(20, kSeed + 62), generic) < 1e-8);
}

TEST_CASE("bracket homomorphism on conserved pairs") {
  const Constants k = odd_constants();
  const auto rn = rn_default(k);
  const SpacetimeModel flat_e = flat_with_uniform_field(k, 0.35);
  auto sweep = [](const SpacetimeModel& m, const std::vector<PhasePoint>& pts, const std::vector<SpecialPhaseFunction>& fs) {
    double r = 0.0;
    for (const auto& q : pts) {
      const Vec7 h = phase_fd_steps(m, q, 1e-3);
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
          const Vec7 lhs = special_hamiltonian_lift(m, special_bracket(m, fs[i], fs[j]), q);
          const Vec7 rhs = commutator(special_lift_field(m, fs[i]), special_lift_field(m, fs[j]), q.coords(), h);
          r = std::max(r, max_abs(lhs - rhs));
        }
    }
    return r;
  };
  CHECK(sweep(rn.model, rn.sample_points(10, kSeed + 63), rn.killing.basis) < 1e-6);
  CHECK(sweep(flat_e, flat_points(flat_e, 10, kSeed + 64), uniform_field_specials(0.35)) < 1e-6);
}

TEST_CASE("conserved specials are closed under the bracket") {
  const Constants k = odd_constants();
  const auto rn = rn_default(k);
  const SpacetimeModel flat_e = flat_with_uniform_field(k, 0.35);
  auto sweep = [](const SpacetimeModel& m, const std::vector<PhasePoint>& pts, const std::vector<SpecialPhaseFunction>& fs) {
    double r = 0.0;
    for (const auto& q : pts)
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j)
          r = std::max(r, std::abs(conservation_residual(m, special_bracket(m, fs[i], fs[j]), q).gamma_f));
    return r;
  };
  CHECK(sweep(rn.model, rn.sample_points(20, kSeed + 65), rn.killing.basis) < 1e-8);
  CHECK(sweep(flat_e, flat_points(flat_e, 20, kSeed + 66), uniform_field_specials(0.35)) < 1e-8);
}

TEST_CASE("electromagnetic bracket law") {
  const Constants k = odd_constants();
  const auto rn = rn_default(k);
  const SpacetimeModel flat_e = flat_with_uniform_field(k, 0.35);
  auto sweep = [](const SpacetimeModel& m, const std::vector<Vec4>& events, const std::vector<SpecialPhaseFunction>& fs) {
    double r = 0.0;
    for (const auto& y : events)
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
          const SpecialPhaseFunction b = special_bracket(m, fs[i], fs[j]);
          const Vec4 contraction = m.em->at(y).transpose() * b.field(y);
          r = std::max(r, max_abs(b.f_breve.gradient_at(y) - contraction));
        }
    return r;
  };
  CHECK(sweep(rn.model, rn.sample_events(20, kSeed + 67), rn.killing.basis) < 1e-8);
  CHECK(sweep(flat_e, minkowski(k).sample_events(20, kSeed + 68), uniform_field_specials(0.35)) < 1e-8);
}

TEST_CASE("jacobi identity on the minkowski algebra") {
  const auto mk = minkowski(odd_constants());
  const auto& b = mk.killing.basis;
  double r = 0.0;
  for (const auto& q : mk.sample_points(5, kSeed + 69)) {
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        for (std::size_t l = j + 1; l < b.size(); ++l) {
          const double s = special_eval(mk.model, special_bracket(mk.model, b[i], special_bracket(mk.model, b[j], b[l])), q) +
                           special_eval(mk.model, special_bracket(mk.model, b[j], special_bracket(mk.model, b[l], b[i])), q) +
                           special_eval(mk.model, special_bracket(mk.model, b[l], special_bracket(mk.model, b[i], b[j])), q);
          r = std::max(r, std::abs(s));
        }
  }
  CHECK(r < 1e-7);
  // antisymmetry is exact
  const auto q = mk.sample_points(1, kSeed + 70)[0];
  CHECK(special_eval(mk.model, special_bracket(mk.model, b[4], b[7]), q) ==
        -special_eval(mk.model, special_bracket(mk.model, b[7], b[4]), q));
}

TEST_CASE("conservation residual") {
  const Constants k = odd_constants();
  const auto mk = minkowski(k);
  const auto rn = rn_default(k);
  for (const auto& q : mk.sample_points(20, kSeed + 71))
    for (const auto& f : mk.killing.basis) CHECK(std::abs(conservation_residual(mk.model, f, q).gamma_f) < 1e-9);
  const auto c = special(SpacetimeVectorField::zero(), SpacetimeScalar::constant(3.0));
  CHECK(conservation_residual(rn.model, c, rn.sample_points(1, kSeed)[0]).gamma_f == 0.0);

  // non-Killing x¹∂₁ at x¹₀ = 0.5: γ.f = −½(L_X G)(𝕕,𝕕) = −(m/ħ)(cα⁰ x¹₀)²
  const auto p = PhasePoint::make(mk.model, Vec4(0.1, 0.4, -0.2, 0.3), Vec3(0.5, 0.0, 0.0));
  const double a0 = 1.0 / std::sqrt(1.0 - 0.25);
  const double expect = -k.m_over_hbar() * std::pow(k.c * a0 * 0.5, 2);
  const ConservationResidual cr = conservation_residual(mk.model, special(kStretch), p);
  CHECK(cr.gamma_f == doctest::Approx(expect).epsilon(1e-9));
  CHECK(cr.criterion == doctest::Approx(expect).epsilon(1e-12));

  // both routes agree off the conserved sheaf
  std::vector<SpecialPhaseFunction> generic = {special(kStretch), special(quadratic_field()), special(kDilation),
                                               special(constant_field(0))};
  for (const auto& q : rn.sample_points(30, kSeed + 72))
    for (const auto& f : generic) {
      const ConservationResidual r = conservation_residual(rn.model, f, q);
      CHECK(std::abs(r.gamma_f - r.criterion) < 1e-8 * std::max(1.0, std::abs(r.criterion)));
    }
  for (const auto& q : rn.sample_points(30, kSeed + 73))
    for (const auto& f : rn.killing.basis) {
      const ConservationResidual r = conservation_residual(rn.model, f, q);
      CHECK(std::abs(r.gamma_f) < 1e-8);
      CHECK(std::abs(r.criterion) < 1e-10);
    }
}

TEST_CASE("self-holonomy") {
  const Constants k = odd_constants();
  const auto mk = minkowski(k);
  const auto rn = rn_default(k);
  for (const auto& q : mk.sample_points(30, kSeed + 74))
    for (int l = 0; l < 4; ++l) CHECK(self_holonomy_residual(mk.model, mk.killing.basis[l], q) < 1e-10);
  for (const auto& q : rn.sample_points(30, kSeed + 75))
    for (const auto& f : rn.killing.basis) CHECK(self_holonomy_residual(rn.model, f, q) < 1e-8);
  double neg = 0.0;
  for (const auto& q : mk.sample_points(30, kSeed + 76)) neg = std::max(neg, self_holonomy_residual(mk.model, special(kStretch), q));
  CHECK(neg > 1e-3);
}

TEST_CASE("flow lie derivatives of tau hat and omega along lifts") {
  const Constants k = natural_constants();
  const auto rn = rn_default(k);
  const auto tau7 = [&](const Vec7& c) {
    Vec7 t = Vec7::Zero();
    t.head<4>() = tau_hat(rn.model, PhasePoint::make(rn.model, c));
    return t;
  };
  const auto om = omega_form(rn.model);
  for (const auto& q : rn.sample_points(5, kSeed + 77)) {
    FlowOptions o;
    o.h = phase_fd_steps(rn.model, q, 1e-3);
    for (const auto& f : rn.killing.basis) {
      const auto y = holonomic_lift_field(rn.model, f.field);
      CHECK(max_abs(lie_flow_one_form(y, tau7, q.coords(), o)) < 1e-5);
      CHECK(max_abs(lie_flow_two_form(y, om, q.coords(), o)) < 1e-5);
    }
    const auto y = holonomic_lift_field(rn.model, kStretch);
    CHECK(max_abs(lie_flow_one_form(y, tau7, q.coords(), o)) > 1e-2);
  }
}

TEST_CASE("lie derivative of the phase connection along lifts") {
  const auto rn = rn_default();
  for (const auto& q : rn.sample_points(30, kSeed + 78))
    for (const auto& f : rn.killing.basis) CHECK(max_abs(lie_phase_connection(rn.model, f.field, q)) < 1e-9);
  const auto mk = minkowski(odd_constants());
  const auto p = mk.sample_points(1, kSeed + 79)[0];
  CHECK(max_abs(lie_phase_connection(mk.model, quadratic_field(), p)) > 1e-3);
}
