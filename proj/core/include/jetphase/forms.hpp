#pragma once

#include <functional>

#include "jetphase/types.hpp"

namespace jetphase {

// Phase-space fields expressed in raw 7-coordinates. Callers capture the model.
using PhaseScalarField = std::function<double(const Vec7&)>;
using PhaseVectorField = std::function<Vec7(const Vec7&)>;
using PhaseOneForm = std::function<Vec7(const Vec7&)>;
using PhaseTwoForm = std::function<Mat7(const Vec7&)>;

// Pfaffian of an even-dimensional antisymmetric matrix (Parlett–Reid
// elimination with pivoting).
double pfaffian(Eigen::MatrixXd a);

// Coefficient of w∧Ω∧Ω∧Ω on (∂_1, …, ∂_7) where the 2-form matrix holds
// evaluations Ω(∂_a, ∂_b).
double top_form_coefficient(const Vec7& w, const Mat7& omega);

// Finite differences use the eighth-order nine-point central stencil with a
// per-coordinate step vector h (a scalar h means the same step everywhere).

// Gradient and Jacobian; jac(a, b) = ∂_b F^a.
Vec7 fd_gradient(const PhaseScalarField& f, const Vec7& p, const Vec7& h);
Mat7 fd_jacobian(const PhaseVectorField& f, const Vec7& p, const Vec7& h);

// (dθ)_{ab} = ∂_aθ_b − ∂_bθ_a.
Mat7 exterior_derivative(const PhaseOneForm& theta, const Vec7& p, const Vec7& h);

// max over a<b<c of |∂_aΩ_{bc} + ∂_bΩ_{ca} + ∂_cΩ_{ab}|.
double closure_residual(const PhaseTwoForm& omega, const Vec7& p, const Vec7& h);

// [Y1, Y2]^a = Y1^b ∂_b Y2^a − Y2^b ∂_b Y1^a.
Vec7 commutator(const PhaseVectorField& y1, const PhaseVectorField& y2, const Vec7& p,
                const Vec7& h);

inline Vec7 uniform_steps(double h) { return Vec7::Constant(h); }

// Lie derivatives along the flow of y by pulling back along Φ_{±ε}, Φ_{±2ε} and
// differencing (fourth order in ε). The flow is integrated with classical RK4
// and its Jacobian by the nine-point stencil with steps h.
struct FlowOptions {
  double eps = 1e-4;
  Vec7 h = Vec7::Constant(1e-4);
  int substeps = 4;
};

Vec7 flow(const PhaseVectorField& y, const Vec7& p, double t, int substeps);
Vec7 lie_flow_one_form(const PhaseVectorField& y, const PhaseOneForm& alpha, const Vec7& p,
                         const FlowOptions& opts = {});
Mat7 lie_flow_two_form(const PhaseVectorField& y, const PhaseTwoForm& omega, const Vec7& p,
                         const FlowOptions& opts = {});
// For bivectors (push forward by Φ_{−t}).
Mat7 lie_flow_bivector(const PhaseVectorField& y, const PhaseTwoForm& lambda,
                                  const Vec7& p, const FlowOptions& opts = {});

}  // namespace jetphase
