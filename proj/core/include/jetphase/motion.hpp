#pragma once

#include <string>
#include <vector>

#include "jetphase/dynamics.hpp"

namespace jetphase {

// x^i_00 of the unparametrized equation of motion at p.
Vec3 eom_rhs(const SpacetimeModel& model, const PhasePoint& p);

enum class Method { rk4, rkf45 };

const char* to_string(Method m) noexcept;

struct IntegratorOptions {
  Method method = Method::rk4;
  double step = 1e-3;          // rk4 step, rkf45 initial step
  double atol = 1e-10;
  double rtol = 1e-10;
  double safety = 0.9;
  double max_factor = 5.0;
  double min_factor = 0.2;
  double min_step = 1e-14;
  std::size_t max_steps = 50'000'000;
  double event_tol = 1e-10;    // x⁰ resolution of event bisection
  double timelike_tol = 1e-10; // −ĝ₀₀ below this counts as lightlike

  void validate() const;
};

enum class Termination { range_end, timelike_lost, chart_exit, step_failure, max_steps };

const char* to_string(Termination t) noexcept;

struct Trajectory {
  // Each sample is (x⁰, x¹, x², x³, v¹, v², v³).
  std::vector<Vec7> samples;
  Method method = Method::rk4;
  double step = 0.0;
  double atol = 0.0;
  double rtol = 0.0;
  Termination termination = Termination::range_end;
  std::string detail;
  std::size_t rejected_steps = 0;

  PhasePoint point(const SpacetimeModel& model, std::size_t k) const {
    return PhasePoint::make(model, samples.at(k));
  }
};

// Integrates dxⁱ/dx⁰ = vⁱ, dvⁱ/dx⁰ = eom_rhs from p0.x⁰ to x0_end.
Trajectory integrate(const SpacetimeModel& model, const PhasePoint& p0, double x0_end,
                     const IntegratorOptions& opts = {});

}  // namespace jetphase
