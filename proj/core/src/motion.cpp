#include "jetphase/motion.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace jetphase {

Vec3 eom_rhs(const SpacetimeModel& model, const PhasePoint& p) {
  const Kinematics s = kinematics(model, p);
  const Tensor3 chr = christoffel(s.g_inv, s.dg);
  Vec4 q = Vec4::Zero();
  for (int rho = 0; rho < 4; ++rho) q += s.d0[rho] * (chr[rho] * s.d0);
  Vec3 acc = -s.dbar * q;
  if (model.em) {
    const Mat3 gbar_perp = s.dbar * s.g_inv * s.dbar.transpose();
    const Eigen::RowVector4d dF = s.d0.transpose() * model.em->at(s.x);
    acc -= model.constants.hbar_over_m() / (model.constants.c * s.alpha0) * gbar_perp *
           dF.tail<3>().transpose();
  }
  return acc;
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::rk4: return "rk4";
    case Method::rkf45: return "rkf45";
  }
  return "unknown";
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::range_end: return "range_end";
    case Termination::timelike_lost: return "timelike_lost";
    case Termination::chart_exit: return "chart_exit";
    case Termination::step_failure: return "step_failure";
    case Termination::max_steps: return "max_steps";
  }
  return "unknown";
}

void IntegratorOptions::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
  };
  positive(step, "step");
  positive(atol, "atol");
  positive(rtol, "rtol");
  positive(safety, "safety");
  positive(max_factor, "max_factor");
  positive(min_factor, "min_factor");
  positive(min_step, "min_step");
  positive(event_tol, "event_tol");
  positive(timelike_tol, "timelike_tol");
  if (max_steps == 0) throw Error(ErrorKind::InvalidArgument, "max_steps must be positive");
}

namespace {

struct StepResult {
  bool ok = false;
  Termination failure = Termination::step_failure;
  std::string detail;
  Vec6 y;
  double err = 0.0;
};

class Stepper {
 public:
  Stepper(const SpacetimeModel& model, const IntegratorOptions& opts) : model_(model), opts_(opts) {}

  Vec6 rhs(double t, const Vec6& y) const {
    // overflow is a numeric failure, not a lightlike velocity
    if (!y.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite state");
    Vec4 x;
    x << t, y.head<3>();
    const PhasePoint p = PhasePoint::make(model_, x, y.tail<3>());
    Vec6 out;
    out << y.tail<3>(), eom_rhs(model_, p);
    return out;
  }

  StepResult attempt(double t, const Vec6& y, double h) const {
    StepResult r;
    try {
      if (opts_.method == Method::rk4) {
        const Vec6 k1 = rhs(t, y);
        const Vec6 k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const Vec6 k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const Vec6 k4 = rhs(t + h, y + h * k3);
        r.y = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } else {
        fehlberg(t, y, h, r);
      }
    } catch (const Error& e) {
      r.failure = classify(e.kind());
      r.detail = e.what();
      return r;
    }
    if (!r.y.allFinite()) {
      r.detail = "non-finite state";
      return r;
    }
    return check_events(t + h, r);
  }

 private:
  void fehlberg(double t, const Vec6& y, double h, StepResult& r) const {
    const Vec6 k1 = rhs(t, y);
    const Vec6 k2 = rhs(t + h / 4.0, y + h * (k1 / 4.0));
    const Vec6 k3 = rhs(t + 3.0 * h / 8.0, y + h * (3.0 / 32.0 * k1 + 9.0 / 32.0 * k2));
    const Vec6 k4 = rhs(t + 12.0 * h / 13.0,
                        y + h * (1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 + 7296.0 / 2197.0 * k3));
    const Vec6 k5 = rhs(t + h, y + h * (439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 -
                                        845.0 / 4104.0 * k4));
    const Vec6 k6 = rhs(t + h / 2.0, y + h * (-8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 +
                                              1859.0 / 4104.0 * k4 - 11.0 / 40.0 * k5));
    const Vec6 y5 = y + h * (16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 + 28561.0 / 56430.0 * k4 -
                             9.0 / 50.0 * k5 + 2.0 / 55.0 * k6);
    const Vec6 y4 = y + h * (25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 + 2197.0 / 4104.0 * k4 -
                             k5 / 5.0);
    double err = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double scale = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
    }
    r.y = y5;
    r.err = err;
  }

  static Termination classify(ErrorKind k) {
    if (k == ErrorKind::NotTimelike) return Termination::timelike_lost;
    if (k == ErrorKind::ChartDomain || k == ErrorKind::SingularMetric) return Termination::chart_exit;
    return Termination::step_failure;
  }

  StepResult check_events(double t, StepResult r) const {
    Vec4 x;
    x << t, r.y.head<3>();
    for (const auto& b : model_.boundaries) {
      if (!(b.value(x) > 0.0)) {
        r.failure = Termination::chart_exit;
        r.detail = "chart boundary " + b.name;
        return r;
      }
    }
    Vec4 d0;
    d0 << 1.0, r.y.tail<3>();
    const double gh = d0.dot(model_.metric.at(x) * d0);
    if (!(-gh > opts_.timelike_tol)) {
      r.failure = Termination::timelike_lost;
      r.detail = "velocity reached the light cone";
      return r;
    }
    r.ok = true;
    return r;
  }

  const SpacetimeModel& model_;
  const IntegratorOptions& opts_;
};

Vec7 sample(double t, const Vec6& y) {
  Vec7 s;
  s << t, y;
  return s;
}

}  // namespace

Trajectory integrate(const SpacetimeModel& model, const PhasePoint& p0, double x0_end,
                     const IntegratorOptions& opts) {
  opts.validate();
  const double t0 = p0.x()[0];
  if (!(x0_end > t0)) throw Error(ErrorKind::InvalidArgument, "integration range is empty");
  // Validates p0 against the current model.
  PhasePoint::make(model, p0.x(), p0.v());

  Trajectory traj;
  traj.method = opts.method;
  traj.step = opts.step;
  traj.atol = opts.method == Method::rkf45 ? opts.atol : 0.0;
  traj.rtol = opts.method == Method::rkf45 ? opts.rtol : 0.0;

  const Stepper stepper(model, opts);
  double t = t0;
  Vec6 y;
  y << p0.x().tail<3>(), p0.v();
  traj.samples.push_back(sample(t, y));

  double h_cur = opts.step;
  std::size_t steps = 0;
  const double t_eps = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x0_end));

  while (x0_end - t > t_eps) {
    if (steps >= opts.max_steps) {
      traj.termination = Termination::max_steps;
      traj.detail = "step budget exhausted";
      return traj;
    }
    // absorb accumulated roundoff into the last step instead of adding a sliver
    Termination event_kind = Termination::range_end;
    std::string event_detail;
    double h = (x0_end - t <= h_cur * (1.0 + 1e-8)) ? x0_end - t : h_cur;
    bool limited = false;
    StepResult r = stepper.attempt(t, y, h);
    if (!r.ok) {
      if (h <= opts.event_tol || r.failure == Termination::step_failure) {
        traj.termination = r.failure;
        traj.detail = r.detail;
        return traj;
      }
      double lo = 0.0, hi = h;
      StepResult fail = r;
      while (hi - lo > opts.event_tol) {
        const double mid = 0.5 * (lo + hi);
        StepResult m = stepper.attempt(t, y, mid);
        if (m.ok) {
          lo = mid;
        } else {
          hi = mid;
          fail = m;
        }
      }
      if (lo <= 0.0) {
        traj.termination = fail.failure;
        traj.detail = fail.detail;
        return traj;
      }
      h = lo;
      limited = true;
      event_kind = fail.failure;
      event_detail = fail.detail;
      r = stepper.attempt(t, y, h);
      if (!r.ok) {
        traj.termination = fail.failure;
        traj.detail = fail.detail;
        return traj;
      }
    }
    if (opts.method == Method::rkf45) {
      const double factor =
          r.err > 0.0 ? std::clamp(opts.safety * std::pow(r.err, -0.2), opts.min_factor, opts.max_factor)
                      : opts.max_factor;
      if (r.err > 1.0) {
        ++traj.rejected_steps;
        h_cur = h * factor;
        if (h_cur < opts.min_step) {
          traj.termination = Termination::step_failure;
          traj.detail = "adaptive step underflow";
          return traj;
        }
        continue;
      }
      if (!limited) h_cur = h * factor;
    }
    t = (h == x0_end - t) ? x0_end : t + h;
    y = r.y;
    ++steps;
    traj.samples.push_back(sample(t, y));
    if (limited && h < 1e-3 * h_cur) {
      // the boundary is closer than the step can resolve
      traj.termination = event_kind;
      traj.detail = event_detail;
      return traj;
    }
  }
  traj.termination = Termination::range_end;
  return traj;
}

}  // namespace jetphase
