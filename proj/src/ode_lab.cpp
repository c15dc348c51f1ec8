#include "harnack/ode_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace harnack {

std::string to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::BlewUp: return "blew_up";
    case TrajectoryStatus::LeftDomain: return "left_domain";
  }
  return "?";
}

namespace {

// G(s) = (-a) 3 (e^{-as} - 1) / (3 e^{-as} - 1), written with expm1
Real growth(Real a, Real s) {
  Real e = std::expm1(-a * s);
  return -a * 3.0L * e / (3.0L * e + 2.0L);
}

// Below y = 1 the state is y; above it the state is w = 1/y with
// w' = -(1 + w) G(s), which stays bounded through the blow-up.
struct State {
  bool inverted = false;
  Real v = 0.0L;
  Real y() const { return inverted ? 1.0L / v : v; }
};

Real state_rhs(Real a, Real s, Real v, bool inverted) {
  Real g = growth(a, s);
  return inverted ? -(1.0L + v) * g : v * (v + 1.0L) * g;
}

void check_args(double a, double eps, double t_max) {
  if (!(a < 0.0)) throw std::invalid_argument("riccati problem needs a < 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("riccati problem needs eps >= 0");
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
}

Real rk4_step(Real a, Real s, Real v, Real h, bool inv) {
  Real k1 = state_rhs(a, s, v, inv);
  Real k2 = state_rhs(a, s + h / 2, v + h / 2 * k1, inv);
  Real k3 = state_rhs(a, s + h / 2, v + h / 2 * k2, inv);
  Real k4 = state_rhs(a, s + h, v + h * k3, inv);
  return v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Dormand-Prince 5(4) tableau
constexpr Real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr Real a21 = 1.0L / 5;
constexpr Real a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
               a54 = -212.0L / 729;
constexpr Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
               a64 = 49.0L / 176, a65 = -5103.0L / 18656;
constexpr Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
               b6 = 11.0L / 84;
constexpr Real e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920,
               e5 = -17253.0L / 339200, e6 = 22.0L / 525, e7 = -1.0L / 40;

struct DpResult {
  Real v5;
  Real err;
};

DpResult dp_step(Real a, Real s, Real v, Real h, bool inv) {
  auto f = [&](Real ss, Real vv) { return state_rhs(a, ss, vv, inv); };
  Real k1 = f(s, v);
  Real k2 = f(s + c2 * h, v + h * a21 * k1);
  Real k3 = f(s + c3 * h, v + h * (a31 * k1 + a32 * k2));
  Real k4 = f(s + c4 * h, v + h * (a41 * k1 + a42 * k2 + a43 * k3));
  Real k5 = f(s + c5 * h, v + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  Real k6 = f(s + h, v + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  Real v5 = v + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  Real k7 = f(s + h, v5);
  Real err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {v5, err};
}

// Time in (s0, s0 + h] where the inverted state reaches w_target, by
// bisection on the step length.
template <class Step>
Real bisect_crossing(Real s0, Real h, Real w_target, Step step) {
  Real lo = 0.0L, hi = h;
  for (int it = 0; it < 200 && hi - lo > 1e-12L * (s0 + hi); ++it) {
    Real mid = 0.5L * (lo + hi);
    if (step(mid) > w_target)
      lo = mid;
    else
      hi = mid;
  }
  return s0 + hi;
}

void push(Trajectory& tr, Real s, Real y) {
  tr.t.push_back(s);
  tr.y.push_back(y);
}

}  // namespace

Real riccati_rhs(Real a, Real s, Real y) { return y * (y + 1.0L) * growth(a, s); }

Trajectory solve_cauchy(double a, double eps, double t_max, double tol, double threshold) {
  check_args(a, eps, t_max);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!(threshold > 1.0)) throw std::invalid_argument("threshold must be > 1");

  Trajectory tr;
  tr.meta.method = "dormand_prince_5_4";
  tr.meta.rtol = tol;
  tr.meta.atol = tol;
  tr.meta.threshold = threshold;
  tr.meta.h_min = std::numeric_limits<double>::infinity();
  tr.meta.h_max = 0.0;

  const Real A = a, T = t_max, w_stop = 1.0L / static_cast<Real>(threshold);
  State st{false, static_cast<Real>(eps)};
  Real s = 0.0L;
  push(tr, s, st.y());
  if (eps == 0.0) {
    push(tr, T, 0.0L);
    tr.event_time = T;
    tr.meta.h_min = tr.meta.h_max = t_max;
    return tr;
  }

  Real h = std::min<Real>(1e-3L, T);
  while (s < T) {
    if (s + h > T) h = T - s;
    DpResult r = dp_step(A, s, st.v, h, st.inverted);
    Real scale = tol + tol * std::max(std::fabs(st.v), std::fabs(r.v5));
    Real err = std::fabs(r.err) / scale;
    if (!std::isfinite(err) || err > 1.0L) {
      ++tr.meta.rejected;
      Real fac = std::isfinite(err) ? std::max(0.2L, 0.9L * std::pow(err, -0.2L)) : 0.2L;
      h *= fac;
      if (h < 1e-18L * std::max(1.0L, s)) {
        tr.status = TrajectoryStatus::LeftDomain;
        tr.event_time = s;
        return tr;
      }
      continue;
    }
    ++tr.meta.accepted;
    tr.meta.h_min = std::min(tr.meta.h_min, static_cast<double>(h));
    tr.meta.h_max = std::max(tr.meta.h_max, static_cast<double>(h));

    if (st.inverted && r.v5 <= w_stop) {
      Real s0 = s, v0 = st.v;
      Real hit = bisect_crossing(s0, h, w_stop,
                                 [&](Real hh) { return dp_step(A, s0, v0, hh, true).v5; });
      push(tr, hit, static_cast<Real>(threshold));
      tr.status = TrajectoryStatus::BlewUp;
      tr.event_time = hit;
      return tr;
    }

    s += h;
    st.v = r.v5;
    if (!st.inverted && st.v > 1.0L) st = State{true, 1.0L / st.v};
    push(tr, s, st.y());

    Real fac = err > 0.0L ? std::min(5.0L, 0.9L * std::pow(err, -0.2L)) : 5.0L;
    h *= std::max(0.2L, fac);
  }
  tr.event_time = T;
  return tr;
}

Trajectory solve_cauchy_rk4(double a, double eps, double t_max, double h_d, double threshold) {
  check_args(a, eps, t_max);
  if (!(h_d > 0.0)) throw std::invalid_argument("step must be > 0");
  if (!(threshold > 1.0)) throw std::invalid_argument("threshold must be > 1");

  Trajectory tr;
  tr.meta.method = "rk4_fixed";
  tr.meta.threshold = threshold;
  tr.meta.h_min = tr.meta.h_max = h_d;

  const Real A = a, T = t_max, h = h_d, w_stop = 1.0L / static_cast<Real>(threshold);
  State st{false, static_cast<Real>(eps)};
  push(tr, 0.0L, st.y());
  const long n = static_cast<long>(std::ceil(T / h - 1e-9L));
  for (long i = 0; i < n; ++i) {
    Real s = i * h;
    Real hh = std::min(h, T - s);
    Real v1 = rk4_step(A, s, st.v, hh, st.inverted);
    ++tr.meta.accepted;
    if (st.inverted && v1 <= w_stop) {
      Real v0 = st.v;
      Real hit = bisect_crossing(s, hh, w_stop, [&](Real x) { return rk4_step(A, s, v0, x, true); });
      push(tr, hit, static_cast<Real>(threshold));
      tr.status = TrajectoryStatus::BlewUp;
      tr.event_time = hit;
      return tr;
    }
    st.v = v1;
    if (!st.inverted && st.v > 1.0L) st = State{true, 1.0L / st.v};
    push(tr, s + hh, st.y());
  }
  tr.event_time = T;
  return tr;
}

std::vector<AEpsPoint> a_eps_curve(double a, const std::vector<double>& eps_list, double t_max,
                                   double tol) {
  std::vector<std::future<AEpsPoint>> jobs;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw std::invalid_argument("a_eps_curve needs eps > 0");
    jobs.push_back(std::async(std::launch::async, [=] {
      Trajectory tr = solve_cauchy(a, eps, t_max, tol);
      return AEpsPoint{eps, tr.event_time, tr.status != TrajectoryStatus::BlewUp};
    }));
  }
  std::vector<AEpsPoint> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

Real delta0(double a) {
  if (!(a < 0.0)) throw std::invalid_argument("delta0 needs a < 0");
  return 1.0L / (48.0L * static_cast<Real>(-a));
}

ContinuationCheck continuation_check(const Trajectory& traj, double a) {
  ContinuationCheck cc;
  Real d0 = delta0(a);
  Real tk = 0.0L;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    if (traj.y[i] > 0.25L) break;
    tk = traj.t[i];
  }
  cc.steps = 1 + static_cast<long>(std::floor(tk / d0));
  cc.certified_time = cc.steps * d0;
  cc.a_eps = traj.event_time;
  // a capped run only bounds A_eps from below, which is still enough when it passes
  cc.holds = cc.a_eps >= cc.certified_time;
  return cc;
}

LFunction::LFunction(double a, double eps, double t_max, double tol)
    : a_(a), eps_(eps), junction_(std::log(3.0L) / static_cast<Real>(-a)) {
  if (!(eps > 0.0)) throw std::invalid_argument("l(t) needs eps > 0");
  traj_ = std::make_shared<const Trajectory>(solve_cauchy(a, eps, t_max, tol));
}

TimeDomain LFunction::domain() const {
  bool blew = traj_->status == TrajectoryStatus::BlewUp;
  return TimeDomain{0.0L, junction_ + traj_->event_time, false, !blew};
}

Sample LFunction::operator()(Real t) const {
  if (!(t > 0.0L)) throw std::domain_error("l(t) needs t > 0");
  if (t <= junction_) return Sample{static_cast<Real>(eps_), 0.0L};
  const Real s = t - junction_;
  const auto& ts = traj_->t;
  const auto& ys = traj_->y;
  bool blew = traj_->status == TrajectoryStatus::BlewUp;
  if (s > ts.back() || (blew && s >= ts.back()))
    throw std::domain_error("l(t): t beyond the existence window");
  std::size_t i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), s) - ts.begin());
  i = i == 0 ? 0 : i - 1;
  const Real A = a_;
  Real s0 = ts[i], y0 = ys[i];
  Real y;
  if (s == s0) {
    y = y0;
  } else {
    bool inv = y0 > 1.0L;
    Real v = inv ? 1.0L / y0 : y0;
    const int sub = 32;
    Real h = (s - s0) / sub;
    for (int k = 0; k < sub; ++k) v = rk4_step(A, s0 + k * h, v, h, inv);
    y = inv ? 1.0L / v : v;
  }
  return Sample{y, riccati_rhs(A, s, y)};
}

LFunction build_l(double a, double eps, double t_max) { return LFunction(a, eps, t_max); }

std::function<double(double)> comparison_log_linear(double a, double f0, double t0) {
  return [=](double t) { return f0 * std::exp(a * (t - t0)); };
}

std::function<double(double)> comparison_log_forced(double a, double m, double f0, double tn) {
  if (a == 0.0) throw std::invalid_argument("forced comparison needs a != 0");
  return [=](double t) {
    long double num = std::expm1(-static_cast<long double>(a) * tn);
    long double den = std::expm1(-static_cast<long double>(a) * t);
    return static_cast<double>(std::exp(static_cast<long double>(a) * (t - tn)) * f0 +
                               0.5L * m * std::exp(static_cast<long double>(a) * t) *
                                   std::log(num / den));
  };
}

double comparison_log_constant(double a, double m, double f0, double tn) {
  if (a == 0.0) throw std::invalid_argument("forced comparison needs a != 0");
  long double e = std::expm1(-static_cast<long double>(a) * tn);
  return static_cast<double>(0.5L * m * std::log(std::fabs(e)) +
                             std::exp(-static_cast<long double>(a) * tn) * f0);
}

double PowerComparison::vanishing_time() const {
  return t0 - std::pow(u0, 1.0 - p1) / (a1 * (1.0 - p1));
}

double PowerComparison::operator()(double t) const {
  double tv = vanishing_time();
  if (t <= tv) return 0.0;
  return std::pow(a1 * (1.0 - p1) * (t - tv), 1.0 / (1.0 - p1));
}

PowerComparison comparison_power(double a1, double p1, double u0, double t0) {
  if (!(p1 < 1.0)) throw std::invalid_argument("comparison_power needs p1 < 1");
  if (!(a1 > 0.0)) throw std::invalid_argument("comparison_power needs a1 > 0");
  if (!(u0 >= 0.0)) throw std::invalid_argument("comparison_power needs u0 >= 0");
  return PowerComparison{a1, p1, u0, t0};
}

double u0_reference(double a1, double p1, double t) {
  if (!(p1 < 1.0)) throw std::invalid_argument("u0_reference needs p1 < 1");
  if (t <= 0.0) return 0.0;
  return std::pow(a1 * (1.0 - p1) * t, 1.0 / (1.0 - p1));
}

double liouville_F_log(double a, double m, double f, double t) {
  long double at = static_cast<long double>(a) * t;
  return static_cast<double>(std::exp(-at) * f + 0.5L * m * std::log(std::fabs(std::expm1(-at))));
}

}  // namespace harnack
