#pragma once

// Auxiliary ODEs: the epsilon-family Riccati Cauchy problem
//   y' = y (y + 1) (-a) 3 (e^{-as} - 1) / (3 e^{-as} - 1),  y(0) = eps,  a < 0
// with blow-up detection, the piecewise function l(t) built from it, and
// the closed-form comparison solutions used by the Liouville arguments.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "harnack/time_function.hpp"

namespace harnack {

enum class TrajectoryStatus { Completed, BlewUp, LeftDomain };

std::string to_string(TrajectoryStatus s);

struct MethodMeta {
  std::string method;
  double rtol = 0.0;
  double atol = 0.0;
  double threshold = 0.0;  // blow-up threshold on |y|
  long accepted = 0;
  long rejected = 0;
  double h_min = 0.0;
  double h_max = 0.0;
};

struct Trajectory {
  std::vector<Real> t;
  std::vector<Real> y;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  Real event_time = 0.0L;  // blow-up time estimate (A_eps) or end time
  MethodMeta meta;
};

Real riccati_rhs(Real a, Real s, Real y);

// Adaptive Dormand-Prince 5(4). Blow-up is declared when |y| passes
// `threshold`; the crossing time is then bisected to relative 1e-12.
Trajectory solve_cauchy(double a, double eps, double t_max, double tol = 1e-10,
                        double threshold = 1e8);

// Fixed-step classical RK4 reference integrator. Above y = 1 it integrates
// w = 1/y (w' = -(1 + w) G(s), linear) so the approach to blow-up stays
// resolved; the threshold crossing is located inside the final step.
Trajectory solve_cauchy_rk4(double a, double eps, double t_max, double h,
                            double threshold = 1e8);

struct AEpsPoint {
  double eps = 0.0;
  Real a_eps = 0.0L;
  bool capped = false;  // no blow-up before t_max: a_eps is a lower bound
};

// One independent trajectory per eps, run concurrently; results keep input order.
std::vector<AEpsPoint> a_eps_curve(double a, const std::vector<double>& eps_list, double t_max,
                                   double tol = 1e-10);

// Step length of the local-existence argument: 1/(48(-a)).
Real delta0(double a);

// Number N of delta0-steps the continuation argument certifies from the
// trajectory (every y(i delta0) <= 1/4 for i < N) and whether A_eps >= N delta0.
struct ContinuationCheck {
  long steps = 0;
  Real certified_time = 0.0L;
  Real a_eps = 0.0L;
  bool holds = false;
};
ContinuationCheck continuation_check(const Trajectory& traj, double a);

// l(t) = eps on (0, ln3/(-a)], y(t - ln3/(-a)) afterwards; domain
// (0, ln3/(-a) + A_eps). Values past the junction come from re-integrating
// with RK4 from the nearest stored sample, so l is smooth between samples;
// l' is the exact right-hand side at that value.
class LFunction {
 public:
  LFunction(double a, double eps, double t_max = 60.0, double tol = 1e-10);

  Sample operator()(Real t) const;
  Real junction() const { return junction_; }
  Real a_eps() const { return traj_->event_time; }
  bool capped() const { return traj_->status != TrajectoryStatus::BlewUp; }
  TimeDomain domain() const;
  const Trajectory& trajectory() const { return *traj_; }
  double a() const { return a_; }
  double eps() const { return eps_; }

 private:
  double a_;
  double eps_;
  Real junction_;
  std::shared_ptr<const Trajectory> traj_;
};

LFunction build_l(double a, double eps, double t_max = 60.0);

// v(t) = f0 e^{a (t - t0)}
std::function<double(double)> comparison_log_linear(double a, double f0, double t0);
// v(t) = e^{a (t - tn)} f0 + (m/2) e^{at} ln((e^{-a tn} - 1)/(e^{-at} - 1))
std::function<double(double)> comparison_log_forced(double a, double m, double f0, double tn);
// constant c in the equivalent form v(t) = -(m/2) e^{at} ln|1 - e^{-at}| + c e^{at}
double comparison_log_constant(double a, double m, double f0, double tn);

// Spatially constant solution of v' = a1 v^{p1} through (t0, u0), p1 < 1,
// a1 > 0; zero before its vanishing time.
struct PowerComparison {
  double a1 = 1.0;
  double p1 = 0.0;
  double u0 = 1.0;
  double t0 = 0.0;

  double vanishing_time() const;
  double operator()(double t) const;
};
PowerComparison comparison_power(double a1, double p1, double u0, double t0);
double u0_reference(double a1, double p1, double t);

// e^{-at} f + (m/2) ln|e^{-at} - 1|
double liouville_F_log(double a, double m, double f, double t);

}  // namespace harnack
