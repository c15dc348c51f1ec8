#include "harnack/paths.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace harnack {

namespace {

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  if (hi == lo) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12);
}

double norm(const Point& p, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

void require_times(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > t1)) throw std::invalid_argument("need 0 < t1 < t2");
}

// alpha and gamma as constants, or throw
std::pair<double, double> constant_alpha_gamma(const CandidateFunctions& cand, double t1, double t2) {
  Sample a0 = cand.alpha(t1), g0 = cand.gamma(t1);
  for (int k = 0; k <= 8; ++k) {
    Real t = t1 + (t2 - t1) * k / 8.0L;
    Sample a = cand.alpha(t), g = cand.gamma(t);
    bool flat = a.deriv == 0.0L && g.deriv == 0.0L &&
                std::fabs(a.value - a0.value) <= 1e-14L * std::fabs(a0.value) &&
                std::fabs(g.value - g0.value) <= 1e-14L * std::fabs(g0.value);
    if (!flat)
      throw std::invalid_argument(cand.name +
                                  ": alpha or gamma varies in time; use path_integral_rhs");
  }
  return {static_cast<double>(a0.value), static_cast<double>(g0.value)};
}

}  // namespace

void PathSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("path dim must be 1 or 2");
  require_times(t1, t2);
  if (profile == SpeedProfile::Sampled) {
    if (samples.size() < 2) throw std::invalid_argument("sampled path needs at least 2 points");
    if (samples.front() != x1 || samples.back() != x2)
      throw std::invalid_argument("sampled path must start at x1 and end at x2");
  }
}

double PathSpec::displacement() const {
  Point d{x2[0] - x1[0], x2[1] - x1[1]};
  return norm(d, dim);
}

double harnack_rhs_log(const CandidateFunctions& cand, double a, double t1, double t2, double dist) {
  if (a == 0.0) throw std::invalid_argument("harnack_rhs_log needs a != 0");
  require_times(t1, t2);
  if (!(dist >= 0.0)) throw std::invalid_argument("distance must be >= 0");
  auto [al, gam] = constant_alpha_gamma(cand, t1, t2);

  double phi_term;
  auto it_a = cand.param_meta.find("a");
  auto it_m = cand.param_meta.find("m");
  if (cand.name == "log.sharp_compact" && it_a != cand.param_meta.end() && it_a->second == a &&
      it_m != cand.param_meta.end()) {
    long double A = a;
    long double d1 = -std::expm1(-A * t1), d2 = -std::expm1(-A * t2);
    phi_term = static_cast<double>(-0.5L * it_m->second * std::log(d2 / d1) / al);
  } else {
    phi_term = integrate(
        [&](double t) {
          return -std::exp(-a * t) * static_cast<double>(cand.phi(t).value) / al;
        },
        t1, t2);
  }
  long double den = std::exp(static_cast<long double>(a) * t2) - std::exp(static_cast<long double>(a) * t1);
  double path_term = static_cast<double>(al / (4.0L * gam) * a * dist * dist / den);
  return phi_term - path_term;
}

std::function<double(double)> optimal_speed(double a, double t1, double t2, double L) {
  require_times(t1, t2);
  if (a == 0.0) return [=](double) { return L / (t2 - t1); };
  double den = std::exp(a * t2) - std::exp(a * t1);
  return [=](double t) { return a * L * std::exp(a * t) / den; };
}

double min_energy(double a, double t1, double t2, double L) {
  require_times(t1, t2);
  if (a == 0.0) return L * L / (t2 - t1);
  return a * L * L / (std::exp(a * t2) - std::exp(a * t1));
}

namespace {

// Integrates w(t) g(t, speed) over the path, segment by segment.
double along_path(const PathSpec& path, double a,
                  const std::function<double(double, double)>& integrand) {
  path.validate();
  double d = path.displacement();
  switch (path.profile) {
    case SpeedProfile::Constant: {
      double s = d / (path.t2 - path.t1);
      return integrate([&](double t) { return integrand(t, s); }, path.t1, path.t2);
    }
    case SpeedProfile::Exponential: {
      auto sp = optimal_speed(a, path.t1, path.t2, d);
      return integrate([&](double t) { return integrand(t, sp(t)); }, path.t1, path.t2);
    }
    case SpeedProfile::Sampled: {
      std::size_t k = path.samples.size() - 1;
      double dt = (path.t2 - path.t1) / static_cast<double>(k);
      double total = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const Point& p = path.samples[i];
        const Point& q = path.samples[i + 1];
        double s = norm(Point{q[0] - p[0], q[1] - p[1]}, path.dim) / dt;
        double lo = path.t1 + i * dt, hi = i + 1 == k ? path.t2 : path.t1 + (i + 1) * dt;
        total += integrate([&](double t) { return integrand(t, s); }, lo, hi);
      }
      return total;
    }
  }
  return 0.0;
}

}  // namespace

double path_integral_rhs(const CandidateFunctions& cand, PathEquation kind, double a,
                         const PathSpec& path) {
  const double wa = kind == PathEquation::Log ? a : 0.0;
  return along_path(path, a, [&](double t, double s) {
    QuintupleSample q = evaluate(cand, t);
    double al = static_cast<double>(q.alpha.value), gam = static_cast<double>(q.gamma.value);
    double phi = static_cast<double>(q.phi.value);
    return std::exp(-wa * t) * (-phi / al - al / (4.0 * gam) * s * s);
  });
}

double path_energy(double a, const PathSpec& path) {
  return along_path(path, a, [&](double t, double s) { return std::exp(-a * t) * s * s; });
}

Point sharp_x0(double a, double t1, double t2, const Point& x1, const Point& x2, int dim) {
  if (a == 0.0) throw std::invalid_argument("sharp_x0 needs a != 0");
  if (!(t2 != t1)) throw std::invalid_argument("sharp_x0 needs t1 != t2");
  long double e1 = std::expm1(static_cast<long double>(a) * t1);
  long double e2 = std::expm1(static_cast<long double>(a) * t2);
  Point x0{0.0, 0.0};
  for (int i = 0; i < dim; ++i)
    x0[i] = static_cast<double>((e2 * x1[i] - e1 * x2[i]) / (e2 - e1));
  return x0;
}

SharpHarnackReport verify_sharp_harnack(double a, int n, double t1, double t2, const Point& x1,
                                        const Point& x2, std::optional<Point> x0) {
  if (a == 0.0) throw std::invalid_argument("verify_sharp_harnack needs a != 0");
  require_times(t1, t2);
  SharpHarnackReport rep;
  rep.x0 = x0 ? *x0 : sharp_x0(a, t1, t2, x1, x2, n);
  const long double A = a;
  // e^{-at} ln u = -a r^2/(4(e^{at} - 1)) - (n/2) ln|1 - e^{-at}| with C = 0
  auto weighted = [&](const Point& x, double t) {
    long double r2 = 0.0L;
    for (int i = 0; i < n; ++i) {
      long double d = static_cast<long double>(x[i]) - rep.x0[i];
      r2 += d * d;
    }
    long double e = std::expm1(A * t);
    return -A * r2 / (4.0L * e) - 0.5L * n * std::log(std::fabs(-std::expm1(-A * t)));
  };
  long double lhs = weighted(x2, t2) - weighted(x1, t1);
  long double d2 = 0.0L;
  for (int i = 0; i < n; ++i) {
    long double d = static_cast<long double>(x1[i]) - x2[i];
    d2 += d * d;
  }
  long double D1 = -std::expm1(-A * t1), D2 = -std::expm1(-A * t2);
  long double rhs = -0.5L * n * std::log(D2 / D1) -
                    A * d2 / (4.0L * (std::expm1(A * t2) - std::expm1(A * t1)));
  rep.lhs = static_cast<double>(lhs);
  rep.rhs = static_cast<double>(rhs);
  rep.slack = static_cast<double>(lhs - rhs);
  rep.equality = std::fabs(rep.slack) <= 1e-10;
  rep.holds = rep.slack >= -1e-10;
  return rep;
}

double grid_distance(const GridSpec& g, const Point& p, const Point& q) {
  double s = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    double d = std::fabs(p[ax] - q[ax]);
    if (g.boundary == Boundary::Periodic) {
      double L = g.extent[ax];
      d = std::fmod(d, L);
      d = std::min(d, L - d);
    }
    s += d * d;
  }
  return std::sqrt(s);
}

PairReport harnack_pairs(const CandidateFunctions& cand, PathEquation kind, double a,
                         const Field& s1, const Field& s2, std::size_t n_pairs, std::uint64_t seed,
                         double tol) {
  if (!s1.grid.same_as(s2.grid)) throw std::invalid_argument("snapshots on different grids");
  require_times(s1.t, s2.t);
  const GridSpec& g = s1.grid;
  const std::size_t nx = g.points[0];
  auto coords = [&](std::size_t idx) {
    Point p{g.coord(0, idx % nx), 0.0};
    if (g.dim == 2) p[1] = g.coord(1, idx / nx);
    return p;
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  PairReport rep;
  rep.tol = tol;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_pairs; ++k) {
    PairResult pr;
    pr.node1 = pick(rng);
    pr.node2 = pick(rng);
    pr.dist = grid_distance(g, coords(pr.node1), coords(pr.node2));
    double f1 = std::log(s1.u[pr.node1]), f2 = std::log(s2.u[pr.node2]);
    if (kind == PathEquation::Log) {
      pr.lhs = std::exp(-a * s2.t) * f2 - std::exp(-a * s1.t) * f1;
      pr.rhs = harnack_rhs_log(cand, a, s1.t, s2.t, pr.dist);
    } else {
      PathSpec path;
      path.x2 = {pr.dist, 0.0};
      path.t1 = s1.t;
      path.t2 = s2.t;
      pr.lhs = f2 - f1;
      pr.rhs = path_integral_rhs(cand, PathEquation::Power, 0.0, path);
    }
    pr.slack = pr.lhs - pr.rhs;
    rep.min_slack = std::min(rep.min_slack, pr.slack);
    rep.pairs.push_back(pr);
  }
  std::stable_partition(rep.pairs.begin(), rep.pairs.end(),
                        [&](const PairResult& p) { return p.slack < -tol; });
  rep.pass = rep.min_slack >= -tol;
  return rep;
}

}  // namespace harnack
