#include <doctest.h>

#include <cmath>
#include <random>

#include "harnack/catalog.hpp"
#include "harnack/paths.hpp"

using namespace harnack;
using doctest::Approx;

namespace {

CandidateFunctions sharp(double a, double m = 1) {
  return make_log_family(LogKind::SharpCompact, CurvatureParams{m, 0, 1}, a);
}

}  // namespace

TEST_CASE("harnack_rhs_log reference value") {
  double v = harnack_rhs_log(sharp(1), 1, std::log(2.0), std::log(4.0), 1.0);
  CHECK(v == Approx(-0.5 * std::log(1.5) - 0.125).epsilon(1e-12));
}

TEST_CASE("harnack_rhs_log closed form agrees with quadrature") {
  // same candidate with a mismatched meta tag falls back to Gauss-Kronrod
  for (double a : {0.7, -1.3}) {
    auto c = sharp(a, 2);
    auto q = c;
    q.name = "log.sharp_compact_copy";
    for (double d : {0.0, 0.5, 2.0})
      CHECK(harnack_rhs_log(c, a, 0.3, 1.9, d) ==
            Approx(harnack_rhs_log(q, a, 0.3, 1.9, d)).epsilon(1e-10));
  }
}

TEST_CASE("harnack_rhs_log limits and errors") {
  auto c = sharp(1);
  CHECK(std::fabs(harnack_rhs_log(c, 1, 1.0, 1.0 + 1e-9, 0.0)) < 1e-8);
  CHECK_THROWS_AS(harnack_rhs_log(c, 0, 1, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(harnack_rhs_log(c, 1, 2, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(harnack_rhs_log(c, 1, 1, 2, -1), std::invalid_argument);
  auto varying = make_heat_family(HeatKind::LiXu, CurvatureParams{2, 0.5, 1});
  CHECK_THROWS_AS(harnack_rhs_log(varying, 1, 1, 2, 0), std::invalid_argument);
}

TEST_CASE("power path integral with constant speed") {
  CurvatureParams p{1, 0, 1};
  auto c = make_power_li_yau(p, 1.0);  // alpha = gamma = 1, phi = 1/(2t)
  PathSpec path;
  path.x2 = {1.5, 0};
  path.t1 = 0.5;
  path.t2 = 2.0;
  double expect = -0.5 * std::log(4.0) - 1.5 * 1.5 / (4 * 1.5);
  CHECK(path_integral_rhs(c, PathEquation::Power, 0, path) == Approx(expect).epsilon(1e-10));
}

TEST_CASE("exponential path reproduces harnack_rhs_log") {
  for (double a : {1.0, -0.5}) {
    auto c = sharp(a, 3);
    PathSpec path;
    path.dim = 2;
    path.x2 = {0.6, -0.8};
    path.t1 = 0.4;
    path.t2 = 1.7;
    path.profile = SpeedProfile::Exponential;
    CHECK(path_integral_rhs(c, PathEquation::Log, a, path) ==
          Approx(harnack_rhs_log(c, a, 0.4, 1.7, 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("minimal energy") {
  CHECK(min_energy(1, std::log(2.0), std::log(4.0), 1) == Approx(0.5));
  CHECK(min_energy(1, 1, 2, 0) == 0);
  CHECK(min_energy(0, 1, 3, 2) == Approx(2));
}

TEST_CASE("property: every sampled path costs at least the minimal energy") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> jitter(0, 0.4);
  for (int trial = 0; trial < 200; ++trial) {
    double a = trial % 2 ? 0.8 : -1.2;
    PathSpec path;
    path.dim = 2;
    path.x1 = {0, 0};
    path.x2 = {1, 0.5};
    path.t1 = 0.3;
    path.t2 = 1.3;
    path.profile = SpeedProfile::Sampled;
    const int k = 16;
    for (int i = 0; i <= k; ++i) {
      double s = static_cast<double>(i) / k;
      Point q{s * path.x2[0], s * path.x2[1]};
      if (i > 0 && i < k) {
        q[0] += jitter(rng);
        q[1] += jitter(rng);
      }
      path.samples.push_back(q);
    }
    CHECK(path_energy(a, path) >= min_energy(a, path.t1, path.t2, path.displacement()) - 1e-12);
  }
  PathSpec opt;
  opt.x2 = {2, 0};
  opt.t1 = 0.5;
  opt.t2 = 1.5;
  opt.profile = SpeedProfile::Exponential;
  CHECK(path_energy(0.8, opt) == Approx(min_energy(0.8, 0.5, 1.5, 2)).epsilon(1e-10));
}

TEST_CASE("sampled path validation") {
  PathSpec p;
  p.profile = SpeedProfile::Sampled;
  p.samples = {{0, 0}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.samples = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("sharp equality point") {
  Point x0 = sharp_x0(1, std::log(2.0), std::log(4.0), {0, 0}, {1, 0});
  CHECK(x0[0] == Approx(-0.5));
  auto eq = verify_sharp_harnack(1, 1, std::log(2.0), std::log(4.0), {0, 0}, {1, 0}, Point{-0.5, 0});
  CHECK(eq.equality);
  auto off = verify_sharp_harnack(1, 1, std::log(2.0), std::log(4.0), {0, 0}, {1, 0}, Point{0, 0});
  CHECK(off.slack > 0);
  auto same = verify_sharp_harnack(1, 1, std::log(2.0), std::log(4.0), {0.4, 0}, {0.4, 0});
  CHECK(same.rhs == Approx(-0.5 * std::log(1.5)));
  CHECK(same.equality);
  Point same_x0 = sharp_x0(-0.7, 0.5, 1.5, {0.3, 0}, {0.3, 0});
  CHECK(same_x0[0] == Approx(0.3));
  CHECK_THROWS_AS(sharp_x0(0, 1, 2, {0, 0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("property: exact solutions attain the sharp inequality") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.25, 2), ut(0.1, 3), ux(-2, 2);
  for (int i = 0; i < 300; ++i) {
    double a = (i % 2 ? 1 : -1) * ua(rng);
    int n = 1 + i % 2;
    double t1 = ut(rng), t2 = ut(rng);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 < 1e-3) continue;
    Point x1{ux(rng), n == 2 ? ux(rng) : 0}, x2{ux(rng), n == 2 ? ux(rng) : 0};
    auto r = verify_sharp_harnack(a, n, t1, t2, x1, x2);
    CHECK(r.equality);
    Point shifted = r.x0;
    shifted[0] += 0.3;
    auto q = verify_sharp_harnack(a, n, t1, t2, x1, x2, shifted);
    CHECK(q.holds);
    if (x1 != x2) CHECK(q.slack > 0);
  }
  CHECK_THROWS_AS(verify_sharp_harnack(0, 1, 1, 2, {0, 0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("grid distance uses the minimal image") {
  GridSpec g;
  g.extent = {10, 1};
  g.points = {10, 1};
  CHECK(grid_distance(g, {1, 0}, {9, 0}) == Approx(2));
  g.boundary = Boundary::Neumann;
  CHECK(grid_distance(g, {1, 0}, {9, 0}) == Approx(8));
}

TEST_CASE("harnack pairs on simulated solutions") {
  GridSpec g;
  g.points = {128, 1};
  Field u0 = make_field(g, [](double x, double) { return std::exp(0.5 * std::cos(x)); });
  SimOptions o;
  o.record_every = 200;
  for (double a : {1.0, -1.0}) {
    double dt = max_stable_dt(g);
    auto sim = simulate(Equation::logarithmic(a), u0, 1.0, dt, o);
    REQUIRE(sim.snapshots.size() >= 3);
    const Field& s1 = sim.snapshots[1];
    const Field& s2 = sim.snapshots.back();
    auto rep = harnack_pairs(sharp(a), PathEquation::Log, a, s1, s2, 64, 42, 1e-6);
    CHECK(rep.pass);
    CHECK(rep.pairs.size() == 64);
    auto again = harnack_pairs(sharp(a), PathEquation::Log, a, s1, s2, 64, 42, 1e-6);
    CHECK(again.min_slack == rep.min_slack);
  }
  auto heat = simulate(Equation::power_sum({{1.0, 0.5}}), u0, 1.0, max_stable_dt(g), o);
  auto c = make_power_li_yau(CurvatureParams{1, 0, 1}, 1.0);
  auto rep = harnack_pairs(c, PathEquation::Power, 0, heat.snapshots[1], heat.snapshots.back(),
                           64, 7, 1e-6);
  CHECK(rep.pass);
}
