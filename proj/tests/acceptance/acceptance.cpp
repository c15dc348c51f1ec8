// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Pass --verbose for per-item detail.

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "catalog_table.hpp"
#include "harnack/catalog.hpp"
#include "harnack/ode_lab.hpp"
#include "harnack/paths.hpp"
#include "harnack/pde_lab.hpp"
#include "harnack/system_check.hpp"
#include "oracles.hpp"

using namespace harnack;

namespace {

bool verbose = false;
int failures = 0;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char* fmt, ...) {
  if (!verbose) return;
  va_list ap;
  va_start(ap, fmt);
  std::printf("    ");
  std::vprintf(fmt, ap);
  std::printf("\n");
  va_end(ap);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_finite(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, x);
  return m;
}

double max_abs_finite(const std::vector<double>& v) {
  double m = 0;
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, std::fabs(x));
  return m;
}

// ------------------------------------------------------------------ 1

void catalog_certification() {
  auto t0 = Clock::now();
  const auto f_grid = linear_grid(-10, 10, 21);
  int rows = 0, bad = 0;
  std::string first_bad;
  for (const auto& row : table::catalog_rows()) {
    CatalogEntry e = resolve_catalog(row.id, row.p);
    auto t_grid = e.default_t_grid(200);
    std::vector<Branch> branches =
        e.system == SystemKind::A3 && !e.branches.empty() ? e.branches : std::vector<Branch>{Branch::None};
    for (Branch b : branches) {
      ++rows;
      auto r = check_system(e.cand, e.eq, e.params, e.system, b, t_grid, f_grid);
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& c : r.constraints) worst = std::min(worst, static_cast<double>(c.min_margin));
      bool ok = r.verdict == Verdict::Pass;
      std::string label = row.id + (row.label.empty() ? "" : "[" + row.label + "]") + " " +
                          to_string(e.system) + "/" + to_string(b);
      if (!ok) {
        ++bad;
        if (first_bad.empty()) first_bad = label;
        std::printf("    red: %s %s min margin %.6g (%s)\n", label.c_str(), to_string(r.verdict).c_str(),
                    worst, r.failing.empty() ? "-" : r.failing.front().c_str());
      } else {
        note("%s ok, min margin %.3g", label.c_str(), worst);
      }
    }
  }
  double dt = seconds_since(t0);
  report(1, bad == 0 && dt < 60,
         std::to_string(rows - bad) + "/" + std::to_string(rows) + " rows pass, " + fmt("%.1f s", dt));
}

// ------------------------------------------------------------------ 2

void lemma_identity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10, 10), pos(0.01, 10), unit(0, 1);
  // 10^4 random quintuple/reaction values: absolute agreement
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    QuintupleSample q;
    q.gamma = {pos(rng), u(rng)};
    q.alpha = {pos(rng), u(rng)};
    q.phi = {u(rng), u(rng)};
    q.c = {u(rng), u(rng)};
    ReactionTerm r{u(rng), u(rng), u(rng), false};
    MarginValues v = margins_from_values(q, r, pos(rng), pos(rng));
    worst = std::max(worst, static_cast<double>(std::fabs(v.a1_first - v.a1_first_lemma)));
  }
  // catalog samples reach |margin| ~ 1e9 (e^{-2f} reactions at f = -10), so
  // these are compared relative to max(1, |margin|)
  const auto rows = table::catalog_rows();
  double worst_rel = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& row = rows[static_cast<std::size_t>(unit(rng) * rows.size()) % rows.size()];
    CatalogEntry e = resolve_catalog(row.id, row.p);
    auto tg = e.default_t_grid(2);
    double t = std::exp(std::log(tg.front()) + unit(rng) * std::log(tg.back() / tg.front()));
    double f = u(rng);
    if (e.cand.f_window) {
      double lo = std::max(-10.0, e.cand.f_window->first), hi = std::min(10.0, e.cand.f_window->second);
      f = lo + unit(rng) * (hi - lo);
    }
    Real m1 = margin_A1_first(e.cand, e.eq, e.params, t, f);
    Real m2 = margin_A1_first_lemma(e.cand, e.eq, e.params, t, f);
    double rel = static_cast<double>(std::fabs(m1 - m2) / std::max(1.0L, std::fabs(m1)));
    worst_rel = std::max(worst_rel, rel);
  }
  report(2, worst <= 1e-12 && worst_rel <= 1e-15,
         fmt("max |definition - lemma| = %.3g over 10^4 random inputs, ", worst) +
             fmt("catalog samples rel %.3g", worst_rel));
}

// ------------------------------------------------------------------ 3

void exact_residual() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.25, 2), ux(-2, 2), ut(0.1, 3), uc(-1, 1);
  double worst_res = 0, worst_gap = 0;
  for (int i = 0; i < 1000; ++i) {
    double a = (i % 2 ? 1 : -1) * ua(rng);
    int n = 1 + (i / 2) % 2;
    ExactLogSolution s{a, n, {ux(rng), ux(rng)}, uc(rng)};
    std::array<double, 2> x{ux(rng), n == 2 ? ux(rng) : 0.0};
    double t = ut(rng);
    worst_res = std::max(worst_res, std::fabs(exact_log_residual(s, x, t)));
    worst_gap = std::max(worst_gap, std::fabs(exact_log_sharp_gap(s, x, t)));
  }
  // discrete gap at h and h/2
  double worst_order = 2;
  for (double a : {1.0, -1.0}) {
    ExactLogSolution s{a, 1, {0.2, 0}, 0.1};
    double e1 = 0, e2 = 0;
    for (double x : {-1.0, -0.4, 0.3, 0.9})
      for (double t : {0.7, 1.3}) {
        e1 = std::max(e1, std::fabs(exact_log_sharp_gap_fd(s, {x, 0}, t, 0.02, 0.02)));
        e2 = std::max(e2, std::fabs(exact_log_sharp_gap_fd(s, {x, 0}, t, 0.01, 0.01)));
      }
    double ord = oracle::order(e1, e2);
    note("a=%g discrete gap %.3g -> %.3g, order %.3f", a, e1, e2, ord);
    if (std::fabs(ord - 2) > std::fabs(worst_order - 2)) worst_order = ord;
  }
  bool ok = worst_res <= 1e-10 && worst_gap <= 1e-10 && std::fabs(worst_order - 2) <= 0.3;
  report(3, ok, fmt("residual %.3g, ", worst_res) + fmt("analytic gap %.3g, ", worst_gap) +
                    fmt("discrete order %.3f", worst_order));
}

// ------------------------------------------------------------------ 4

void sharp_equality() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(0.25, 2), ut(0.1, 3), ux(-2, 2);
  double worst_eq = 0, min_perturbed = std::numeric_limits<double>::infinity();
  int tuples = 0;
  while (tuples < 100) {
    double a = (tuples % 2 ? 1 : -1) * ua(rng);
    int n = 1 + tuples % 2;
    double t1 = ut(rng), t2 = ut(rng);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 < 1e-2) continue;
    Point x1{ux(rng), n == 2 ? ux(rng) : 0}, x2{ux(rng), n == 2 ? ux(rng) : 0};
    auto r = verify_sharp_harnack(a, n, t1, t2, x1, x2);
    worst_eq = std::max(worst_eq, std::fabs(r.slack));
    Point x0 = r.x0;
    x0[0] += 0.25;
    min_perturbed = std::min(min_perturbed, verify_sharp_harnack(a, n, t1, t2, x1, x2, x0).slack);
    ++tuples;
  }
  report(4, worst_eq <= 1e-10 && min_perturbed > 0,
         fmt("max |slack| at x0 %.3g, ", worst_eq) + fmt("min perturbed slack %.3g", min_perturbed));
}

// ------------------------------------------------------------------ 5

struct FRun {
  GridSpec grid;
  std::vector<std::vector<double>> F;
  double maxF = 0;
};

FRun harnack_run(const Equation& eq, const CandidateFunctions& cand, const CurvatureParams& p,
                 std::size_t N) {
  FRun r;
  r.grid.points = {N, 1};
  Field u0 = make_field(r.grid, [](double x, double) { return std::exp(0.5 * std::cos(x)); });
  double dt = 0.05 / std::ceil(0.05 / max_stable_dt(r.grid));
  SimOptions o;
  for (int k = 1; k <= 20; ++k) o.stencil_times.push_back(0.05 * k);
  auto sim = simulate(eq, u0, 1.0 + dt, dt, o);
  r.maxF = -std::numeric_limits<double>::infinity();
  for (const auto& st : sim.stencils) {
    r.F.push_back(harnack_F(cand, eq, p, st[0], st[1], st[2]));
    r.maxF = std::max(r.maxF, max_finite(r.F.back()));
  }
  return r;
}

double tol_from(const FRun& c, const FRun& f) {
  double d = 0;
  for (std::size_t k = 0; k < c.F.size(); ++k)
    d = std::max(d, refinement_difference(c.grid, c.F[k], f.grid, f.F[k]));
  return 10 * d;
}

void simulation_harnack() {
  auto t0 = Clock::now();
  CurvatureParams p{1, 0, 1};
  struct Case {
    std::string name;
    Equation eq;
    CandidateFunctions cand;
  };
  std::vector<Case> cases;
  cases.push_back({"heat", Equation::linear(0), make_power_li_yau(p, 1.0)});
  for (double a : {1.0, -1.0})
    cases.push_back({a > 0 ? "log a=1" : "log a=-1", Equation::logarithmic(a),
                     make_log_family(LogKind::SharpCompact, p, a)});
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    FRun r1 = harnack_run(c.eq, c.cand, p, 256);
    FRun r2 = harnack_run(c.eq, c.cand, p, 512);
    FRun r3 = harnack_run(c.eq, c.cand, p, 1024);
    double tol1 = tol_from(r1, r2), tol2 = tol_from(r2, r3);
    double shrink = tol1 / tol2;
    bool good = r1.maxF <= tol1 && shrink >= 3;
    ok = ok && good;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s max F %.3g <= tol %.3g (x%.2f); ", c.name.c_str(), r1.maxF,
                  tol1, shrink);
    detail += buf;
  }
  double dt = seconds_since(t0);
  report(5, ok && dt < 120, detail + fmt("%.1f s", dt));
}

// ------------------------------------------------------------------ 6

void eps_continuation() {
  const double a = -1;
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  auto curve = a_eps_curve(a, eps, 60.0);
  bool increasing = true, above = true, agree = true;
  double worst_rel = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (curve[i].capped) increasing = false;
    if (i > 0 && !(curve[i].a_eps > curve[i - 1].a_eps)) increasing = false;
    auto dp = solve_cauchy(a, eps[i], 60.0);
    auto cc = continuation_check(dp, a);
    if (!(cc.holds && curve[i].a_eps >= cc.certified_time && cc.steps >= 1)) above = false;
    auto rk = solve_cauchy_rk4(a, eps[i], 60.0, 1e-3);
    double rel = static_cast<double>(std::fabs(rk.event_time - dp.event_time) / dp.event_time);
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-6) agree = false;
    note("eps=%g A=%.10Lf N=%ld N*delta0=%.4Lf rk4=%.10Lf", eps[i], curve[i].a_eps, cc.steps,
         cc.certified_time, rk.event_time);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "A_eps %.4Lf %.4Lf %.4Lf %.4Lf, DP45 vs RK4 rel %.2g",
                curve[0].a_eps, curve[1].a_eps, curve[2].a_eps, curve[3].a_eps, worst_rel);
  report(6, increasing && above && agree, buf);
}

// ------------------------------------------------------------------ 7

void liouville_monotone() {
  GridSpec g;
  g.points = {256, 1};
  Field u0 = make_field(g, [](double x, double) { return std::exp(0.5 * std::cos(x)); });
  SimOptions o;
  o.record_every = 10;
  double worst = std::numeric_limits<double>::infinity();
  auto heat = simulate(Equation::linear(0), u0, 1.0, max_stable_dt(g), o);
  worst = std::min(worst, monotone_checks(heat.snapshots, MonotoneQuantity::TPowHalfU, 1, 0, 1e-4).min_slack);
  for (double a : {1.0, -1.0}) {
    auto lg = simulate(Equation::logarithmic(a), u0, 1.0, max_stable_dt(g), o);
    worst = std::min(worst, monotone_checks(lg.snapshots, MonotoneQuantity::FLog, 1, a, 1e-4).min_slack);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.25, 2), ux(-2, 2), ut(0.1, 3), uc(-1, 1);
  double worst_exact = 0;
  for (int i = 0; i < 1000; ++i) {
    double a = (i % 2 ? 1 : -1) * ua(rng);
    int n = 1 + (i / 2) % 2;
    ExactLogSolution s{a, n, {ux(rng), ux(rng)}, uc(rng)};
    std::array<double, 2> x{ux(rng), n == 2 ? ux(rng) : 0.0};
    double t = ut(rng);
    double r2 = 0;
    for (int k = 0; k < n; ++k) r2 += (x[k] - s.x0[k]) * (x[k] - s.x0[k]);
    double expect = s.C + a * r2 / (4 * (1 - std::exp(a * t)));
    worst_exact = std::max(worst_exact, std::fabs(liouville_F_log(a, n, s.log_u(x, t), t) - expect));
  }
  report(7, worst >= -1e-4 && worst_exact <= 1e-10,
         fmt("min discrete slack %.3g, ", worst) + fmt("exact-family deviation %.3g", worst_exact));
}

// ------------------------------------------------------------------ 8

double power_min_slack(std::size_t N) {
  GridSpec g;
  g.points = {N, 1};
  Field u0 = make_field(g, [](double x, double) { return std::exp(0.5 * std::cos(x)); });
  double dt = 0.05 / std::ceil(0.05 / max_stable_dt(g));
  SimOptions o;
  o.record_every = static_cast<int>(std::lround(0.05 / dt));
  auto sim = simulate(Equation::power_sum({{1.0, 0.5}}), u0, 1.0, dt, o);
  std::vector<Field> states;
  for (const auto& s : sim.snapshots)
    if (s.t > 0) states.push_back(s);
  return liyau_power_check(1, states, 0).min_slack;
}

void power_bound() {
  double s1 = power_min_slack(256), s2 = power_min_slack(512);
  double tol = std::max(10 * std::fabs(s1 - s2), 1e-12);
  bool bound_ok = s1 >= -tol;

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(0.2, 3), up(-2, 0.8), uu(0.1, 5), ut(0, 5);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    double a1 = ua(rng), p1 = up(rng), u0 = uu(rng), t0 = ut(rng);
    // oracle: the reference profile u0_ref(s) = ((1-p1) a1 s)^{1/(1-p1)} reaches u0 after s*
    auto g = [&](double s) { return std::pow((1 - p1) * a1 * s, 1 / (1 - p1)) - u0; };
    double hi = 1;
    while (g(hi) < 0) hi *= 2;
    std::uintmax_t it = 200;
    auto br = boost::math::tools::toms748_solve(g, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), it);
    double s_star = 0.5 * (br.first + br.second);
    double tv = comparison_power(a1, p1, u0, t0).vanishing_time();
    worst = std::max(worst, std::fabs(tv - (t0 - s_star)) / std::max(1.0, std::fabs(t0 - s_star)));
  }
  report(8, bound_ok && worst <= 1e-12,
         fmt("min slack %.3g ", s1) + fmt(">= -tol %.3g, ", tol) + fmt("vanishing time dev %.3g", worst));
}

// ------------------------------------------------------------------ 9

void evolution_identity() {
  CurvatureParams p{1, 0, 1};
  bool ok = true;
  std::string detail;
  for (double a : {1.0, -1.0}) {
    auto cand = make_log_family(LogKind::SharpCompact, p, a);
    ExactLogSolution s{a, 1, {0.3, 0}, 0.2};
    std::vector<double> errs;
    for (std::size_t N : {32, 64, 128, 256}) {
      GridSpec g;
      g.boundary = Boundary::Open;
      g.extent = {2, 1};
      g.origin = {-1, 0};
      g.points = {N, 1};
      auto st = sample_exact_log(s, g, 1.0, g.h(0), 2);
      errs.push_back(max_abs_finite(evolution_identity_residual(Equation::logarithmic(a), st, cand)));
    }
    detail += a > 0 ? "a=1 orders" : "a=-1 orders";
    for (std::size_t k = 1; k < errs.size(); ++k) {
      double ord = oracle::order(errs[k - 1], errs[k]);
      if (std::fabs(ord - 2) > 0.3) ok = false;
      detail += fmt(" %.2f", ord);
    }
    detail += "; ";
  }
  report(9, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--verbose") == 0) verbose = true;
  catalog_certification();
  lemma_identity();
  exact_residual();
  sharp_equality();
  simulation_harnack();
  eps_continuation();
  liouville_monotone();
  power_bound();
  evolution_identity();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
