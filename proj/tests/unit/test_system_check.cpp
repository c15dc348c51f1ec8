#include <doctest.h>

#include <cmath>
#include <random>

#include "catalog_table.hpp"
#include "harnack/catalog.hpp"
#include "harnack/system_check.hpp"

using namespace harnack;
using doctest::Approx;

namespace {

const CurvatureParams kP4{4, 0, 1};

CandidateFunctions li_yau4() {
  FamilyExtras e;
  e.alpha = 2;
  return make_heat_family(HeatKind::LiYauDavies, kP4, e);
}

double d(Real v) { return static_cast<double>(v); }

}  // namespace

TEST_CASE("A1 margins for heat Li-Yau at m=4, K=0, alpha=2") {
  auto c = li_yau4();
  Equation heat = Equation::linear(0);
  CHECK(d(margin_A1_first(c, heat, kP4, 1.0L, 0.3)) == Approx(2).epsilon(1e-15));
  for (double t : {0.01, 1.0, 7.5})
    CHECK(std::fabs(d(margin_A1_second(c, heat, kP4, t, -2.0))) <= 1e-12 / (t * t));
  CHECK(d(margin_A1_third(c, heat, kP4, 1.0L, 5.0)) == Approx(4).epsilon(1e-15));
  CHECK(d(margin_A3_third(c, heat, kP4, 1.0L, 5.0)) == Approx(1).epsilon(1e-15));
}

TEST_CASE("sharp compact margins vanish identically") {
  for (double a : {0.5, 1.0, 3.0}) {
    CurvatureParams p{2, 0, 1};
    auto c = make_log_family(LogKind::SharpCompact, p, a);
    Equation eq = Equation::logarithmic(a);
    for (double t : {1e-3, 0.1, 1.0, 10.0})
      for (double f : {-10.0, 0.0, 4.0}) {
        CHECK(std::fabs(d(margin_A1_first(c, eq, p, t, f))) <= 1e-12);
        Real phi = c.phi(t).value;
        CHECK(std::fabs(d(margin_A1_second(c, eq, p, t, f))) <= 1e-15 * d(phi * phi));
      }
    CHECK(d(margin_A1_third(c, eq, p, std::log(2.0L), 1.0)) == Approx(2 * a / (1 - std::pow(2.0, -a)) - a).epsilon(1e-14));
  }
}

TEST_CASE("A3 third margin of the sharp negative family") {
  double a = -1;
  CatalogParams cp;
  cp.a = a;
  cp.K = 0;
  cp.m = 2;
  cp.eps = 0.1;
  CatalogEntry e = resolve_catalog("log.sharp_neg_family", cp);
  for (double t : {0.05, 0.5, 1.0, 2.0}) {
    double expect = -a / std::expm1(-a * t);
    CHECK(d(margin_A3_third(e.cand, e.eq, e.params, t, 0.7)) == Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("trivial margins") {
  CandidateFunctions c;
  c.name = "flat";
  auto k = [](Real v) { return TimeFunction([v](Real) { return Sample{v, 0}; }); };
  c.gamma = k(1);
  c.alpha = k(1);
  c.phi = k(0);
  c.c = k(0);
  c.beta = k(1);
  Equation heat = Equation::linear(0);
  CurvatureParams p{1, 0, 1};
  CHECK(d(margin_A1_first(c, heat, p, 1.0L, 0)) == 0);
  CHECK(d(margin_A1_second(c, heat, p, 1.0L, 0)) == 0);
  CHECK(d(margin_A1_third(c, heat, p, 1.0L, 0)) == 0);
  CHECK(d(margin_A3_third(c, heat, p, 1.0L, 0)) == 0);
  // strict third inequality fails at margin 0
  auto r = check_system(c, heat, p, SystemKind::A1, Branch::None, {0.5, 1.0}, {0.0});
  CHECK(r.verdict == Verdict::Fail);
  CHECK(std::find(r.failing.begin(), r.failing.end(), "a1_third") != r.failing.end());
}

TEST_CASE("branch conditions for heat Li-Yau and Li-Xu") {
  auto c = li_yau4();
  auto grid = log_grid(1e-3, 10, 100);
  CheckOptions o;
  o.eps = 1.0;
  for (const auto& s : check_condition_branch(c, Branch::I, grid, o)) {
    INFO(s.id);
    CHECK(s.verdict == Verdict::Pass);
  }
  o.eps = 2.0;
  bool failed = false;
  for (const auto& s : check_condition_branch(c, Branch::I, grid, o))
    failed = failed || s.verdict == Verdict::Fail;
  CHECK(failed);

  auto lx = make_heat_family(HeatKind::LiXu, {3, 1, 1});
  for (const auto& s : check_condition_branch(lx, Branch::III, grid)) {
    INFO(s.id << " " << s.detail);
    CHECK(s.verdict == Verdict::Pass);
  }
}

TEST_CASE("unbounded ratio still climbing at the grid end is inconclusive") {
  CandidateFunctions c;
  c.name = "growing";
  c.gamma = [](Real) { return Sample{1, 0}; };
  c.alpha = [](Real t) { return Sample{1 + 1 / (1 + t), -1 / ((1 + t) * (1 + t))}; };
  // beta/(alpha - gamma) = t (1 + t) keeps rising
  c.beta = [](Real t) { return Sample{t, 1}; };
  c.phi = [](Real t) { return Sample{1 / t, -1 / (t * t)}; };
  c.c = c.phi;
  auto subs = check_condition_branch(c, Branch::III, log_grid(1e-3, 10, 50));
  bool inconclusive = false;
  for (const auto& s : subs) inconclusive = inconclusive || s.verdict == Verdict::Inconclusive;
  CHECK(inconclusive);
}

TEST_CASE("A2 boundary checks") {
  auto sc = make_log_family(LogKind::SharpCompact, {2, 0, 1}, 1.0);
  for (const auto& s : check_A2_boundary(sc)) {
    INFO(s.id << " " << s.detail);
    CHECK(s.verdict == Verdict::Pass);
  }
  auto lx = make_heat_family(HeatKind::LiXu, {3, 1, 1});
  for (const auto& s : check_A2_boundary(lx)) CHECK(s.verdict == Verdict::Pass);

  CandidateFunctions c = sc;
  c.phi = [](Real) { return Sample{2, 0}; };
  bool phi_failed = false;
  for (const auto& s : check_A2_boundary(c))
    if (s.id == "a2.phi_divergence") phi_failed = s.verdict == Verdict::Fail;
  CHECK(phi_failed);
}

TEST_CASE("check_system compositions") {
  auto c = li_yau4();
  Equation heat = Equation::linear(0);
  auto tg = log_grid(1e-3, 10, 100);
  auto fg = linear_grid(-10, 10, 21);
  auto r = check_system(c, heat, kP4, SystemKind::A3, Branch::I, tg, fg);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.failing.empty());

  CurvatureParams p{1, 0, 1};
  auto sc = make_log_family(LogKind::SharpCompact, p, -1.0);
  Equation eq = Equation::logarithmic(-1.0);
  auto r3 = check_system(sc, eq, p, SystemKind::A3, Branch::None, tg, fg);
  CHECK(r3.verdict == Verdict::Fail);
  auto r2 = check_system(sc, eq, p, SystemKind::A2, Branch::None, tg, fg);
  CHECK(r2.verdict == Verdict::Pass);

  CHECK_THROWS_AS(check_system(c, heat, kP4, SystemKind::A3, Branch::I, {}, fg),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_system(c, heat, kP4, SystemKind::A3, Branch::I, {-1.0, 1.0}, fg),
                  std::domain_error);
}

TEST_CASE("property: definition and lemma forms of the first margin agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5), pos(0.05, 5);
  for (int i = 0; i < 2000; ++i) {
    QuintupleSample q;
    q.gamma = {pos(rng), u(rng)};
    q.alpha = {pos(rng), u(rng)};
    q.phi = {u(rng), u(rng)};
    q.c = {u(rng), u(rng)};
    ReactionTerm r{u(rng), u(rng), u(rng), false};
    MarginValues v = margins_from_values(q, r, pos(rng), pos(rng));
    CHECK(std::fabs(d(v.a1_first - v.a1_first_lemma)) <= 1e-12);
  }
}

TEST_CASE("property: min margins never increase under grid refinement") {
  for (const char* id : {"heat.li_xu", "log.li_xu_neg", "yamabe.case1_1.li_xu", "log.hamilton_pos"}) {
    CatalogParams p;
    p.a = std::string(id) == "log.li_xu_neg" ? -1 : 1;
    p.p = 2;
    CatalogEntry e = resolve_catalog(id, p);
    auto tg = e.default_t_grid(40);
    auto fg = linear_grid(-10, 10, 9);
    auto coarse = check_system(e.cand, e.eq, e.params, e.system, Branch::None, tg, fg);
    auto fine = check_system(e.cand, e.eq, e.params, e.system, Branch::None,
                             refine_grid(tg, true), refine_grid(fg, false));
    REQUIRE(coarse.constraints.size() == fine.constraints.size());
    for (std::size_t k = 0; k < coarse.constraints.size(); ++k) {
      INFO(id << " " << coarse.constraints[k].id);
      CHECK(fine.constraints[k].min_margin <= coarse.constraints[k].min_margin);
    }
    if (coarse.verdict == Verdict::Fail) CHECK(fine.verdict == Verdict::Fail);
  }
}

TEST_CASE("property: linear-equation margins do not depend on f") {
  for (const char* id : {"heat.li_yau", "heat.li_xu", "heat.linear_li_xu", "heat.hamilton"}) {
    CatalogEntry e = resolve_catalog(id, {});
    auto tg = e.default_t_grid(50);
    auto r = check_system(e.cand, e.eq, e.params, SystemKind::A3, Branch::None, tg,
                          linear_grid(-10, 10, 21));
    const std::size_t nf = r.f_grid.size();
    for (const auto& c : r.constraints) {
      if (c.values.size() != tg.size() * nf) continue;
      for (std::size_t i = 0; i < tg.size(); ++i)
        for (std::size_t j = 1; j < nf; ++j) CHECK(c.values[i * nf + j] == c.values[i * nf]);
    }
  }
}

TEST_CASE("grid helpers") {
  auto g = log_grid(1e-3, 10, 5);
  CHECK(g.front() == Approx(1e-3));
  CHECK(g.back() == Approx(10));
  CHECK(g[2] == Approx(0.1));
  auto r = refine_grid({1, 4}, true);
  REQUIRE(r.size() == 3);
  CHECK(r[1] == Approx(2));
  auto l = refine_grid({0, 1}, false);
  CHECK(l[1] == Approx(0.5));
  CHECK(parse_branch("any") == Branch::None);
  CHECK_THROWS_AS(parse_branch("IV"), std::invalid_argument);
  CHECK(parse_system_kind("A2") == SystemKind::A2);
}
