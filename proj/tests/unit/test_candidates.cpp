#include <doctest.h>

#include <cmath>

#include "catalog_table.hpp"
#include "harnack/candidates.hpp"
#include "harnack/catalog.hpp"
#include "harnack/system_check.hpp"
#include "oracles.hpp"

using namespace harnack;
using doctest::Approx;

namespace {

double val(const TimeFunction& f, double t) { return static_cast<double>(f(t).value); }

FamilyExtras with_alpha(double a) {
  FamilyExtras e;
  e.alpha = a;
  return e;
}

FamilyExtras with_delta(double d) {
  FamilyExtras e;
  e.delta = d;
  return e;
}

}  // namespace

TEST_CASE("heat Li-Yau/Davies at m=4, K=0, alpha=2") {
  auto c = make_heat_family(HeatKind::LiYauDavies, {4, 0, 1}, with_alpha(2));
  CHECK(val(c.phi, 1) == Approx(8).epsilon(1e-15));
  CHECK(val(c.c, 1) == Approx(4).epsilon(1e-15));
  CHECK(val(c.gamma, 1) == 1);
  CHECK(val(c.beta, 3) == Approx(3));
  CHECK_THROWS_AS(make_heat_family(HeatKind::LiYauDavies, {4, 0, 1}, with_alpha(1.0)),
                  ConstructionError);
}

TEST_CASE("heat Hamilton at m=4, K=0, delta=0.5, t=2") {
  auto c = make_heat_family(HeatKind::Hamilton, {4, 0, 1}, with_delta(0.5));
  CHECK(val(c.gamma, 2) == Approx(0.5));
  CHECK(val(c.phi, 2) == Approx(2).epsilon(1e-15));
  CHECK(val(c.c, 2) == Approx(2).epsilon(1e-15));
  CHECK_THROWS_AS(make_heat_family(HeatKind::Hamilton, {4, 0, 1}, with_delta(1.0)),
                  ConstructionError);
}

TEST_CASE("heat linear Li-Xu limits at t -> 0") {
  auto c = make_heat_family(HeatKind::LinearLiXu, {3, 1, 1});
  CHECK(val(c.alpha, 1e-9) == Approx(1).epsilon(1e-8));
  CHECK(val(c.beta, 1e-9) < 1e-8);
  CHECK_THROWS_AS(make_heat_family(HeatKind::LinearLiXu, {3, 0, 1}), ConstructionError);
}

TEST_CASE("heat Li-Xu alpha runs from 1 to 2") {
  auto c = make_heat_family(HeatKind::LiXu, {3, 1, 1});
  CHECK(val(c.alpha, 1e-7) == Approx(1).epsilon(1e-6));
  CHECK(val(c.alpha, 40) == Approx(2).epsilon(1e-9));
  // small-x branch against the plain formula at a moderate argument
  double x = 0.7;
  double plain = (std::sinh(x) * std::cosh(x) - x) / (std::sinh(x) * std::sinh(x));
  CHECK(static_cast<double>(li_xu_g(x)) == Approx(plain).epsilon(1e-14));
  double tiny = 1e-5;
  CHECK(static_cast<double>(li_xu_g(tiny)) == Approx(2.0 * tiny / 3.0).epsilon(1e-9));
}

TEST_CASE("log sharp families") {
  auto c = make_log_family(LogKind::SharpCompact, {2, 0, 1}, 1.0);
  CHECK(val(c.phi, std::log(2.0)) == Approx(2).epsilon(1e-15));
  CHECK(val(c.c, std::log(2.0)) == Approx(2).epsilon(1e-15));

  // alpha -> 1+ gives back the compact family pointwise
  auto sc = make_log_family(LogKind::SharpCompact, {3, 0, 1}, 1.0);
  for (double t : {0.01, 0.5, 3.0}) {
    auto pc = make_log_family(LogKind::SharpPosComplete, {3, 0, 1}, 1.0, with_alpha(1 + 1e-9));
    CHECK(val(pc.phi, t) == Approx(val(sc.phi, t)).epsilon(1e-8));
    CHECK(val(pc.c, t) == Approx(val(sc.c, t)).epsilon(1e-8));
  }
}

TEST_CASE("log Hamilton negative at m=4, K=0, delta=0.5, a=-8, t=1") {
  auto c = make_log_family(LogKind::HamiltonNeg, {4, 0, 1}, -8.0, with_delta(0.5));
  CHECK(val(c.phi, 1) == Approx(8).epsilon(1e-14));
}

TEST_CASE("power Li-Yau family at m=3, K=0, alpha=1.5, t=2") {
  auto c = make_power_li_yau({3, 0, 1}, 1.5);
  CHECK(val(c.gamma, 2) == 1);
  CHECK(val(c.beta, 2) == Approx(2));
  CHECK(val(c.phi, 2) == Approx(1.6875).epsilon(1e-15));
  CHECK(val(c.c, 2) == Approx(1.125).epsilon(1e-15));
}

TEST_CASE("k-scaling of the Case 1.2 functions") {
  auto base = make_yamabe_family(YamabeCase::C1_1, YamabeType::LiYau, {3, 0.5, 1}, 0, 1, 2, 1);
  auto s = k_scaled(base, 2.0);
  for (double t : {0.01, 1.0, 5.0}) {
    CHECK(val(s.alpha, t) == Approx(2 * val(base.alpha, t)));
    CHECK(val(s.phi, t) == Approx(4 * val(base.phi, t)));
    CHECK(val(s.c, t) == Approx(2 * val(base.c, t)));
    CHECK(val(s.beta, t) == Approx(val(base.beta, t)));
    CHECK(val(s.gamma, t) == Approx(val(base.gamma, t)));
  }
}

TEST_CASE("M = 0 Case 1.1 Li-Yau against heat Li-Yau") {
  // agreement holds at K = 0; with K > 0 the Yamabe entry uses its own
  // curvature constant
  FamilyExtras ex;
  ex.alpha = 2;
  auto y = make_yamabe_family(YamabeCase::C1_1, YamabeType::LiYau, {3, 0, 1}, 0, 1, 2, 0, ex);
  auto h = make_heat_family(HeatKind::LiYauDavies, {3, 0, 1}, ex);
  for (double t : {0.01, 0.3, 2.0, 9.0}) {
    CHECK(val(y.alpha, t) == Approx(val(h.alpha, t)));
    CHECK(val(y.phi, t) == Approx(val(h.phi, t)));
    CHECK(val(y.c, t) == Approx(val(h.c, t)));
  }
}

TEST_CASE("tabulated candidate") {
  auto ref = make_heat_family(HeatKind::LiYauDavies, {4, 0, 1}, with_alpha(2));
  std::vector<TabulatedRow> rows;
  for (double t : oracle::logspace(0.1, 10, 400))
    rows.push_back({t, 1.0, 2.0, 8.0 / t, t, 4.0 / t});
  auto tab = tabulated_candidate("tab", rows);
  for (double t : oracle::logspace(0.1, 10, 97)) {
    CHECK(std::fabs(val(tab.phi, t) - val(ref.phi, t)) <= 1e-3);
    CHECK(std::fabs(val(tab.c, t) - val(ref.c, t)) <= 1e-3);
  }
  CHECK(Tolerances::for_candidate(tab).eq == 1e-6);

  std::vector<TabulatedRow> flat;
  for (double t : {0.5, 1.0, 2.0, 3.0, 4.0}) flat.push_back({t, 1, 2, 3, t, 4});
  auto f = tabulated_candidate("flat", flat);
  CHECK(val(f.phi, 1.7) == Approx(3));
  CHECK(static_cast<double>(f.phi(1.7).deriv) == Approx(0).scale(1));

  CHECK_THROWS_AS(tabulated_candidate("x", {{1, 1, 2, 3, 1, 4}, {2, 1, 2, 3, 2, 4}, {3, 1, 2, 3, 3, 4}}),
                  ConstructionError);
  CHECK_THROWS_AS(tabulated_candidate("x", {{1, 1, 2, 3, 1, 4},
                                            {3, 1, 2, 3, 2, 4},
                                            {2, 1, 2, 3, 3, 4},
                                            {4, 1, 2, 3, 3, 4}}),
                  ConstructionError);
}

TEST_CASE("evaluate rejects times outside the domain") {
  auto e = resolve_catalog("yamabe.case2_2.hamilton", [] {
    CatalogParams p;
    p.b = 1;
    p.p = 0.5;
    p.delta = 0.75;
    return p;
  }());
  REQUIRE(e.cand.t_domain.bounded());
  CHECK_THROWS_AS(evaluate(e.cand, e.cand.t_domain.hi * 1.5L), std::domain_error);
  CHECK_THROWS_AS(evaluate(e.cand, 0.0L), std::domain_error);
}

TEST_CASE("property: reported derivatives match finite differences across the catalog") {
  for (const auto& row : table::catalog_rows()) {
    CatalogEntry e = resolve_catalog(row.id, row.p);
    const auto& c = e.cand;
    long double hi = std::min<long double>(10.0L, c.t_domain.bounded()
                                                      ? c.t_domain.lo + 0.95L * (c.t_domain.hi - c.t_domain.lo)
                                                      : 10.0L);
    std::vector<double> ts = oracle::logspace(1e-2, static_cast<double>(hi), 100);
    const std::pair<const char*, const TimeFunction*> comps[] = {
        {"gamma", &c.gamma}, {"alpha", &c.alpha}, {"phi", &c.phi}, {"c", &c.c}, {"beta", &c.beta}};
    for (const auto& [name, fn] : comps) {
      if (!*fn) continue;
      double worst = 0.0;
      for (double t : ts) {
        long double h = 1e-6L * std::max(1.0L, static_cast<long double>(t));
        long double fd = ((*fn)(t + h).value - (*fn)(t - h).value) / (2.0L * h);
        long double d = (*fn)(t).deriv;
        worst = std::max(worst, static_cast<double>(std::fabs(fd - d) /
                                                    std::max(1.0L, std::fabs(d))));
      }
      INFO(row.id << " " << row.label << " " << name);
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("property: phi ~ alpha(0+)^2 m/(2t) near t = 0 for the A2 families") {
  struct Case {
    CandidateFunctions c;
    double m;
  };
  std::vector<Case> cases = {
      {make_heat_family(HeatKind::LiYauDavies, {3, 0.5, 1}, with_alpha(2)), 3},
      {make_heat_family(HeatKind::LiXu, {3, 0.5, 1}), 3},
      {make_heat_family(HeatKind::LinearLiXu, {3, 0.5, 1}), 3},
      {make_log_family(LogKind::SharpCompact, {2, 0, 1}, 1.0), 2},
      {make_log_family(LogKind::SharpCompact, {2, 0, 1}, -1.0), 2},
      {make_power_li_yau({3, 0, 1}, 1.5), 3},
  };
  for (const auto& cs : cases) {
    double t = 1e-6;
    double a0 = val(cs.c.alpha, t);
    double ratio = val(cs.c.phi, t) / (cs.m / (2 * t));
    INFO(cs.c.name);
    CHECK(ratio == Approx(a0 * a0).epsilon(1e-3));
  }
}

TEST_CASE("property: k-scaling closure on the Case 1.2 reduced system") {
  CatalogParams p;
  p.b = -1;
  p.p = 0.5;
  p.k = 2;
  CatalogEntry e = resolve_catalog("yamabe.case1_2.li_yau", p);
  auto grid = e.default_t_grid(120);
  auto fg = linear_grid(-10, 10, 21);
  REQUIRE(check_system(e.cand, e.eq, e.params, SystemKind::A3, Branch::I, grid, fg).verdict ==
          Verdict::Pass);
  for (double k : {1.0, 1.25, 2.0, 4.0}) {
    auto s = k_scaled(e.cand, k);
    auto r = check_system(s, e.eq, e.params, SystemKind::A3, Branch::I, grid, fg);
    INFO("k = " << k);
    CHECK(r.verdict == Verdict::Pass);
  }
}

TEST_CASE("catalog lookup") {
  auto ids = catalog_ids();
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  CHECK(catalog_has("heat.li_yau"));
  CHECK(catalog_has("yamabe.case1_2.k_scaled"));
  CHECK_FALSE(catalog_has("heat.nope"));
  CHECK_THROWS_AS(resolve_catalog("heat.nope", {}), std::invalid_argument);
  for (const auto& row : table::catalog_rows()) CHECK(catalog_has(row.id));
  // every catalog id is exercised by the table
  for (const auto& id : ids) {
    bool found = false;
    for (const auto& row : table::catalog_rows()) found = found || row.id == id;
    INFO(id);
    CHECK(found);
  }
}

TEST_CASE("extra positive entry is flagged experimental") {
  CatalogParams p;
  p.a = 1;
  CHECK(resolve_catalog("log.extra_pos", p).cand.experimental);
  p.K = 0;
  CHECK_THROWS_AS(resolve_catalog("log.extra_pos", p), ConstructionError);
}
