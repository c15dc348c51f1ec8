#include <doctest.h>

#include <cmath>
#include <random>

#include "harnack/equations.hpp"
#include "oracles.hpp"

using namespace harnack;
using doctest::Approx;

TEST_CASE("big_H per variant") {
  CHECK(Equation::linear(5).big_H(2) == 10);
  CHECK(Equation::logarithmic(2).big_H(std::exp(1.0)) == Approx(2 * std::exp(1.0)).epsilon(1e-15));
  CHECK(Equation::power_sum({{1, 0.5}}).big_H(4) == Approx(2).epsilon(1e-15));
  CHECK_THROWS_AS(Equation::linear(1).big_H(0.0), std::domain_error);
  CHECK_THROWS_AS(Equation::logarithmic(1).big_H(-1.0), std::domain_error);
}

TEST_CASE("h and derivatives, listed values") {
  ReactionTerm r = Equation::logarithmic(2).reaction(3);
  CHECK(r.h == 6);
  CHECK(r.h1 == 2);
  CHECK(r.h2 == 0);
  r = Equation::linear(7).reaction(-4);
  CHECK(r.h == 7);
  CHECK(r.h1 == 0);
  CHECK(r.h2 == 0);
  r = Equation::power_sum({{1, 0.5}}).reaction(0);
  CHECK(r.h == 1);
  CHECK(r.h1 == -0.5);
  CHECK(r.h2 == 0.25);
}

TEST_CASE("constructor preconditions") {
  CHECK_THROWS_AS(Equation::logarithmic(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Equation::power_sum({}), std::invalid_argument);
  CHECK_THROWS_AS(Equation::power_sum({{1, 0.5}, {2, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(Equation::yamabe(1, 0, 2), std::invalid_argument);
  CurvatureParams p{2.0, 0.0, 3};
  CHECK_NOTHROW(p.validate());
  CHECK_THROWS_AS(p.validate_for_exact(), std::invalid_argument);
  CHECK_THROWS_AS((CurvatureParams{0.0, 0.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CurvatureParams{1.0, -1.0, 1}.validate()), std::invalid_argument);
}

TEST_CASE("power-sum terms come out ordered and zero terms dropped") {
  Equation e = Equation::power_sum({{2, 3.0}, {0, 1.5}, {1, 0.5}});
  const auto& ps = std::get<PowerSumEq>(e.kind());
  REQUIRE(ps.terms.size() == 2);
  CHECK(ps.terms[0].exponent < ps.terms[1].exponent);
}

TEST_CASE("property: h(f) = H(e^f) e^{-f}") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uf(-20, 20);
  std::vector<Equation> eqs = {Equation::linear(3.5), Equation::logarithmic(-1.25),
                               Equation::power_sum({{1, 0.5}, {-2, 1.7}, {0.3, -1.0}}),
                               Equation::yamabe(0.4, -1.0, 0.3)};
  for (const auto& e : eqs)
    for (int i = 0; i < 400; ++i) {
      double f = uf(rng);
      double lhs = e.reaction(f).h;
      double rhs = e.big_H(std::exp(f)) * std::exp(-f);
      CHECK(lhs == Approx(rhs).epsilon(1e-12).scale(1e-300));
    }
}

TEST_CASE("property: h1, h2 match central differences") {
  std::vector<Equation> eqs = {Equation::linear(2), Equation::logarithmic(3),
                               Equation::power_sum({{1, 0.5}, {0.5, 1.05}}),
                               Equation::yamabe(1.0, 1.0, 0.9)};
  for (const auto& e : eqs)
    for (double f = -20; f <= 20; f += 0.5) {
      auto hf = [&](double x) { return e.reaction(x).h; };
      auto h1f = [&](double x) { return e.reaction(x).h1; };
      double scale = std::max(1.0, std::fabs(e.reaction(f).h));
      CHECK(std::fabs(e.reaction(f).h1 - oracle::central_diff(hf, f, 1e-6)) <= 1e-6 * scale);
      CHECK(std::fabs(e.reaction(f).h2 - oracle::central_diff(h1f, f, 1e-6)) <= 1e-6 * scale);
    }
}

TEST_CASE("property: structural zeros") {
  for (double f = -10; f <= 10; f += 0.25) {
    CHECK(Equation::logarithmic(-2).reaction(f).h2 == 0);
    auto r = Equation::linear(1.5).reaction(f);
    CHECK(r.h1 == 0);
    CHECK(r.h2 == 0);
  }
}

TEST_CASE("large exponents are clamped and flagged") {
  Equation e = Equation::power_sum({{1, 3.0}});
  ReactionTerm r = e.reaction(600.0);
  CHECK(r.clamped);
  CHECK(std::isfinite(r.h));
  CHECK_FALSE(e.reaction(1.0).clamped);
}
