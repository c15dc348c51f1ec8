#include "harnack/candidates.hpp"

#include <cmath>
// pchip.hpp calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/roots.hpp>

#include <array>
#include <cmath>
#include <memory>
#include <sstream>

#include "closed_form.hpp"

namespace harnack {

std::string TimeDomain::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << (lo_closed ? "[" : "(") << static_cast<double>(lo) << ", ";
  if (bounded())
    os << static_cast<double>(hi) << (hi_closed ? "]" : ")");
  else
    os << "inf)";
  return os.str();
}

QuintupleSample evaluate(const CandidateFunctions& cand, Real t) {
  if (!cand.t_domain.contains(t)) {
    std::ostringstream os;
    os.precision(17);
    os << cand.name << ": t=" << static_cast<double>(t) << " outside domain "
       << cand.t_domain.describe();
    throw std::domain_error(os.str());
  }
  QuintupleSample s;
  s.gamma = cand.gamma(t);
  s.alpha = cand.alpha(t);
  s.phi = cand.phi(t);
  s.c = cand.c(t);
  s.has_beta = cand.has_beta();
  if (s.has_beta) s.beta = cand.beta(t);
  return s;
}

namespace {

// odd Taylor coefficients of g, x^1 .. x^23
constexpr std::array<long double, 12> kGSeries = {
    2.0L / 3.0L,
    -4.0L / 45.0L,
    4.0L / 315.0L,
    -8.0L / 4725.0L,
    4.0L / 18711.0L,
    -5528.0L / 212837625.0L,
    8.0L / 2606175.0L,
    -57872.0L / 162820783125.0L,
    175468.0L / 4331032831125.0L,
    -1396888.0L / 306265893058125.0L,
    621464.0L / 1222532449149375.0L,
    -3781825456.0L / 67306523987918840625.0L,
};

constexpr Real kSeriesCut = 0.25L;

}  // namespace

Real li_xu_g(Real x) {
  if (x <= 0.0L) throw std::domain_error("li_xu_g needs x > 0");
  if (x < kSeriesCut) {
    Real x2 = x * x, acc = 0.0L;
    for (std::size_t i = kGSeries.size(); i-- > 0;) acc = acc * x2 + kGSeries[i];
    return acc * x;
  }
  if (x > 40.0L) return 1.0L / std::tanh(x) - 4.0L * x * std::exp(-2.0L * x);
  Real s = std::sinh(x);
  return (s * std::cosh(x) - x) / (s * s);
}

Real li_xu_g_prime(Real x) {
  if (x <= 0.0L) throw std::domain_error("li_xu_g_prime needs x > 0");
  if (x < kSeriesCut) {
    Real x2 = x * x, acc = 0.0L;
    for (std::size_t i = kGSeries.size(); i-- > 0;)
      acc = acc * x2 + static_cast<Real>(2 * i + 1) * kGSeries[i];
    return acc;
  }
  return 2.0L - 2.0L * li_xu_g(x) / std::tanh(x);
}

double li_xu_crossing(double p) {
  if (!(p > 0.5 && p < 1.0)) throw ConstructionError("li_xu_crossing needs p in (1/2, 1)");
  // 1 + g increases from 1 to 2, so 1 + g(x) = 1/p has exactly one root
  Real target = 1.0L / p - 1.0L;
  auto fn = [&](Real x) { return li_xu_g(x) - target; };
  Real lo = 1e-12L, hi = 1.0L;
  while (fn(hi) < 0.0L) hi *= 2.0L;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(fn, lo, hi, boost::math::tools::eps_tolerance<Real>(60),
                                             iters);
  return static_cast<double>((r.first + r.second) / 2.0L);
}

CandidateFunctions k_scaled(const CandidateFunctions& base, double k) {
  detail::require(k > 0.0, "k_scaled: k must be > 0");
  CandidateFunctions out = base;
  Real kk = k;
  out.name = base.name + ".k_scaled";
  out.alpha = [f = base.alpha, kk](Real t) {
    Sample s = f(t);
    return Sample{kk * s.value, kk * s.deriv};
  };
  out.phi = [f = base.phi, kk](Real t) {
    Sample s = f(t);
    return Sample{kk * kk * s.value, kk * kk * s.deriv};
  };
  out.c = [f = base.c, kk](Real t) {
    Sample s = f(t);
    return Sample{kk * s.value, kk * s.deriv};
  };
  out.param_meta["k"] = k;
  return out;
}

CandidateFunctions make_power_li_yau(const CurvatureParams& params, double alpha) {
  params.validate();
  using detail::D;
  detail::require(alpha >= 1.0, "power Li-Yau: alpha must be >= 1");
  detail::require(alpha > 1.0 || params.K == 0.0, "power Li-Yau: alpha = 1 needs K = 0");
  Real m = params.m, K = params.K, al = alpha;
  Real kterm = alpha > 1.0 ? K / (al - 1.0L) : 0.0L;
  CandidateFunctions c;
  c.name = "power.li_yau";
  c.gamma = detail::constant_fn(1.0L);
  c.alpha = detail::constant_fn(al);
  c.beta = detail::closed_form([](D t) { return t; });
  c.phi = detail::closed_form(
      [=](D t) { return m * al * al / (2.0L * t) + m * al * al * kterm / 4.0L; });
  c.c = detail::closed_form([=](D t) { return m * al / (2.0L * t) + m * al * kterm / 2.0L; });
  c.param_meta = {{"m", params.m}, {"K", params.K}, {"alpha", alpha}};
  return c;
}

CandidateFunctions tabulated_candidate(const std::string& name,
                                       const std::vector<TabulatedRow>& samples) {
  if (samples.size() < 4) throw ConstructionError("tabulated candidate needs at least 4 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].t > samples[i - 1].t))
      throw ConstructionError("tabulated candidate: t must be strictly increasing");
  if (!(samples.front().t > 0.0)) throw ConstructionError("tabulated candidate: t must be > 0");

  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto column = [&](double TabulatedRow::*field) -> TimeFunction {
    std::vector<double> x, y;
    for (const auto& r : samples) {
      x.push_back(r.t);
      y.push_back(r.*field);
    }
    auto ip = std::make_shared<Pchip>(std::move(x), std::move(y));
    return [ip](Real t) {
      double td = static_cast<double>(t);
      return Sample{(*ip)(td), ip->prime(td)};
    };
  };

  CandidateFunctions c;
  c.name = name;
  c.gamma = column(&TabulatedRow::gamma);
  c.alpha = column(&TabulatedRow::alpha);
  c.phi = column(&TabulatedRow::phi);
  c.beta = column(&TabulatedRow::beta);
  c.c = column(&TabulatedRow::c);
  c.t_domain = TimeDomain{samples.front().t, samples.back().t, true, true};
  c.param_meta["tabulated"] = 1.0;
  c.param_meta["samples"] = static_cast<double>(samples.size());
  return c;
}

}  // namespace harnack
