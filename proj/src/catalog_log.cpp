#include <cmath>

#include "closed_form.hpp"

namespace harnack {

namespace detail {

void set_li_yau_shape(CandidateFunctions& c, Real m, Real al, Real phi_const, Real c_const) {
  c.gamma = constant_fn(1.0L);
  c.alpha = constant_fn(al);
  c.beta = closed_form([](D t) { return t; });
  c.phi = closed_form([=](D t) { return m * al * al / (2.0L * t) + phi_const; });
  c.c = closed_form([=](D t) { return m * al / (2.0L * t) + c_const; });
}

void set_li_xu_heat_shape(CandidateFunctions& c, Real m, Real k) {
  c.gamma = constant_fn(1.0L);
  c.alpha = closed_form([=](D t) { return li_xu_alpha(k * t); });
  c.beta = closed_form([=](D t) { return tanh(k * t); });
  auto phi = closed_form([=](D t) { return m * k / 2.0L * coth_plus_one(k * t); });
  c.phi = phi;
  c.c = phi;
}

void set_li_xu_pos_shape(CandidateFunctions& c, Real m, Real K, Real a) {
  const Real x = 2.0L * K + a, kh = K + a / 2.0L;
  c.gamma = constant_fn(1.0L);
  // e^{xt} + e^{-xt} - 2 = 4 sinh^2(xt/2)
  c.alpha = closed_form([=](D t) {
    D num = expm1(x * t) + x * expm1_neg_over(a, t);
    D s = sinh(x * t / 2.0L);
    return x / (a + K) * num / (4.0L * s * s);
  });
  c.beta = closed_form([=](D t) { return tanh(kh * t); });
  auto phi = closed_form([=](D t) { return m / 2.0L * kh * coth_plus_one(kh * t); });
  c.phi = phi;
  c.c = phi;
}

void set_linear_li_xu_shape(CandidateFunctions& c, Real m, Real K, Real a, Real s) {
  c.gamma = constant_fn(1.0L);
  c.alpha = closed_form([=](D t) { return s * (1.0L + 2.0L * K * t / 3.0L); });
  c.beta = closed_form([=](D t) { return tanh(K * t); });
  c.phi = closed_form([=](D t) {
    D lin = 1.0L + 2.0L * K * t / 3.0L;
    return s * s *
           (m / 2.0L * (1.0L / t + K + K * K * t / 3.0L) + m * a / 16.0L * (a * t + 6.0L) * lin * lin);
  });
  c.c = closed_form([=](D t) {
    return s * (m / 2.0L * (1.0L / t + K) + m * a / 4.0L * (1.0L + 2.0L * K * t / 3.0L));
  });
}

void set_hamilton_shape(CandidateFunctions& c, Real m, Real K, Real delta, Real kphi, Real sphi,
                        Real kc, Real sc) {
  c.gamma = closed_form([=](D t) { return delta * exp(-2.0L * K * t); });
  c.alpha = constant_fn(1.0L);
  c.beta = closed_form([](D t) { return t; });
  c.phi = closed_form(
      [=](D t) { return kphi * m * exp(2.0L * K * t) / (2.0L * delta) * (1.0L / t + sphi); });
  c.c = closed_form(
      [=](D t) { return kc * m * exp(2.0L * K * t) / (2.0L * delta) * (1.0L / t + sc); });
}

}  // namespace detail

using detail::closed_form;
using detail::constant_fn;
using detail::D;
using detail::fmt_num;
using detail::require;

namespace {

CandidateFunctions sharp_neg_family(const CurvatureParams& params, double a, const LFunction& l) {
  require(a < 0.0, "sharp negative family: a must be < 0");
  require(l.a() == a, "sharp negative family: l was built for a different a");
  const Real m = params.m, aa = a;
  CandidateFunctions c;
  c.name = "log.sharp_neg_family";
  LFunction lf = l;
  // phi0 = m a/(2(1 - e^{-at}))
  auto phi0 = [=](Real t) {
    D r = -m * aa / (2.0L * expm1(-aa * D::variable(t)));
    return Sample{r.v, r.d};
  };
  c.gamma = [lf](Real t) {
    Sample s = lf(t);
    Real q = 1.0L + s.value;
    return Sample{1.0L / q, -s.deriv / (q * q)};
  };
  c.alpha = constant_fn(1.0L);
  c.beta = closed_form([=](D t) { return expm1(-aa * t); });
  auto phi = [lf, phi0](Real t) {
    Sample s = lf(t), p = phi0(t);
    return Sample{(1.0L + s.value) * p.value, s.deriv * p.value + (1.0L + s.value) * p.deriv};
  };
  c.phi = phi;
  c.c = phi;
  c.t_domain = lf.domain();
  c.param_meta = {{"m", params.m},         {"K", params.K},
                  {"a", a},                {"eps", lf.eps()},
                  {"a_eps", static_cast<double>(lf.a_eps())},
                  {"junction", static_cast<double>(lf.junction())}};
  return c;
}

}  // namespace

CandidateFunctions make_log_family(LogKind kind, const CurvatureParams& params, double a,
                                   const FamilyExtras& extra) {
  params.validate();
  require(std::isfinite(a), "log family: a must be finite");
  const Real m = params.m, K = params.K, A = a;
  const Real al = extra.alpha;
  CandidateFunctions c;
  c.param_meta = {{"m", params.m}, {"K", params.K}, {"a", a}};

  auto need_alpha = [&]() {
    require(extra.alpha > 1.0, "alpha must be > 1");
    c.param_meta["alpha"] = extra.alpha;
  };
  auto need_delta = [&]() {
    require(extra.delta > 0.0 && extra.delta < 1.0, "delta must be in (0,1)");
    c.param_meta["delta"] = extra.delta;
  };

  switch (kind) {
    case LogKind::LiYauCase1a: {
      need_alpha();
      require(a >= 0.0, "log.li_yau_case1a: a must be >= 0");
      require(K <= 1.5L * A * (al - 1.0L),
              "log.li_yau_case1a: needs K <= (3/2) a (alpha - 1) = " +
                  fmt_num(1.5 * a * (extra.alpha - 1.0)));
      c.name = "log.li_yau_case1a";
      detail::set_li_yau_shape(c, m, al, m * A * al * al / 2.0L, m * A * al / 2.0L);
      break;
    }
    case LogKind::LiYauCase1b: {
      need_alpha();
      require(a >= 0.0, "log.li_yau_case1b: a must be >= 0");
      require(K >= 1.5L * A * (al - 1.0L),
              "log.li_yau_case1b: needs K >= (3/2) a (alpha - 1) = " +
                  fmt_num(1.5 * a * (extra.alpha - 1.0)));
      c.name = "log.li_yau_case1b";
      Real q = K / (2.0L * (al - 1.0L));
      detail::set_li_yau_shape(c, m, al, m * al * al / 2.0L * (q + A / 4.0L),
                               m * al * (q - A / 4.0L));
      break;
    }
    case LogKind::LiYauCase2: {
      need_alpha();
      require(a <= 0.0, "log.li_yau_case2: a must be <= 0");
      c.name = "log.li_yau_case2";
      Real q = K / (2.0L * (al - 1.0L));
      detail::set_li_yau_shape(c, m, al, m * al * al / 2.0L * (q - A / 4.0L),
                               m * al * (q - A / 4.0L));
      break;
    }
    case LogKind::LiXuPos: {
      require(a >= 0.0, "log.li_xu_pos: a must be >= 0");
      require(K + A > 0.0L, "log.li_xu_pos: needs K + a > 0");
      c.name = "log.li_xu_pos";
      detail::set_li_xu_pos_shape(c, m, K, A);
      break;
    }
    case LogKind::LiXuPosAlt: {
      require(a > 0.0, "log.li_xu_pos_alt: a must be > 0");
      c.name = "log.li_xu_pos_alt";
      const Real k1 = K + A / 2.0L, k3 = K + 1.5L * A;
      c.gamma = constant_fn(1.0L);
      c.alpha = closed_form([=](D t) { return 1.0L - 2.0L * K / 3.0L * expm1(-A * t) / A; });
      c.beta = closed_form([=](D t) { return tanh(k1 * t); });
      c.c = closed_form([=](D t) { return m / 2.0L * (-A / expm1(-A * t) + K + A / 2.0L); });
      c.phi = closed_form([=](D t) {
        D e = expm1(A * t);
        D coth_half = (e + 2.0L) / e;  // (e^{at}+1)/(e^{at}-1)
        return m / 2.0L *
               (k3 * k3 / (2.0L * A) * coth_half - 2.0L * k1 * k3 / A / e + k1 * k1 * t / (e * e));
      });
      break;
    }
    case LogKind::LiXuNeg: {
      require(a <= 0.0, "log.li_xu_neg: a must be <= 0");
      require(K - A / 2.0L > 0.0L, "log.li_xu_neg: needs K - a/2 > 0");
      c.name = "log.li_xu_neg";
      detail::set_li_xu_heat_shape(c, m, K - A / 2.0L);
      break;
    }
    case LogKind::LiXuNegAlt: {
      require(K > 0.0L, "log.li_xu_neg_alt: K must be > 0");
      require(a < 0.0 && A >= -K, "log.li_xu_neg_alt: needs -K <= a < 0");
      c.name = "log.li_xu_neg_alt";
      const Real x = 2.0L * K - A, kh = K - A / 2.0L;
      c.gamma = constant_fn(1.0L);
      c.alpha = closed_form([=](D t) {
        D num = expm1(x * t) + x * expm1(-A * t) / A;
        D s = sinh(x * t / 2.0L);
        return x / K * num / (4.0L * s * s);
      });
      c.beta = closed_form([=](D t) { return tanh(kh * t); });
      auto phi = closed_form([=](D t) { return m / 2.0L * kh * detail::coth_plus_one(kh * t); });
      c.phi = phi;
      c.c = phi;
      break;
    }
    case LogKind::LinearLiXuPos: {
      require(a >= 0.0, "log.linear_li_xu_pos: a must be >= 0");
      require(K > 0.0L, "log.linear_li_xu_pos: K must be > 0");
      c.name = "log.linear_li_xu_pos";
      detail::set_linear_li_xu_shape(c, m, K, A, 1.0L);
      break;
    }
    case LogKind::LinearLiXuNeg: {
      require(a <= 0.0, "log.linear_li_xu_neg: a must be <= 0");
      require(K > 0.0L, "log.linear_li_xu_neg: K must be > 0");
      c.name = "log.linear_li_xu_neg";
      detail::set_linear_li_xu_shape(c, m, K, 0.0L, 1.0L);
      c.phi = closed_form([=](D t) {
        D lin = 1.0L + 2.0L * K * t / 3.0L;
        return m / 2.0L * (1.0L / t + K + K * K * t / 3.0L) - m * A / 16.0L * lin * lin;
      });
      c.c = closed_form([=](D t) {
        return m / 2.0L * (1.0L / t + K) - m * A / 4.0L * (1.0L + 2.0L * K * t / 3.0L);
      });
      break;
    }
    case LogKind::HamiltonPos: {
      need_delta();
      require(a >= 0.0, "log.hamilton_pos: a must be >= 0");
      c.name = "log.hamilton_pos";
      detail::set_hamilton_shape(c, m, K, extra.delta, 1.0L, A, 1.0L, A);
      break;
    }
    case LogKind::HamiltonNeg: {
      need_delta();
      require(a <= 0.0, "log.hamilton_neg: a must be <= 0");
      c.name = "log.hamilton_neg";
      detail::set_hamilton_shape(c, m, K, extra.delta, 1.0L, -A / 8.0L, 1.0L, -A / 2.0L);
      break;
    }
    case LogKind::ExtraPos: {
      require(a >= 0.0, "log.extra_pos: a must be >= 0");
      require(K > 0.0L, "log.extra_pos: K must be > 0 (sqrt((K+a)K) must be positive)");
      c.name = "log.extra_pos";
      c.experimental = true;
      const Real root = std::sqrt((K + A) * K);
      c.gamma = constant_fn(1.0L);
      c.alpha = closed_form([=](D t) { return detail::li_xu_alpha(K * t); });
      c.beta = closed_form([=](D t) { return tanh(K * t); });
      c.phi = closed_form([=](D t) {
        return m / 2.0L * (K + A) * exp(A * t) * detail::coth_plus_one(K * t);
      });
      c.c = closed_form(
          [=](D t) { return m / 2.0L * root * exp(A * t) * detail::coth_plus_one(K * t); });
      break;
    }
    case LogKind::ExtraNeg: {
      require(a <= 0.0, "log.extra_neg: a must be <= 0");
      require(K > 0.0L, "log.extra_neg: K must be > 0");
      c.name = "log.extra_neg";
      c.gamma = constant_fn(1.0L);
      c.alpha = closed_form([=](D t) { return detail::li_xu_alpha(K * t); });
      c.beta = closed_form([=](D t) { return tanh(K * t); });
      c.phi = closed_form([=](D t) {
        D al_t = detail::li_xu_alpha(K * t);
        return m * K / 2.0L * detail::coth_plus_one(K * t) - m * A / 16.0L * al_t * al_t;
      });
      c.c = closed_form([=](D t) {
        return m * K / 2.0L * detail::coth_plus_one(K * t) -
               m * A / 4.0L * detail::li_xu_alpha(K * t);
      });
      break;
    }
    case LogKind::SharpCompact: {
      require(a != 0.0, "log.sharp_compact: a must be nonzero");
      c.name = "log.sharp_compact";
      c.gamma = constant_fn(1.0L);
      c.alpha = constant_fn(1.0L);
      // beta is not part of this family; |e^{-at} - 1| is attached so the
      // A3 check can report which conditions fail
      c.beta = closed_form([=](D t) { return A > 0 ? -expm1(-A * t) : expm1(-A * t); });
      auto phi = closed_form([=](D t) { return -m * A / (2.0L * expm1(-A * t)); });
      c.phi = phi;
      c.c = phi;
      break;
    }
    case LogKind::SharpPosComplete: {
      require(a > 0.0, "log.sharp_pos_complete: a must be > 0");
      require(extra.alpha >= 1.0, "log.sharp_pos_complete: alpha must be >= 1");
      c.param_meta["alpha"] = extra.alpha;
      c.name = "log.sharp_pos_complete";
      c.gamma = constant_fn(1.0L);
      c.alpha = constant_fn(al);
      c.beta = closed_form([=](D t) { return -expm1(-A * t); });
      c.phi = closed_form([=](D t) { return -al * al * m * A / (2.0L * expm1(-A * t)); });
      c.c = closed_form([=](D t) { return -al * m * A / (2.0L * expm1(-A * t)); });
      break;
    }
    case LogKind::SharpNegFamily: {
      require(extra.l != nullptr, "log.sharp_neg_family needs l(t) from build_l");
      return sharp_neg_family(params, a, *extra.l);
    }
  }
  return c;
}

}  // namespace harnack
