#include "closed_form.hpp"

namespace harnack {

using detail::closed_form;
using detail::constant_fn;
using detail::D;
using detail::require;

CandidateFunctions make_heat_family(HeatKind kind, const CurvatureParams& params,
                                    const FamilyExtras& extra) {
  params.validate();
  const Real m = params.m, K = params.K;
  CandidateFunctions c;
  c.param_meta = {{"m", params.m}, {"K", params.K}};
  c.gamma = constant_fn(1.0L);

  switch (kind) {
    case HeatKind::LiYauDavies: {
      require(extra.alpha > 1.0, "heat Li-Yau: alpha must be > 1");
      const Real al = extra.alpha;
      c.name = "heat.li_yau";
      c.alpha = constant_fn(al);
      c.beta = closed_form([](D t) { return t; });
      c.phi = closed_form([=](D t) {
        return m * al * al / (2.0L * t) + m * al * al * K / (4.0L * (al - 1.0L));
      });
      c.c = closed_form(
          [=](D t) { return m * al / (2.0L * t) + m * al * K / (2.0L * (al - 1.0L)); });
      c.param_meta["alpha"] = extra.alpha;
      break;
    }
    case HeatKind::LiXu: {
      require(K > 0.0L, "heat Li-Xu: K must be > 0");
      c.name = "heat.li_xu";
      c.alpha = closed_form([=](D t) { return detail::li_xu_alpha(K * t); });
      c.beta = closed_form([=](D t) { return tanh(K * t); });
      auto phi = closed_form([=](D t) { return m * K / 2.0L * detail::coth_plus_one(K * t); });
      c.phi = phi;
      c.c = phi;
      break;
    }
    case HeatKind::LinearLiXu: {
      require(K > 0.0L, "heat linear Li-Xu: K must be > 0");
      c.name = "heat.linear_li_xu";
      c.alpha = closed_form([=](D t) { return 1.0L + 2.0L * K * t / 3.0L; });
      c.beta = closed_form([=](D t) { return tanh(K * t); });
      c.phi = closed_form(
          [=](D t) { return m / 2.0L * (1.0L / t + K + K * K * t / 3.0L); });
      c.c = closed_form([=](D t) { return m / 2.0L * (1.0L / t + K); });
      break;
    }
    case HeatKind::Hamilton: {
      require(extra.delta > 0.0 && extra.delta < 1.0, "heat Hamilton: delta must be in (0,1)");
      const Real dl = extra.delta;
      c.name = "heat.hamilton";
      c.gamma = closed_form([=](D t) { return dl * exp(-2.0L * K * t); });
      c.alpha = constant_fn(1.0L);
      c.beta = closed_form([](D t) { return t; });
      auto phi = closed_form([=](D t) { return m * exp(2.0L * K * t) / (2.0L * dl * t); });
      c.phi = phi;
      c.c = phi;
      c.param_meta["delta"] = extra.delta;
      break;
    }
  }
  return c;
}

}  // namespace harnack
