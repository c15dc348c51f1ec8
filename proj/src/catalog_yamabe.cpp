#include <cmath>
#include <limits>

#include "closed_form.hpp"

namespace harnack {

using detail::fmt_num;
using detail::require;

namespace {

const char* case_label(YamabeCase yc) {
  switch (yc) {
    case YamabeCase::C1_1: return "case1_1";
    case YamabeCase::C1_2: return "case1_2";
    case YamabeCase::C1_3: return "case1_3";
    case YamabeCase::C2_1: return "case2_1";
    case YamabeCase::C2_2: return "case2_2";
    case YamabeCase::C2_3: return "case2_3";
  }
  return "?";
}

const char* type_label(YamabeType ty) {
  switch (ty) {
    case YamabeType::LiYau: return "li_yau";
    case YamabeType::LiXu: return "li_xu";
    case YamabeType::LinearLiXu: return "linear_li_xu";
    case YamabeType::Hamilton: return "hamilton";
  }
  return "?";
}

void check_case(YamabeCase yc, double b, double p) {
  std::string where = std::string("yamabe ") + case_label(yc) + ": ";
  switch (yc) {
    case YamabeCase::C1_1: require(b > 0 && p > 1, where + "needs b > 0, p > 1"); break;
    case YamabeCase::C1_2: require(b < 0 && p > 0 && p < 1, where + "needs b < 0, 0 < p < 1"); break;
    case YamabeCase::C1_3: require(b < 0 && p < 0, where + "needs b < 0, p < 0"); break;
    case YamabeCase::C2_1: require(b > 0 && p < 0, where + "needs b > 0, p < 0"); break;
    case YamabeCase::C2_2: require(b > 0 && p > 0 && p < 1, where + "needs b > 0, 0 < p < 1"); break;
    case YamabeCase::C2_3: require(b < 0 && p > 1, where + "needs b < 0, p > 1"); break;
  }
}

// f-range where |b(p-1)| e^{(p-1)f} <= M
std::pair<double, double> bounded_window(double b, double p, double M) {
  const double inf = std::numeric_limits<double>::infinity();
  double edge = std::log(M / std::fabs(b * (p - 1.0))) / (p - 1.0);
  return p > 1.0 ? std::make_pair(-inf, edge) : std::make_pair(edge, inf);
}

void set_window(CandidateFunctions& c, Real hi) {
  c.t_domain = TimeDomain{0.0L, hi, false, true};
  c.param_meta["t_window_end"] = static_cast<double>(hi);
}

}  // namespace

CandidateFunctions make_yamabe_family(YamabeCase yc, YamabeType type,
                                      const CurvatureParams& params, double a, double b,
                                      double p, double M, const FamilyExtras& extra) {
  params.validate();
  check_case(yc, b, p);
  require(M >= 0.0 && std::isfinite(M), "yamabe: M must be finite and >= 0");
  const Real m = params.m, K = params.K, MM = M, pp = p;
  const std::string id = std::string("yamabe.") + case_label(yc) + "." + type_label(type);

  CandidateFunctions c;
  c.name = id;
  c.param_meta = {{"m", params.m}, {"K", params.K}, {"a", a}, {"b", b}, {"p", p}, {"M", M}};
  bool uses_M = !(yc == YamabeCase::C2_1 || yc == YamabeCase::C2_2);

  auto need_alpha = [&](double hi, bool hi_closed) {
    bool ok = extra.alpha > 1.0 && (hi_closed ? extra.alpha <= hi : extra.alpha < hi);
    require(ok, id + ": alpha must be in (1, " + fmt_num(hi) + (hi_closed ? "]" : ")"));
    c.param_meta["alpha"] = extra.alpha;
  };
  auto need_delta = [&]() {
    require(extra.delta > 0.0 && extra.delta < 1.0, id + ": delta must be in (0,1)");
    c.param_meta["delta"] = extra.delta;
  };
  auto hamilton = [&](Real k) {
    detail::set_hamilton_shape(c, m, K, extra.delta, k * k, MM, k, MM);
    c.param_meta["k"] = static_cast<double>(k);
  };
  // Case 1.1 shapes, reused by the k-scaled Case 1.2 entries
  auto case11 = [&](YamabeType ty) {
    const Real al = extra.alpha;
    switch (ty) {
      case YamabeType::LiYau:
        need_alpha(std::numeric_limits<double>::infinity(), false);
        detail::set_li_yau_shape(c, m, al,
                                 m * MM * al * al / 2.0L + al * al * m * K / (2.0L * (al - 1.0L)),
                                 m * MM * al / 2.0L + al * m * K / (2.0L * (al - 1.0L)));
        break;
      case YamabeType::LiXu:
        require(K + MM > 0.0L, id + ": needs K + M > 0");
        detail::set_li_xu_pos_shape(c, m, K, MM);
        break;
      case YamabeType::LinearLiXu:
        require(K > 0.0L, id + ": K must be > 0");
        detail::set_linear_li_xu_shape(c, m, K, MM, 1.0L);
        break;
      case YamabeType::Hamilton:
        need_delta();
        hamilton(1.0L);
        break;
    }
  };

  switch (yc) {
    case YamabeCase::C1_1:
      case11(type);
      break;

    case YamabeCase::C1_2: {
      if (type == YamabeType::Hamilton) {
        need_delta();
        double dl = extra.delta;
        if (dl <= std::max(p, 2.0 / 3.0))
          hamilton(1.0L);
        else
          hamilton(dl / (2.0 * (1.0 - dl)));
        break;
      }
      double k = extra.k > 0.0 ? extra.k : 1.0 / p;
      require(k >= 1.0 / p - 1e-15, id + ": k must be >= 1/p = " + fmt_num(1.0 / p));
      case11(type);
      c = k_scaled(c, k);
      c.name = id;
      break;
    }

    case YamabeCase::C1_3: {
      const Real Kt = K + (std::fabs(pp) + 0.5L) * MM;
      c.param_meta["K_tilde"] = static_cast<double>(Kt);
      switch (type) {
        case YamabeType::LiYau: {
          need_alpha(2.0, false);
          const Real al = extra.alpha;
          detail::set_li_yau_shape(
              c, m, al, m * MM * al * al / 2.0L + al * al * m * Kt / (2.0L * (al - 1.0L)),
              m * MM * al / 2.0L + al * m * Kt / (2.0L * (al - 1.0L)));
          break;
        }
        case YamabeType::LiXu:
          // the reaction slope of this reduced system is M
          require(Kt + MM > 0.0L, id + ": needs K_tilde + M > 0");
          detail::set_li_xu_pos_shape(c, m, Kt, MM);
          break;
        case YamabeType::LinearLiXu:
          require(K > 0.0L, id + ": K must be > 0");
          detail::set_linear_li_xu_shape(c, m, K, MM, 2.0L - pp);
          break;
        case YamabeType::Hamilton: {
          need_delta();
          double dl = extra.delta;
          double k = (dl - p) / (2.0 * (1.0 - dl));
          if (p > -2.0 && dl <= (2.0 + p) / 3.0)
            hamilton(1.0L);
          else
            hamilton(k);
          break;
        }
      }
      break;
    }

    case YamabeCase::C2_1: {
      HeatKind hk = type == YamabeType::LiYau      ? HeatKind::LiYauDavies
                    : type == YamabeType::LiXu     ? HeatKind::LiXu
                    : type == YamabeType::LinearLiXu ? HeatKind::LinearLiXu
                                                     : HeatKind::Hamilton;
      auto meta = c.param_meta;
      c = make_heat_family(hk, params, extra);
      c.name = id;
      for (auto& [k, v] : meta) c.param_meta[k] = v;
      break;
    }

    case YamabeCase::C2_2: {
      auto meta = c.param_meta;
      switch (type) {
        case YamabeType::LiYau:
          need_alpha(1.0 / p, true);
          c = make_heat_family(HeatKind::LiYauDavies, params, extra);
          break;
        case YamabeType::LiXu:
          c = make_heat_family(HeatKind::LiXu, params, extra);
          if (p > 0.5) set_window(c, li_xu_crossing(p) / K);
          break;
        case YamabeType::LinearLiXu:
          c = make_heat_family(HeatKind::LinearLiXu, params, extra);
          set_window(c, 1.5L * (1.0L / pp - 1.0L) / K);
          break;
        case YamabeType::Hamilton:
          require(extra.delta > p && extra.delta < 1.0, id + ": delta must be in (p, 1)");
          c = make_heat_family(HeatKind::Hamilton, params, extra);
          if (K > 0.0L) set_window(c, std::log(extra.delta / p) / (2.0L * K));
          break;
      }
      c.name = id;
      for (auto& [k, v] : meta) c.param_meta.emplace(k, v);
      break;
    }

    case YamabeCase::C2_3: {
      const Real Kb = K + (pp - 0.5L) * MM;
      c.param_meta["K_bar"] = static_cast<double>(Kb);
      switch (type) {
        case YamabeType::LiYau: {
          need_alpha(2.0, false);
          const Real al = extra.alpha;
          detail::set_li_yau_shape(c, m, al, al * al * m * Kb / (4.0L * (al - 1.0L)),
                                   al * m * Kb / (2.0L * (al - 1.0L)));
          break;
        }
        case YamabeType::LiXu:
          require(Kb > 0.0L, id + ": needs K_bar > 0");
          detail::set_li_xu_heat_shape(c, m, Kb);
          break;
        case YamabeType::LinearLiXu:
          require(K > 0.0L, id + ": K must be > 0");
          require(p < 2.0, id + ": alpha = (2-p)(1+2Kt/3) is nonpositive for p >= 2");
          detail::set_linear_li_xu_shape(c, m, K, MM, 2.0L - pp);
          break;
        case YamabeType::Hamilton: {
          need_delta();
          double dl = extra.delta;
          double k = (p - dl) / (2.0 * (1.0 - dl));
          if (p < 2.0 && dl <= 2.0 - p)
            hamilton(1.0L);
          else
            hamilton(k);
          break;
        }
      }
      break;
    }
  }

  if (uses_M && M > 0.0) c.f_window = bounded_window(b, p, M);
  return c;
}

}  // namespace harnack
