#include "harnack/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace harnack {

namespace {

const std::vector<Branch> kI{Branch::I};
const std::vector<Branch> kII{Branch::II};
const std::vector<Branch> kII_III{Branch::II, Branch::III};

struct LogSpec {
  LogKind kind;
  std::vector<Branch> branches;
};

const std::map<std::string, HeatKind>& heat_ids() {
  static const std::map<std::string, HeatKind> m = {
      {"heat.li_yau", HeatKind::LiYauDavies},
      {"heat.li_xu", HeatKind::LiXu},
      {"heat.linear_li_xu", HeatKind::LinearLiXu},
      {"heat.hamilton", HeatKind::Hamilton},
  };
  return m;
}

const std::map<std::string, LogSpec>& log_ids() {
  static const std::map<std::string, LogSpec> m = {
      {"log.li_yau_case1a", {LogKind::LiYauCase1a, kI}},
      {"log.li_yau_case1b", {LogKind::LiYauCase1b, kI}},
      {"log.li_yau_case2", {LogKind::LiYauCase2, kI}},
      {"log.li_xu_pos", {LogKind::LiXuPos, kII_III}},
      {"log.li_xu_pos_alt", {LogKind::LiXuPosAlt, kII_III}},
      {"log.li_xu_neg", {LogKind::LiXuNeg, kII_III}},
      {"log.li_xu_neg_alt", {LogKind::LiXuNegAlt, kII_III}},
      {"log.linear_li_xu_pos", {LogKind::LinearLiXuPos, kII_III}},
      {"log.linear_li_xu_neg", {LogKind::LinearLiXuNeg, kII_III}},
      {"log.hamilton_pos", {LogKind::HamiltonPos, kI}},
      {"log.hamilton_neg", {LogKind::HamiltonNeg, kI}},
      {"log.extra_pos", {LogKind::ExtraPos, kII_III}},
      {"log.extra_neg", {LogKind::ExtraNeg, kII_III}},
      {"log.sharp_compact", {LogKind::SharpCompact, {}}},
      {"log.sharp_pos_complete", {LogKind::SharpPosComplete, kI}},
      {"log.sharp_neg_family", {LogKind::SharpNegFamily, kI}},
  };
  return m;
}

const std::map<std::string, YamabeCase>& yamabe_cases() {
  static const std::map<std::string, YamabeCase> m = {
      {"case1_1", YamabeCase::C1_1}, {"case1_2", YamabeCase::C1_2},
      {"case1_3", YamabeCase::C1_3}, {"case2_1", YamabeCase::C2_1},
      {"case2_2", YamabeCase::C2_2}, {"case2_3", YamabeCase::C2_3},
  };
  return m;
}

const std::map<std::string, YamabeType>& yamabe_types() {
  static const std::map<std::string, YamabeType> m = {
      {"li_yau", YamabeType::LiYau},
      {"li_xu", YamabeType::LiXu},
      {"linear_li_xu", YamabeType::LinearLiXu},
      {"hamilton", YamabeType::Hamilton},
  };
  return m;
}

std::vector<Branch> yamabe_branches(YamabeCase yc, YamabeType ty) {
  switch (ty) {
    case YamabeType::LiYau:
    case YamabeType::Hamilton:
      return kI;
    case YamabeType::LiXu:
      return yc == YamabeCase::C1_3 ? kII : kII_III;
    case YamabeType::LinearLiXu:
      return yc == YamabeCase::C1_3 ? kI : kII_III;
  }
  return kI;
}

}  // namespace

std::vector<double> CatalogEntry::default_t_grid(int points) const {
  const TimeDomain& d = cand.t_domain;
  double hi = 10.0;
  if (d.bounded()) {
    double end = static_cast<double>(d.hi);
    if (!d.hi_closed) end = static_cast<double>(d.lo + 0.9L * (d.hi - d.lo));
    hi = std::min(hi, end);
  }
  return log_grid(1e-3, hi, points);
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : heat_ids()) ids.push_back(id);
  for (const auto& [id, _] : log_ids()) ids.push_back(id);
  for (const auto& [c, _] : yamabe_cases())
    for (const auto& [t, __] : yamabe_types()) ids.push_back("yamabe." + c + "." + t);
  ids.push_back("yamabe.case1_2.k_scaled");
  ids.push_back("power.li_yau");
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool catalog_has(const std::string& id) {
  auto ids = catalog_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

CatalogEntry resolve_catalog(const std::string& id, const CatalogParams& p) {
  CatalogEntry e;
  e.id = id;
  e.params = CurvatureParams{p.m, p.K, p.n};
  e.params.validate();
  FamilyExtras extra;
  extra.alpha = p.alpha;
  extra.delta = p.delta;
  extra.k = p.k;

  if (auto it = heat_ids().find(id); it != heat_ids().end()) {
    e.cand = make_heat_family(it->second, e.params, extra);
    e.eq = Equation::linear(0.0);
    e.branches = it->second == HeatKind::LiYauDavies || it->second == HeatKind::Hamilton ? kI : kII_III;
    return e;
  }

  if (auto it = log_ids().find(id); it != log_ids().end()) {
    const LogSpec& spec = it->second;
    if (spec.kind == LogKind::SharpNegFamily) {
      if (!(p.a < 0.0)) throw ConstructionError("log.sharp_neg_family: a must be < 0");
      if (!(p.eps > 0.0)) throw ConstructionError("log.sharp_neg_family: eps must be > 0");
      e.l = std::make_shared<const LFunction>(p.a, p.eps, p.t_max);
      extra.l = e.l.get();
    }
    e.cand = make_log_family(spec.kind, e.params, p.a, extra);
    e.eq = Equation::logarithmic(p.a);
    e.branches = spec.branches;
    e.system = spec.kind == LogKind::SharpCompact ? SystemKind::A2 : SystemKind::A3;
    return e;
  }

  if (id.rfind("yamabe.", 0) == 0) {
    std::string rest = id.substr(7);
    auto dot = rest.find('.');
    if (dot != std::string::npos) {
      std::string cs = rest.substr(0, dot), ts = rest.substr(dot + 1);
      auto ci = yamabe_cases().find(cs);
      if (ci != yamabe_cases().end()) {
        YamabeType ty;
        bool known = true;
        if (ts == "k_scaled" && ci->second == YamabeCase::C1_2) {
          ty = YamabeType::LiYau;
        } else if (auto ti = yamabe_types().find(ts); ti != yamabe_types().end()) {
          ty = ti->second;
        } else {
          known = false;
          ty = YamabeType::LiYau;
        }
        if (known) {
          e.cand = make_yamabe_family(ci->second, ty, e.params, p.a, p.b, p.p, p.M, extra);
          if (ts == "k_scaled") e.cand.name = id;
          e.eq = Equation::yamabe(p.a, p.b, p.p);
          e.branches = yamabe_branches(ci->second, ty);
          return e;
        }
      }
    }
  }

  if (id == "power.li_yau") {
    e.eq = Equation::power_sum(p.terms);
    double pmax = -std::numeric_limits<double>::infinity();
    for (const auto& t : p.terms) {
      if (!(t.coeff >= 0.0) || !(t.exponent <= 1.0))
        throw ConstructionError("power.li_yau: needs coefficients >= 0 and exponents <= 1");
      pmax = std::max(pmax, t.exponent);
    }
    if (pmax > 0.0 && p.alpha > 1.0 / pmax)
      throw ConstructionError("power.li_yau: alpha must be <= 1/max exponent");
    e.cand = make_power_li_yau(e.params, p.alpha);
    if (p.alpha == 1.0) {
      e.system = SystemKind::A2;
    } else {
      e.branches = kI;
    }
    return e;
  }

  throw std::invalid_argument("unknown catalog id '" + id + "'");
}

}  // namespace harnack
