#include "harnack/system_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace harnack {

std::string to_string(SystemKind s) {
  switch (s) {
    case SystemKind::A1: return "A1";
    case SystemKind::A2: return "A2";
    case SystemKind::A3: return "A3";
  }
  return "?";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::None: return "none";
    case Branch::I: return "I";
    case Branch::II: return "II";
    case Branch::III: return "III";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

SystemKind parse_system_kind(const std::string& s) {
  if (s == "A1") return SystemKind::A1;
  if (s == "A2") return SystemKind::A2;
  if (s == "A3") return SystemKind::A3;
  throw std::invalid_argument("unknown system kind '" + s + "' (expected A1, A2 or A3)");
}

Branch parse_branch(const std::string& s) {
  if (s == "none" || s.empty() || s == "any") return Branch::None;
  if (s == "I") return Branch::I;
  if (s == "II") return Branch::II;
  if (s == "III") return Branch::III;
  throw std::invalid_argument("unknown branch '" + s + "' (expected I, II, III or none)");
}

Tolerances Tolerances::for_candidate(const CandidateFunctions& cand) {
  Tolerances t;
  if (cand.param_meta.count("tabulated")) t.eq = 1e-6;
  return t;
}

MarginValues margins_from_values(const QuintupleSample& q, const ReactionTerm& r, double m_,
                                 double K_) {
  const Real m = m_, K = K_;
  const Real g = q.gamma.value, gp = q.gamma.deriv;
  const Real a = q.alpha.value, ap = q.alpha.deriv;
  const Real phi = q.phi.value, phip = q.phi.deriv;
  const Real c = q.c.value;
  const Real fourgc = 4.0L * g / m * c;

  MarginValues v;
  v.a1_first = (fourgc + (a - g) * r.h1 + a * r.h2 - 2.0L * K * g - gp) - g / a * (fourgc - ap);
  v.a1_first_lemma = (fourgc + (a - 2.0L * g) * r.h1 + a * r.h2 - 2.0L * K * g - gp) -
                     g / a * (fourgc - a * r.h1 - ap);
  v.a1_third = fourgc - a * r.h1 - ap;
  v.a1_second = phip - 2.0L * g / m * c * c + phi / a * v.a1_third;
  if (q.has_beta)
    v.a3_third = -(r.h1 + ap / a + q.beta.deriv / q.beta.value - 4.0L * g * phi / (m * a * a));
  else
    v.a3_third = std::numeric_limits<Real>::quiet_NaN();
  return v;
}

namespace {

MarginValues margins_at(const CandidateFunctions& cand, const Equation& eq,
                        const CurvatureParams& params, Real t, double f) {
  QuintupleSample q = evaluate(cand, t);
  return margins_from_values(q, eq.reaction(f), params.m, params.K);
}

}  // namespace

Real margin_A1_first(const CandidateFunctions& cand, const Equation& eq,
                     const CurvatureParams& params, Real t, double f) {
  return margins_at(cand, eq, params, t, f).a1_first;
}
Real margin_A1_first_lemma(const CandidateFunctions& cand, const Equation& eq,
                           const CurvatureParams& params, Real t, double f) {
  return margins_at(cand, eq, params, t, f).a1_first_lemma;
}
Real margin_A1_second(const CandidateFunctions& cand, const Equation& eq,
                      const CurvatureParams& params, Real t, double f) {
  return margins_at(cand, eq, params, t, f).a1_second;
}
Real margin_A1_third(const CandidateFunctions& cand, const Equation& eq,
                     const CurvatureParams& params, Real t, double f) {
  return margins_at(cand, eq, params, t, f).a1_third;
}
Real margin_A3_third(const CandidateFunctions& cand, const Equation& eq,
                     const CurvatureParams& params, Real t, double f) {
  if (!cand.has_beta()) throw std::invalid_argument(cand.name + ": no beta for the A3 margin");
  return margins_at(cand, eq, params, t, f).a3_third;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

SubCheck make_sub(const std::string& id, bool ok, double value, const std::string& detail) {
  return SubCheck{id, ok ? Verdict::Pass : Verdict::Fail, value, detail};
}

// worst (most negative) slack of deriv >= -tol * max(1, |value|) on the grid
struct MonoResult {
  double worst = std::numeric_limits<double>::infinity();
  double at = 0.0;
};

template <class Fn>
SubCheck monotone_check(const std::string& id, const std::vector<double>& grid, Fn sample,
                        double tol) {
  MonoResult r;
  for (double t : grid) {
    Sample s = sample(static_cast<Real>(t));
    double scale = std::max(1.0, std::fabs(static_cast<double>(s.value)));
    double slack = static_cast<double>(s.deriv) / scale;
    if (slack < r.worst) {
      r.worst = slack;
      r.at = t;
    }
  }
  bool ok = r.worst >= -tol;
  return make_sub(id, ok, r.worst,
                  "min scaled derivative " + num(r.worst) + " at t=" + num(r.at));
}

// sup of a ratio on the grid, inconclusive when still rising at an open end
template <class Fn>
SubCheck bounded_check(const std::string& id, const std::vector<double>& grid, Fn ratio,
                       double cap, bool window_closed_at_end) {
  std::vector<double> q;
  q.reserve(grid.size());
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = static_cast<double>(ratio(static_cast<Real>(grid[i])));
    q.push_back(v);
    if (!std::isfinite(v)) return make_sub(id, false, v, "non-finite ratio at t=" + num(grid[i]));
    if (v > sup) {
      sup = v;
      arg = i;
    }
  }
  if (sup > cap)
    return make_sub(id, false, sup, "grid sup " + num(sup) + " exceeds cap " + num(cap));
  // still rising at the end and not slowing down over the last two tenths
  std::size_t n = q.size();
  std::size_t back = std::max<std::size_t>(1, n / 10);
  bool rising = false;
  if (n > 2 * back && arg == n - 1) {
    double d1 = q[n - 1] - q[n - 1 - back];
    double d0 = q[n - 1 - back] - q[n - 1 - 2 * back];
    rising = d1 > 1e-6 * std::fabs(q[n - 1]) + 1e-12 && d1 >= 0.9 * d0;
  }
  if (rising && !window_closed_at_end)
    return SubCheck{id, Verdict::Inconclusive, sup,
                    "grid sup " + num(sup) + " still rising at t=" + num(grid.back())};
  std::string d = "grid sup " + num(sup) + " at t=" + num(grid[arg]);
  if (rising) d += " (window closed at its end)";
  return make_sub(id, true, sup, d);
}

}  // namespace

std::vector<SubCheck> check_condition_branch(const CandidateFunctions& cand, Branch branch,
                                             const std::vector<double>& t_grid,
                                             const CheckOptions& opt) {
  if (t_grid.empty()) throw std::invalid_argument("empty t_grid");
  if (branch == Branch::None) throw std::invalid_argument("check_condition_branch needs I, II or III");
  if (!cand.has_beta()) throw std::invalid_argument(cand.name + ": branch checks need beta");
  Tolerances tol = opt.tol.value_or(Tolerances::for_candidate(cand));
  for (double t : t_grid)
    if (!cand.t_domain.contains(t))
      throw std::domain_error(cand.name + ": t=" + num(t) + " outside domain " +
                              cand.t_domain.describe());

  const std::string pre = "branch_" + to_string(branch) + ".";
  std::vector<SubCheck> out;
  auto alpha = [&](Real t) { return cand.alpha(t); };
  auto beta = [&](Real t) { return cand.beta(t); };

  // gap = min{alpha - gamma, gamma}
  double gap_min = std::numeric_limits<double>::infinity(), gap_at = 0.0;
  for (double t : t_grid) {
    Real g = cand.gamma(t).value, a = cand.alpha(t).value;
    double gap = static_cast<double>(std::min(a - g, g));
    if (gap < gap_min) {
      gap_min = gap;
      gap_at = t;
    }
  }

  bool closed_end = cand.t_domain.bounded() && cand.t_domain.hi_closed &&
                    t_grid.back() == static_cast<double>(cand.t_domain.hi);

  if (branch == Branch::I) {
    if (opt.eps) {
      if (!(*opt.eps > 0.0)) throw std::invalid_argument("branch I needs eps > 0");
      bool ok = gap_min - *opt.eps >= -tol.eq;
      out.push_back(make_sub(pre + "min_gap_ge_eps", ok, gap_min,
                             "min{alpha-gamma,gamma} = " + num(gap_min) + " at t=" + num(gap_at) +
                                 ", eps = " + num(*opt.eps)));
    } else {
      bool ok = gap_min >= tol.strict;
      out.push_back(make_sub(pre + "min_gap_ge_eps", ok, gap_min,
                             "eps inferred from window: min{alpha-gamma,gamma} = " + num(gap_min) +
                                 " at t=" + num(gap_at)));
    }
    out.push_back(monotone_check(pre + "alpha_nondecreasing", t_grid, alpha, tol.eq));
    out.push_back(monotone_check(pre + "beta_nondecreasing", t_grid, beta, tol.eq));
    return out;
  }

  out.push_back(make_sub(pre + "alpha_gt_gamma_gt_0", gap_min >= tol.strict, gap_min,
                         "min{alpha-gamma,gamma} = " + num(gap_min) + " at t=" + num(gap_at)));
  out.push_back(monotone_check(pre + "alpha_nondecreasing", t_grid, alpha, tol.eq));

  if (branch == Branch::II) {
    auto q = [&](Real t) {
      Sample a = cand.alpha(t), b = cand.beta(t), g = cand.gamma(t);
      Real v = a.value * a.value * b.value / g.value;
      Real d = (2.0L * a.value * a.deriv * b.value * g.value + a.value * a.value * b.deriv * g.value -
                a.value * a.value * b.value * g.deriv) /
               (g.value * g.value);
      return Sample{v, d};
    };
    out.push_back(monotone_check(pre + "alpha2_beta_over_gamma_nondecreasing", t_grid, q, tol.eq));
    auto ratio = [&](Real t) {
      Real a = cand.alpha(t).value, b = cand.beta(t).value, g = cand.gamma(t).value;
      return b / (g * g * (a - g));
    };
    out.push_back(bounded_check(pre + "beta_over_gamma2_gap_bounded", t_grid, ratio,
                                opt.bound_cap, closed_end));
    return out;
  }

  auto q = [&](Real t) {
    Sample a = cand.alpha(t), g = cand.gamma(t);
    Real v = a.value * a.value / g.value;
    Real d = (2.0L * a.value * a.deriv * g.value - a.value * a.value * g.deriv) / (g.value * g.value);
    return Sample{v, d};
  };
  out.push_back(monotone_check(pre + "alpha2_over_gamma_nondecreasing", t_grid, q, tol.eq));
  out.push_back(monotone_check(pre + "beta_nondecreasing", t_grid, beta, tol.eq));
  auto ratio = [&](Real t) {
    Real a = cand.alpha(t).value, b = cand.beta(t).value, g = cand.gamma(t).value;
    return b / (a - g);
  };
  out.push_back(
      bounded_check(pre + "beta_over_gap_bounded", t_grid, ratio, opt.bound_cap, closed_end));
  return out;
}

std::vector<SubCheck> check_A2_boundary(const CandidateFunctions& cand) {
  std::vector<Real> ts;
  for (int j = 0; j <= 6; ++j) ts.push_back(1e-3L * std::pow(2.0L, -j));
  for (Real t : ts)
    if (!cand.t_domain.contains(t))
      throw std::domain_error(cand.name + ": boundary probe t=" + num(static_cast<double>(t)) +
                              " outside domain");

  std::vector<SubCheck> out;
  auto limit = [&](const std::string& id, const TimeFunction& fn) {
    std::vector<Real> v;
    for (Real t : ts) v.push_back(fn(t).value);
    bool finite = std::all_of(v.begin(), v.end(), [](Real x) { return std::isfinite(x); });
    Real d4 = std::fabs(v[4] - v[5]), d5 = std::fabs(v[5] - v[6]);
    Real scale = std::max(1.0L, std::fabs(v[6]));
    bool settled = d5 <= 1e-12L * scale || d5 <= 0.75L * d4;
    Real est = 2.0L * v[6] - v[5];  // Richardson, linear leading term
    bool ok = finite && settled;
    out.push_back(make_sub(id, ok, static_cast<double>(est),
                           ok ? "limit estimate " + num(static_cast<double>(est))
                              : "successive differences not contracting (" +
                                    num(static_cast<double>(d4)) + ", " +
                                    num(static_cast<double>(d5)) + ")"));
  };
  limit("a2.alpha_limit", cand.alpha);
  limit("a2.gamma_limit", cand.gamma);

  std::vector<Real> phi;
  for (Real t : ts) phi.push_back(cand.phi(t).value);
  bool increasing = true;
  for (std::size_t i = 1; i < phi.size(); ++i)
    if (!(phi[i] > phi[i - 1])) increasing = false;
  Real pt_first = phi.front() * ts.front(), pt_last = phi.back() * ts.back();
  bool away = pt_last > 0.0L && pt_last >= 0.5L * pt_first;
  out.push_back(make_sub("a2.phi_divergence", increasing && away, static_cast<double>(pt_last),
                         "phi*t at t=" + num(static_cast<double>(ts.back())) + " is " +
                             num(static_cast<double>(pt_last)) +
                             (increasing ? "" : "; phi not increasing as t -> 0")));
  return out;
}

SubCheck check_beta_zero(const CandidateFunctions& cand) {
  if (!cand.has_beta()) return make_sub("a3.beta_zero", false, 0.0, "candidate has no beta");
  Real t_ref = 1.0L;
  if (cand.t_domain.bounded() && !(cand.t_domain.hi > 1.0L))
    t_ref = cand.t_domain.hi_closed ? cand.t_domain.hi : cand.t_domain.hi * 0.999L;
  Real small = cand.beta(1e-8L).value, ref = cand.beta(t_ref).value;
  bool ok = std::fabs(small) < 1e-6L * ref;
  return make_sub("a3.beta_zero", ok, static_cast<double>(small),
                  "beta(1e-8) = " + num(static_cast<double>(small)) + ", beta(" +
                      num(static_cast<double>(t_ref)) + ") = " + num(static_cast<double>(ref)));
}

SystemCheckReport check_system(const CandidateFunctions& cand, const Equation& eq,
                               const CurvatureParams& params, SystemKind system, Branch branch,
                               const std::vector<double>& t_grid,
                               const std::vector<double>& f_grid, const CheckOptions& opt) {
  params.validate();
  if (t_grid.empty()) throw std::invalid_argument("empty t_grid");
  if (f_grid.empty()) throw std::invalid_argument("empty f_grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t_grid must be increasing");
  for (double t : t_grid)
    if (!cand.t_domain.contains(t))
      throw std::domain_error(cand.name + ": t=" + num(t) + " outside domain " +
                              cand.t_domain.describe());
  if (system == SystemKind::A3 && !cand.has_beta())
    throw std::invalid_argument(cand.name + ": the A3 system needs beta");

  SystemCheckReport rep;
  rep.candidate = cand.name;
  rep.system = system;
  rep.branch = branch;
  rep.tol = opt.tol.value_or(Tolerances::for_candidate(cand));
  rep.t_grid = t_grid;
  rep.experimental = cand.experimental;

  // f-window: drop points outside, add the window edge
  std::vector<double> fg;
  if (cand.f_window) {
    auto [lo, hi] = *cand.f_window;
    for (double f : f_grid)
      if (f >= lo && f <= hi) fg.push_back(f);
    double fmin = *std::min_element(f_grid.begin(), f_grid.end());
    double fmax = *std::max_element(f_grid.begin(), f_grid.end());
    for (double edge : {lo, hi})
      if (std::isfinite(edge) && edge >= fmin && edge <= fmax &&
          std::find(fg.begin(), fg.end(), edge) == fg.end())
        fg.push_back(edge);
    std::sort(fg.begin(), fg.end());
    if (fg.empty()) throw std::invalid_argument(cand.name + ": f-grid misses the admissible f-window");
  } else {
    fg = f_grid;
  }
  rep.f_grid = fg;

  std::ostringstream wl;
  wl.precision(10);
  wl << "t in [" << t_grid.front() << ", " << t_grid.back() << "] (" << t_grid.size()
     << " pts), f in [" << fg.front() << ", " << fg.back() << "] (" << fg.size() << " pts)";
  if (cand.t_domain.bounded()) wl << "; finite window, domain " << cand.t_domain.describe();
  rep.window_label = wl.str();

  struct Slot {
    std::string id;
    bool strict;
    Real MarginValues::*field;
  };
  std::vector<Slot> slots = {{"a1_first", false, &MarginValues::a1_first},
                             {"a1_second", false, &MarginValues::a1_second}};
  if (system == SystemKind::A3)
    slots.push_back({"a3_third", false, &MarginValues::a3_third});
  else
    slots.push_back({"a1_third", true, &MarginValues::a1_third});

  const std::size_t nt = t_grid.size(), nf = fg.size();
  for (const auto& s : slots) {
    ConstraintReport cr;
    cr.id = s.id;
    cr.strict = s.strict;
    cr.min_margin = std::numeric_limits<Real>::infinity();
    cr.values.reserve(nt * nf);
    rep.constraints.push_back(std::move(cr));
  }
  ConstraintReport positivity;
  positivity.id = system == SystemKind::A3 ? "beta_positive" : "alpha_gamma_positive";
  positivity.strict = true;
  positivity.min_margin = std::numeric_limits<Real>::infinity();

  std::vector<ReactionTerm> reactions;
  for (double f : fg) {
    reactions.push_back(eq.reaction(f));
    if (reactions.back().clamped) rep.clamped = true;
  }

  // sequential t-major sweep; ties keep the first location
  for (std::size_t i = 0; i < nt; ++i) {
    QuintupleSample q = evaluate(cand, t_grid[i]);
    Real pos = system == SystemKind::A3 ? q.beta.value : std::min(q.alpha.value, q.gamma.value);
    positivity.values.push_back(pos);
    if (pos < positivity.min_margin) {
      positivity.min_margin = pos;
      positivity.worst_t = t_grid[i];
    }
    for (std::size_t j = 0; j < nf; ++j) {
      MarginValues mv = margins_from_values(q, reactions[j], params.m, params.K);
      for (std::size_t k = 0; k < slots.size(); ++k) {
        Real v = mv.*(slots[k].field);
        auto& cr = rep.constraints[k];
        cr.values.push_back(v);
        if (v < cr.min_margin || std::isnan(v)) {
          if (!(std::isnan(cr.min_margin))) {
            cr.min_margin = v;
            cr.worst_t = t_grid[i];
            cr.worst_f = fg[j];
          }
        }
      }
    }
  }
  rep.constraints.push_back(std::move(positivity));

  for (auto& cr : rep.constraints) {
    double mm = static_cast<double>(cr.min_margin);
    cr.pass = std::isfinite(mm) && (cr.strict ? mm >= rep.tol.strict : mm >= -rep.tol.eq);
    if (!cr.pass) rep.failing.push_back(cr.id);
  }

  if (system == SystemKind::A2) rep.boundary_checks = check_A2_boundary(cand);
  if (system == SystemKind::A3) {
    rep.boundary_checks.push_back(check_beta_zero(cand));
    std::vector<Branch> todo;
    if (branch == Branch::None)
      todo = {Branch::I, Branch::II, Branch::III};
    else
      todo = {branch};
    bool any_pass = false, any_inconclusive = false;
    for (Branch b : todo) {
      auto subs = check_condition_branch(cand, b, t_grid, opt);
      bool pass = true, inconc = false;
      for (const auto& s : subs) {
        if (s.verdict == Verdict::Fail) pass = false;
        if (s.verdict == Verdict::Inconclusive) inconc = true;
      }
      if (pass && !inconc) any_pass = true;
      if (pass && inconc) any_inconclusive = true;
      rep.branch_checks.insert(rep.branch_checks.end(), subs.begin(), subs.end());
    }
    if (!any_pass) {
      if (any_inconclusive) {
        for (const auto& s : rep.branch_checks)
          if (s.verdict == Verdict::Inconclusive) rep.inconclusive.push_back(s.id);
      } else {
        for (const auto& s : rep.branch_checks)
          if (s.verdict == Verdict::Fail) rep.failing.push_back(s.id);
      }
    }
  }
  for (const auto& s : rep.boundary_checks) {
    if (s.verdict == Verdict::Fail) rep.failing.push_back(s.id);
    if (s.verdict == Verdict::Inconclusive) rep.inconclusive.push_back(s.id);
  }

  if (!rep.failing.empty())
    rep.verdict = Verdict::Fail;
  else if (!rep.inconclusive.empty())
    rep.verdict = Verdict::Inconclusive;
  else
    rep.verdict = Verdict::Pass;
  return rep;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: need 0 < lo <= hi, n >= 1");
  if (n == 1) return {lo};
  std::vector<double> g(n);
  double r = std::log(hi / lo);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(r * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1 || !(hi >= lo)) throw std::invalid_argument("linear_grid: need lo <= hi, n >= 1");
  if (n == 1) return {lo};
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

std::vector<double> refine_grid(const std::vector<double>& grid, bool geometric) {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) {
      double a = grid[i - 1], b = grid[i];
      out.push_back(geometric && a > 0 && b > 0 ? std::sqrt(a * b) : 0.5 * (a + b));
    }
    out.push_back(grid[i]);
  }
  return out;
}

}  // namespace harnack
