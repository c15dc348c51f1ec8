#include "harnack/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "harnack/ode_lab.hpp"
#include "harnack/paths.hpp"

namespace harnack {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kInf = std::numeric_limits<double>::infinity();

// Reads fields of a mutable config object; missing fields get their default
// written back so the object ends up as the resolved config.
class Cfg {
 public:
  Cfg(json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (j_.is_null()) j_ = json::object();
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  template <class T>
  T get(const std::string& k, T def) {
    if (!j_.contains(k)) j_[k] = def;
    return as<T>(k);
  }

  template <class T>
  T need(const std::string& k) {
    if (!j_.contains(k)) throw ConfigError(where(k) + " is required");
    return as<T>(k);
  }

  Cfg sub(const std::string& k) {
    if (!j_.contains(k)) j_[k] = json::object();
    return Cfg(j_[k], where(k));
  }

  json& raw(const std::string& k) { return j_[k]; }
  json& self() { return j_; }
  std::string where(const std::string& k = "") const {
    std::string p = path_.empty() ? "config" : path_;
    return k.empty() ? p : p + "." + k;
  }

 private:
  template <class T>
  T as(const std::string& k) {
    try {
      return j_.at(k).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where(k) + ": " + e.what());
    }
  }

  json& j_;
  std::string path_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

json num(double v) {
  if (!std::isfinite(v)) return json(nullptr);
  return json(v);
}
json num(Real v) { return num(static_cast<double>(v)); }

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << s;
}

class Output {
 public:
  explicit Output(const RunContext& ctx) : ctx_(ctx), start_(std::chrono::steady_clock::now()) {
    if (!ctx_.out_dir.empty()) fs::create_directories(ctx_.out_dir);
  }
  bool enabled() const { return !ctx_.out_dir.empty(); }
  fs::path path(const std::string& name) const { return fs::path(ctx_.out_dir) / name; }

  void finish(const std::string& command, const json& report) const {
    if (!enabled()) return;
    write_text(path("report.json"), report.dump(2) + "\n");
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json meta = {{"command", command},
                 {"finished_utc", utc_now()},
                 {"elapsed_seconds", secs},
                 {"version", kVersion}};
    write_text(path("metadata.json"), meta.dump(2) + "\n");
  }

  void say(const std::string& line) const {
    if (!ctx_.quiet) std::cout << line << '\n';
  }

 private:
  const RunContext& ctx_;
  std::chrono::steady_clock::time_point start_;
};

std::uint64_t resolve_seed(Cfg& c, const RunContext& ctx) {
  std::uint64_t s = c.get<std::uint64_t>("seed", 1);
  if (ctx.seed) {
    s = *ctx.seed;
    c.self()["seed"] = s;
  }
  return s;
}

std::vector<double> parse_axis_grid(Cfg c, double lo, double hi, int points, bool log_default) {
  lo = c.get<double>("lo", lo);
  hi = c.get<double>("hi", hi);
  points = c.get<int>("points", points);
  std::string spacing = c.get<std::string>("spacing", log_default ? "log" : "linear");
  require(points >= 1, c.where("points") + " must be >= 1");
  require(hi >= lo, c.where() + ": hi must be >= lo");
  if (spacing == "log") {
    require(lo > 0.0, c.where("lo") + " must be > 0 for log spacing");
    return log_grid(lo, hi, points);
  }
  require(spacing == "linear", c.where("spacing") + " must be 'log' or 'linear'");
  return linear_grid(lo, hi, points);
}

int combine(int a, int b) {
  if (a == kExitViolation || b == kExitViolation) return kExitViolation;
  if (a == kExitInconclusive || b == kExitInconclusive) return kExitInconclusive;
  return kExitPass;
}

CatalogEntry resolve_entry(Cfg& c) {
  std::string id = c.need<std::string>("candidate");
  require(catalog_has(id), "unknown catalog id '" + id + "'");
  json& pj = c.raw("params");
  CatalogParams cp = parse_catalog_params(pj);
  json terms = json::array();
  for (const auto& t : cp.terms) terms.push_back({t.coeff, t.exponent});
  pj = {{"m", cp.m},         {"K", cp.K},         {"n", cp.n},       {"a", cp.a},
        {"b", cp.b},         {"p", cp.p},         {"M", cp.M},       {"alpha", cp.alpha},
        {"delta", cp.delta}, {"k", cp.k},         {"eps", cp.eps},   {"t_max", cp.t_max},
        {"terms", terms}};
  return resolve_catalog(id, cp);
}

// Initial data u0(x, y) > 0 from {"kind": ...}.
Field parse_initial(Cfg c, const GridSpec& g) {
  std::string kind = c.get<std::string>("kind", "exp_cos");
  if (kind == "file") {
    Field f = read_field(c.need<std::string>("path"));
    require(f.grid.same_as(g), c.where("path") + ": field grid differs from config grid");
    return f;
  }
  const double Lx = g.extent[0], Ly = g.extent[1];
  const double ox = g.origin[0], oy = g.origin[1];
  const int dim = g.dim;
  std::function<double(double, double)> u0;
  if (kind == "constant") {
    double v = c.get<double>("value", 1.0);
    require(v > 0.0, c.where("value") + " must be > 0");
    u0 = [v](double, double) { return v; };
  } else if (kind == "exp_cos") {
    // exp(A cos(2 pi k (x - ox)/Lx) [+ A cos(2 pi k (y - oy)/Ly)])
    double A = c.get<double>("amplitude", 0.5);
    int k = c.get<int>("mode", 1);
    u0 = [=](double x, double y) {
      double s = A * std::cos(2.0 * M_PI * k * (x - ox) / Lx);
      if (dim == 2) s += A * std::cos(2.0 * M_PI * k * (y - oy) / Ly);
      return std::exp(s);
    };
  } else if (kind == "sine") {
    double mean = c.get<double>("mean", 2.0);
    double A = c.get<double>("amplitude", 1.0);
    int k = c.get<int>("mode", 1);
    require(mean > std::fabs(A) * (dim == 2 ? 2.0 : 1.0), c.where() + ": data must stay positive");
    u0 = [=](double x, double y) {
      double s = mean + A * std::sin(2.0 * M_PI * k * (x - ox) / Lx);
      if (dim == 2) s += A * std::sin(2.0 * M_PI * k * (y - oy) / Ly);
      return s;
    };
  } else if (kind == "gaussian") {
    double floor = c.get<double>("floor", 1e-3);
    double width = c.get<double>("width", 0.5);
    double height = c.get<double>("height", 1.0);
    require(floor > 0.0 && width > 0.0 && height >= 0.0,
            c.where() + ": need floor > 0, width > 0, height >= 0");
    double cx = ox + 0.5 * Lx, cy = oy + 0.5 * Ly;
    u0 = [=](double x, double y) {
      double r2 = (x - cx) * (x - cx) + (dim == 2 ? (y - cy) * (y - cy) : 0.0);
      return floor + height * std::exp(-r2 / (2.0 * width * width));
    };
  } else {
    throw ConfigError(c.where("kind") + ": unknown initial data '" + kind +
                      "' (constant, exp_cos, sine, gaussian, file)");
  }
  return make_field(g, u0);
}

double max_finite(const std::vector<double>& v) {
  double m = -kInf;
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, x);
  return m;
}

json grid_json(const GridSpec& g) {
  return {{"dim", g.dim},
          {"extent", g.extent},
          {"points", g.points},
          {"origin", g.origin},
          {"boundary", to_string(g.boundary)}};
}

}  // namespace

// ---------------------------------------------------------------- parsing

Equation parse_equation(const json& in) {
  json j = in;
  Cfg c(j, "equation");
  std::string kind = c.need<std::string>("kind");
  if (kind == "linear") return Equation::linear(c.get<double>("p", 0.0));
  if (kind == "log" || kind == "logarithmic") {
    double a = c.need<double>("a");
    require(a != 0.0, "equation.a must be nonzero for the logarithmic equation");
    return Equation::logarithmic(a);
  }
  if (kind == "power_sum") {
    std::vector<PowerTerm> terms;
    for (const auto& t : c.need<json>("terms")) {
      if (t.is_array() && t.size() == 2)
        terms.push_back({t[0].get<double>(), t[1].get<double>()});
      else if (t.is_object())
        terms.push_back({t.at("coeff").get<double>(), t.at("exponent").get<double>()});
      else
        throw ConfigError("equation.terms entries are [coeff, exponent] or objects");
    }
    require(!terms.empty(), "equation.terms must not be empty");
    return Equation::power_sum(terms);
  }
  if (kind == "yamabe")
    return Equation::yamabe(c.need<double>("a"), c.need<double>("b"), c.need<double>("p"));
  throw ConfigError("equation.kind must be linear, log, power_sum or yamabe");
}

CatalogParams parse_catalog_params(const json& in) {
  json j = in;
  Cfg c(j, "params");
  CatalogParams p;
  p.m = c.get<double>("m", p.m);
  p.K = c.get<double>("K", p.K);
  p.n = c.get<int>("n", p.n);
  p.a = c.get<double>("a", p.a);
  p.b = c.get<double>("b", p.b);
  p.p = c.get<double>("p", p.p);
  p.M = c.get<double>("M", p.M);
  p.alpha = c.get<double>("alpha", p.alpha);
  p.delta = c.get<double>("delta", p.delta);
  p.k = c.get<double>("k", p.k);
  p.eps = c.get<double>("eps", p.eps);
  p.t_max = c.get<double>("t_max", p.t_max);
  if (c.has("terms")) {
    p.terms.clear();
    for (const auto& t : c.need<json>("terms")) {
      require(t.is_array() && t.size() == 2, "params.terms entries are [coeff, exponent]");
      p.terms.push_back({t[0].get<double>(), t[1].get<double>()});
    }
  }
  require(p.m > 0.0, "params.m must be > 0");
  require(p.K >= 0.0, "params.K must be >= 0");
  require(p.n >= 1, "params.n must be >= 1");
  return p;
}

GridSpec parse_grid(const json& in) {
  json j = in;
  Cfg c(j, "grid");
  GridSpec g;
  g.dim = c.get<int>("dim", 1);
  require(g.dim == 1 || g.dim == 2, "grid.dim must be 1 or 2");
  auto pair_of = [&](const std::string& key, auto def) {
    using T = typename decltype(def)::value_type;
    if (!c.has(key)) return def;
    if (c.raw(key).is_number()) c.raw(key) = json::array({c.raw(key)});  // scalar: same on every axis
    auto v = c.need<std::vector<T>>(key);
    require(v.size() == static_cast<std::size_t>(g.dim) || v.size() == 2,
            "grid." + key + " needs one value per axis");
    decltype(def) out = def;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    if (g.dim == 2 && v.size() == 1) out[1] = v[0];
    return out;
  };
  g.extent = pair_of("extent", g.extent);
  g.points = pair_of("points", g.points);
  g.origin = pair_of("origin", g.origin);
  if (g.dim == 1) g.points[1] = 1;
  else if (!c.has("points") || c.need<std::vector<std::size_t>>("points").size() == 1)
    g.points[1] = g.points[0];
  if (g.dim == 2 && !c.has("extent")) g.extent[1] = g.extent[0];
  g.boundary = parse_boundary(c.get<std::string>("boundary", "periodic"));
  require(g.boundary != Boundary::Open, "grid.boundary 'open' is for analytic samples only");
  g.validate();
  return g;
}

// ---------------------------------------------------------------- reports

json to_json(const SystemCheckReport& r) {
  json j;
  j["candidate"] = r.candidate;
  j["system"] = to_string(r.system);
  j["branch"] = to_string(r.branch);
  j["verdict"] = to_string(r.verdict);
  j["tolerances"] = {{"eq", r.tol.eq}, {"strict", r.tol.strict}};
  j["window"] = r.window_label;
  j["t_grid"] = {{"lo", r.t_grid.front()}, {"hi", r.t_grid.back()}, {"points", r.t_grid.size()}};
  j["f_grid"] = {{"lo", r.f_grid.front()}, {"hi", r.f_grid.back()}, {"points", r.f_grid.size()}};
  j["clamped"] = r.clamped;
  j["experimental"] = r.experimental;
  j["failing"] = r.failing;
  j["inconclusive"] = r.inconclusive;
  json cs = json::array();
  for (const auto& c : r.constraints)
    cs.push_back({{"id", c.id},
                  {"strict", c.strict},
                  {"min_margin", num(c.min_margin)},
                  {"worst_t", c.worst_t},
                  {"worst_f", c.worst_f},
                  {"pass", c.pass}});
  j["constraints"] = cs;
  auto subs = [](const std::vector<SubCheck>& v) {
    json a = json::array();
    for (const auto& s : v)
      a.push_back({{"id", s.id},
                   {"verdict", to_string(s.verdict)},
                   {"value", num(s.value)},
                   {"detail", s.detail}});
    return a;
  };
  j["boundary_checks"] = subs(r.boundary_checks);
  j["branch_checks"] = subs(r.branch_checks);
  return j;
}

json to_json(const BoundCheck& b) {
  return {{"id", b.id},         {"min_slack", num(b.min_slack)}, {"worst_t", b.worst_t},
          {"worst_node", b.worst_node}, {"tol", num(b.tol)},       {"pass", b.pass}};
}

void write_margin_csv(const std::string& path, const SystemCheckReport& r) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << std::setprecision(17) << "t,f,margin_id,margin\n";
  const std::size_t nf = r.f_grid.size();
  for (const auto& c : r.constraints) {
    if (c.values.empty()) continue;
    // positivity constraints do not depend on f: one row per t, f left empty
    bool per_t = c.id == "beta_positive" || c.id == "alpha_gamma_positive";
    for (std::size_t k = 0; k < c.values.size(); ++k) {
      os << r.t_grid[per_t ? k : k / nf] << ',';
      if (!per_t) os << r.f_grid[k % nf];
      os << ',' << c.id << ',' << static_cast<double>(c.values[k]) << '\n';
    }
  }
}

// ---------------------------------------------------------------- verify-system

CommandResult cmd_verify_system(const json& in, const RunContext& ctx) {
  json cfg = in;
  Cfg c(cfg, "");
  c.get<std::string>("command", "verify-system");
  CatalogEntry e = resolve_entry(c);

  SystemKind sys = c.has("system") ? parse_system_kind(c.need<std::string>("system")) : e.system;
  cfg["system"] = to_string(sys);

  std::vector<Branch> branches;
  if (sys != SystemKind::A3) {
    branches = {Branch::None};
  } else if (c.has("branch")) {
    branches = {parse_branch(c.need<std::string>("branch"))};
  } else {
    branches = e.branches.empty() ? std::vector<Branch>{Branch::None} : e.branches;
    json names = json::array();
    for (Branch b : branches) names.push_back(to_string(b));
    cfg["branches_from_catalog"] = names;
  }

  std::vector<double> t_grid;
  if (c.has("t_grid")) {
    t_grid = parse_axis_grid(c.sub("t_grid"), 1e-3, 10.0, 200, true);
  } else {
    t_grid = e.default_t_grid(200);
    cfg["t_grid"] = {{"lo", t_grid.front()}, {"hi", t_grid.back()}, {"points", t_grid.size()},
                     {"spacing", "log"}};
  }
  std::vector<double> f_grid = parse_axis_grid(c.sub("f_grid"), -10.0, 10.0, 21, false);

  CheckOptions opt;
  if (c.has("tol")) {
    Cfg tc = c.sub("tol");
    Tolerances t = Tolerances::for_candidate(e.cand);
    t.eq = tc.get<double>("eq", t.eq);
    t.strict = tc.get<double>("strict", t.strict);
    opt.tol = t;
  }
  if (c.has("eps")) opt.eps = c.need<double>("eps");
  opt.bound_cap = c.get<double>("bound_cap", opt.bound_cap);

  Output out(ctx);
  CommandResult res;
  json reports = json::array();
  int code = kExitPass;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    SystemCheckReport r = check_system(e.cand, e.eq, e.params, sys, branches[i], t_grid, f_grid, opt);
    int rc = r.verdict == Verdict::Pass   ? kExitPass
             : r.verdict == Verdict::Fail ? kExitViolation
                                          : kExitInconclusive;
    code = combine(code, rc);
    json rj = to_json(r);
    std::string csv = "margins_" + to_string(sys) + "_" + to_string(branches[i]) + ".csv";
    rj["margin_csv"] = csv;
    reports.push_back(rj);
    if (out.enabled()) write_margin_csv(out.path(csv).string(), r);
    out.say(e.id + " " + to_string(sys) + "/" + to_string(branches[i]) + ": " +
            to_string(r.verdict) +
            (r.failing.empty() ? "" : " (first failing: " + r.failing.front() + ")"));
  }
  res.exit_code = code;
  res.report = {{"command", "verify-system"},
                {"config", cfg},
                {"reports", reports},
                {"exit_code", code}};
  out.finish("verify-system", res.report);
  return res;
}

// ---------------------------------------------------------------- simulate

namespace {

struct SimRun {
  Simulation sim;
  std::vector<std::vector<double>> F;  // per stencil time, when a candidate is set
  std::vector<BoundCheck> bounds;      // sharp_log / liyau_power, tol filled later
  std::optional<BoundCheck> monotone;
  std::optional<PairReport> pairs;
};

struct SimPlan {
  Equation eq = Equation::linear(0.0);
  GridSpec grid;
  json initial;
  double t_end = 1.0;
  double dt = 0.0;
  SimOptions opt;
  std::optional<CatalogEntry> cand;
  bool sharp_log = false;
  bool liyau_power = false;
  std::optional<MonotoneQuantity> monotone;
  double monotone_tol = 1e-4;
  std::size_t n_pairs = 0;
  std::array<double, 2> pair_times{0.0, 0.0};
  std::uint64_t seed = 1;
};

double log_a(const Equation& eq) {
  if (const auto* l = std::get_if<LogEq>(&eq.kind())) return l->a;
  return 0.0;
}

// Nearest recorded snapshot to t.
const Field& nearest(const std::vector<Field>& snaps, double t) {
  const Field* best = &snaps.front();
  for (const auto& s : snaps)
    if (std::fabs(s.t - t) < std::fabs(best->t - t)) best = &s;
  return *best;
}

SimRun run_plan(const SimPlan& p, const GridSpec& grid, double dt) {
  json init = p.initial;
  Field u0 = parse_initial(Cfg(init, "initial"), grid);
  SimRun r;
  r.sim = simulate(p.eq, u0, p.t_end, dt, p.opt);
  if (p.cand)
    for (const auto& st : r.sim.stencils)
      r.F.push_back(harnack_F(p.cand->cand, p.eq, p.cand->params, st[0], st[1], st[2]));
  std::vector<Field> states;
  for (const auto& s : r.sim.snapshots)
    if (s.t > 0.0) states.push_back(s);
  if (p.sharp_log) r.bounds.push_back(sharp_log_check(log_a(p.eq), grid.dim, states, 0.0));
  if (p.liyau_power) r.bounds.push_back(liyau_power_check(grid.dim, states, 0.0));
  if (p.monotone)
    r.monotone = monotone_checks(r.sim.snapshots, *p.monotone, grid.dim, log_a(p.eq),
                                 p.monotone_tol);
  if (p.n_pairs > 0) {
    require(p.cand.has_value(), "checks.pairs needs checks.candidate");
    const Field& s1 = nearest(r.sim.snapshots, p.pair_times[0]);
    const Field& s2 = nearest(r.sim.snapshots, p.pair_times[1]);
    require(s1.t > 0.0 && s2.t > s1.t, "checks.pairs.times must select two distinct snapshots");
    PathEquation kind = p.eq.is_log() ? PathEquation::Log : PathEquation::Power;
    r.pairs = harnack_pairs(p.cand->cand, kind, log_a(p.eq), s1, s2, p.n_pairs, p.seed, 0.0);
  }
  return r;
}

GridSpec doubled(const GridSpec& g) {
  GridSpec f = g;
  f.points[0] *= 2;
  if (g.dim == 2) f.points[1] *= 2;
  return f;
}

}  // namespace

CommandResult cmd_simulate(const json& in, const RunContext& ctx) {
  json cfg = in;
  Cfg c(cfg, "");
  c.get<std::string>("command", "simulate");
  SimPlan p;
  p.eq = parse_equation(c.need<json>("equation"));
  {
    json& gj = c.raw("grid");
    p.grid = parse_grid(gj);
    gj = grid_json(p.grid);
  }
  c.sub("initial").get<std::string>("kind", "exp_cos");
  p.initial = cfg["initial"];
  p.t_end = c.get<double>("t_end", 1.0);
  require(p.t_end > 0.0, "t_end must be > 0");
  // default dt: largest stable step dividing t_end/10, so the default
  // check times t_end k/10 fall on steps in the run and its refinement
  double dt_max = max_stable_dt(p.grid);
  double tenth = p.t_end / 10.0;
  p.dt = c.get<double>("dt", tenth / std::ceil(tenth / dt_max));
  require(p.dt > 0.0, "dt must be > 0");
  p.opt.record_every = c.get<int>("record_every", 10);
  p.opt.max_steps = c.get<long>("max_steps", p.opt.max_steps);
  p.seed = resolve_seed(c, ctx);

  Cfg chk = c.sub("checks");
  if (chk.has("candidate")) {
    Cfg cc = chk.sub("candidate");
    p.cand = resolve_entry(cc);
    std::vector<double> times;
    if (chk.has("times")) {
      times = chk.need<std::vector<double>>("times");
    } else {
      for (int k = 1; k <= 9; ++k) times.push_back(p.t_end * k / 10.0);
      chk.raw("times") = times;
    }
    p.opt.stencil_times = times;
    p.opt.stencil_half_width = 1;
  }
  p.sharp_log = chk.get<bool>("sharp_log", false);
  require(!p.sharp_log || p.eq.is_log(), "checks.sharp_log needs a logarithmic equation");
  p.liyau_power = chk.get<bool>("liyau_power", false);
  if (chk.has("monotone")) {
    std::string q = chk.need<std::string>("monotone");
    if (q == "t_pow_half_u") p.monotone = MonotoneQuantity::TPowHalfU;
    else if (q == "F_log") p.monotone = MonotoneQuantity::FLog;
    else throw ConfigError("checks.monotone must be t_pow_half_u or F_log");
    require(*p.monotone != MonotoneQuantity::FLog || p.eq.is_log(),
            "checks.monotone F_log needs a logarithmic equation");
    p.monotone_tol = chk.get<double>("monotone_tol", 1e-4);
  }
  if (chk.has("pairs")) {
    Cfg pc = chk.sub("pairs");
    p.n_pairs = pc.get<std::size_t>("count", 64);
    auto tt = pc.get<std::vector<double>>("times", {p.t_end * 0.25, p.t_end});
    require(tt.size() == 2, "checks.pairs.times needs two entries");
    p.pair_times = {tt[0], tt[1]};
  }

  // tol_F: a number, or "refine" = 10 x the change seen under one refinement
  bool refine = true;
  double tol_fixed = 0.0;
  if (c.has("tol_F") && c.raw("tol_F").is_number()) {
    refine = false;
    tol_fixed = c.need<double>("tol_F");
  } else {
    require(c.get<std::string>("tol_F", "refine") == "refine", "tol_F must be a number or 'refine'");
  }

  Output out(ctx);
  SimRun run = run_plan(p, p.grid, p.dt);
  std::optional<SimRun> fine;
  if (refine && (p.cand || p.sharp_log || p.liyau_power || p.n_pairs > 0)) {
    GridSpec g2 = doubled(p.grid);
    fine = run_plan(p, g2, p.dt / 4.0);
  }
  auto tol_from = [&](double coarse, double finer) {
    return std::max(10.0 * std::fabs(coarse - finer), 1e-12);
  };

  json checks = json::object();
  int code = kExitPass;
  if (p.cand) {
    double tol = tol_fixed;
    if (fine) {
      double d = 0.0;
      for (std::size_t k = 0; k < run.F.size(); ++k)
        d = std::max(d, refinement_difference(p.grid, run.F[k], doubled(p.grid), fine->F[k]));
      tol = std::max(10.0 * d, 1e-12);
    }
    double maxF = -kInf;
    json per = json::array();
    for (std::size_t k = 0; k < run.F.size(); ++k) {
      double mk = max_finite(run.F[k]);
      maxF = std::max(maxF, mk);
      per.push_back({{"t", run.sim.stencils[k][1].t}, {"max_F", num(mk)}});
    }
    bool ok = maxF <= tol;
    code = combine(code, ok ? kExitPass : kExitViolation);
    checks["harnack_F"] = {{"candidate", p.cand->id}, {"max_F", num(maxF)}, {"tol_F", tol},
                           {"per_time", per},         {"pass", ok}};
  }
  for (std::size_t i = 0; i < run.bounds.size(); ++i) {
    BoundCheck b = run.bounds[i];
    b.tol = fine ? tol_from(b.min_slack, fine->bounds[i].min_slack) : tol_fixed;
    b.pass = b.min_slack >= -b.tol;
    code = combine(code, b.pass ? kExitPass : kExitViolation);
    checks[b.id] = to_json(b);
  }
  if (run.monotone) {
    code = combine(code, run.monotone->pass ? kExitPass : kExitViolation);
    checks["monotone"] = to_json(*run.monotone);
  }
  if (run.pairs) {
    PairReport& pr = *run.pairs;
    pr.tol = fine ? tol_from(pr.min_slack, fine->pairs->min_slack) : tol_fixed;
    pr.pass = pr.min_slack >= -pr.tol;
    std::stable_partition(pr.pairs.begin(), pr.pairs.end(),
                          [&](const PairResult& q) { return q.slack < -pr.tol; });
    json arr = json::array();
    for (const auto& q : pr.pairs)
      arr.push_back({{"node1", q.node1}, {"node2", q.node2}, {"dist", q.dist},
                     {"lhs", q.lhs},     {"rhs", q.rhs},     {"slack", q.slack}});
    code = combine(code, pr.pass ? kExitPass : kExitViolation);
    checks["pairs"] = {{"min_slack", num(pr.min_slack)}, {"tol", pr.tol}, {"pass", pr.pass},
                       {"pairs", arr}};
  }

  // invariants reported, not gated
  const auto& snaps = run.sim.snapshots;
  double umin = kInf;
  for (const auto& s : snaps)
    for (double v : s.u) umin = std::min(umin, v);
  json inv = {{"min_u", umin}, {"positive", umin > 0.0}};
  if (p.eq.is_linear() && log_a(p.eq) == 0.0 && p.grid.boundary == Boundary::Periodic) {
    auto mean = [](const Field& f) {
      double s = 0.0;
      for (double v : f.u) s += v;
      return s / static_cast<double>(f.u.size());
    };
    double m0 = mean(snaps.front()), drift = 0.0;
    for (const auto& s : snaps) drift = std::max(drift, std::fabs(mean(s) - m0) / m0);
    inv["mean_relative_drift"] = drift;
  }

  Cfg dump = c.sub("dump");
  bool dump_bin = dump.get<bool>("binary", true);
  bool dump_csv = dump.get<bool>("csv", false);
  json files = json::array();
  if (out.enabled()) {
    if (dump_bin) {
      write_field(out.path("final.bin").string(), snaps.back());
      files.push_back("final.bin");
    }
    if (dump_csv) {
      write_field_csv(out.path("final.csv").string(), snaps.back());
      files.push_back("final.csv");
    }
  }

  CommandResult res;
  res.exit_code = code;
  res.report = {{"command", "simulate"},
                {"config", cfg},
                {"run",
                 {{"dt", run.sim.dt},
                  {"steps", run.sim.steps},
                  {"halvings_used", run.sim.halvings_used},
                  {"snapshots", snaps.size()},
                  {"t_final", snaps.back().t}}},
                {"tolerance_rule", refine ? "10 x change under one refinement (h/2, dt/4)"
                                          : "fixed tol_F from config"},
                {"checks", checks},
                {"invariants", inv},
                {"files", files},
                {"exit_code", code}};
  out.say("simulate: " + std::string(code == kExitPass ? "pass" : "violation") + " (" +
          std::to_string(run.sim.steps) + " steps)");
  out.finish("simulate", res.report);
  return res;
}

// ---------------------------------------------------------------- sharpness

CommandResult cmd_sharpness(const json& in, const RunContext& ctx) {
  json cfg = in;
  Cfg c(cfg, "");
  c.get<std::string>("command", "sharpness");
  std::uint64_t seed = resolve_seed(c, ctx);
  int n = c.get<int>("n", 1);
  require(n == 1 || n == 2, "n must be 1 or 2");
  double tol = c.get<double>("tol", 1e-10);
  int samples = c.get<int>("samples", 1000);
  int tuples = c.get<int>("tuples", 100);
  auto a_range = c.get<std::vector<double>>("a_abs_range", {0.25, 2.0});
  auto t_range = c.get<std::vector<double>>("t_range", {0.1, 3.0});
  auto x_range = c.get<std::vector<double>>("x_range", {-2.0, 2.0});
  require(a_range.size() == 2 && 0.0 < a_range[0] && a_range[0] <= a_range[1],
          "a_abs_range must be [lo, hi] with 0 < lo <= hi");
  require(t_range.size() == 2 && 0.0 < t_range[0] && t_range[0] < t_range[1],
          "t_range must be [lo, hi] with 0 < lo < hi");
  require(x_range.size() == 2 && x_range[0] < x_range[1], "x_range must be [lo, hi]");
  require(samples >= 1 && tuples >= 1, "samples and tuples must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(a_range[0], a_range[1]), ut(t_range[0], t_range[1]),
      ux(x_range[0], x_range[1]), uc(-1.0, 1.0);
  std::bernoulli_distribution sign(0.5);
  auto rand_a = [&] { return sign(rng) ? ua(rng) : -ua(rng); };
  auto rand_x = [&] {
    Point x{ux(rng), 0.0};
    if (n == 2) x[1] = ux(rng);
    return x;
  };

  Output out(ctx);
  json checks = json::object();
  int code = kExitPass;
  auto gate = [&](const std::string& id, json j, bool ok) {
    j["pass"] = ok;
    checks[id] = j;
    code = combine(code, ok ? kExitPass : kExitViolation);
  };

  // exact solution residual, analytic sharp gap and the Liouville quantity
  double max_res = 0.0, max_gap = 0.0, max_liou = 0.0;
  for (int i = 0; i < samples; ++i) {
    ExactLogSolution sol{rand_a(), n, rand_x(), uc(rng)};
    Point x = rand_x();
    double t = ut(rng);
    max_res = std::max(max_res, std::fabs(exact_log_residual(sol, x, t)));
    max_gap = std::max(max_gap, std::fabs(exact_log_sharp_gap(sol, x, t)));
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) r2 += (x[d] - sol.x0[d]) * (x[d] - sol.x0[d]);
    double expect = sol.C + sol.a * r2 / (4.0 * -std::expm1(sol.a * t));
    double got = liouville_F_log(sol.a, n, sol.log_u(x, t), t);
    max_liou = std::max(max_liou, std::fabs(got - expect) / std::max(1.0, std::fabs(expect)));
  }
  gate("exact_log_residual", {{"max_abs", max_res}, {"tol", tol}, {"samples", samples}},
       max_res <= tol);
  gate("sharp_gap_analytic", {{"max_abs", max_gap}, {"tol", tol}}, max_gap <= tol);
  gate("liouville_F_log_exact", {{"max_rel", max_liou}, {"tol", tol}}, max_liou <= tol);

  // discrete sharp gap: observed order under h -> h/2
  {
    ExactLogSolution sol{c.get<double>("fd_a", 1.0), n, {0.0, 0.0}, 0.0};
    Point x{0.5, n == 2 ? 0.25 : 0.0};
    double t = c.get<double>("fd_t", 1.0), h = c.get<double>("fd_h", 0.02);
    double e1 = std::fabs(exact_log_sharp_gap_fd(sol, x, t, h, h));
    double e2 = std::fabs(exact_log_sharp_gap_fd(sol, x, t, h / 2, h / 2));
    double order = std::log2(e1 / e2);
    gate("sharp_gap_fd_order", {{"err_h", e1}, {"err_h2", e2}, {"order", num(order)}},
         std::fabs(order - 2.0) <= 0.3);
  }

  // sharp Harnack: equality at x0 from the formula, slack > 0 off it
  double max_eq = 0.0, min_pert = kInf;
  for (int i = 0; i < tuples; ++i) {
    double a = rand_a();
    double t1 = ut(rng), t2 = ut(rng);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 < 1e-3) t2 = t1 + 1e-3;
    Point x1 = rand_x(), x2 = rand_x();
    SharpHarnackReport r = verify_sharp_harnack(a, n, t1, t2, x1, x2);
    max_eq = std::max(max_eq, std::fabs(r.slack));
    Point x0 = r.x0;
    x0[0] += 0.1 + 0.4 * std::fabs(uc(rng));
    SharpHarnackReport q = verify_sharp_harnack(a, n, t1, t2, x1, x2, x0);
    min_pert = std::min(min_pert, q.slack);
  }
  gate("sharp_harnack_equality", {{"max_abs_slack", max_eq}, {"tol", tol}, {"tuples", tuples}},
       max_eq <= tol);
  gate("sharp_harnack_perturbed", {{"min_slack", min_pert}}, min_pert > 0.0);

  CommandResult res;
  res.exit_code = code;
  res.report = {{"command", "sharpness"}, {"config", cfg}, {"checks", checks}, {"exit_code", code}};
  for (auto it = checks.begin(); it != checks.end(); ++it)
    out.say(it.key() + ": " + (it.value()["pass"].get<bool>() ? "pass" : "fail"));
  out.finish("sharpness", res.report);
  return res;
}

// ---------------------------------------------------------------- eps-sweep

CommandResult cmd_eps_sweep(const json& in, const RunContext& ctx) {
  json cfg = in;
  Cfg c(cfg, "");
  c.get<std::string>("command", "eps-sweep");
  double a = c.get<double>("a", -1.0);
  require(a < 0.0, "a must be < 0");
  auto eps_list = c.get<std::vector<double>>("eps", {0.2, 0.1, 0.05});
  require(!eps_list.empty(), "eps must not be empty");
  for (double e : eps_list) require(e > 0.0, "every eps must be > 0");
  double t_max = c.get<double>("t_max", 60.0);
  double tol = c.get<double>("tol", 1e-10);
  double m = c.get<double>("m", 1.0);
  int t_points = c.get<int>("t_points", 200);
  std::vector<double> f_grid = parse_axis_grid(c.sub("f_grid"), -10.0, 10.0, 21, false);
  const double junction = std::log(3.0) / -a;
  double t_eval = c.get<double>("t_eval", 0.5 * junction);
  require(t_eval > 0.0, "t_eval must be > 0");

  Output out(ctx);
  std::vector<AEpsPoint> curve = a_eps_curve(a, eps_list, t_max, tol);

  // optional torus field shared by every eps
  std::optional<std::vector<Field>> sim_stencil;
  if (c.has("simulate")) {
    Cfg s = c.sub("simulate");
    GridSpec g;
    {
      json& gj = s.raw("grid");
      g = parse_grid(gj);
      gj = grid_json(g);
    }
    s.sub("initial").get<std::string>("kind", "exp_cos");
    json init = s.self()["initial"];
    Field u0 = parse_initial(Cfg(init, "simulate.initial"), g);
    double dt = s.get<double>("dt", max_stable_dt(g));
    SimOptions so;
    so.stencil_times = {t_eval};
    Simulation sim = simulate(Equation::logarithmic(a), u0, t_eval + 2.0 * dt, dt, so);
    sim_stencil = sim.stencils.front();
  }
  // exact solution sampled around t_eval
  GridSpec eg;
  eg.boundary = Boundary::Open;
  eg.extent = {8.0, 1.0};
  eg.origin = {-4.0, 0.0};
  eg.points = {512, 1};
  ExactLogSolution sol{a, 1, {0.0, 0.0}, 0.0};
  std::vector<Field> exact = sample_exact_log(sol, eg, t_eval, eg.h(0), 1);
  Equation eq = Equation::logarithmic(a);

  json rows = json::array();
  int code = kExitPass;
  std::vector<double> maxF_exact;
  std::ofstream csv;
  if (out.enabled()) {
    csv.open(out.path("a_eps.csv"));
    csv << std::setprecision(17) << "eps,A_eps,capped\n";
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const AEpsPoint& pt = curve[i];
    if (csv.is_open()) csv << pt.eps << ',' << static_cast<double>(pt.a_eps) << ',' << pt.capped << '\n';
    CatalogParams cp;
    cp.m = m;
    cp.K = 0.0;
    cp.n = 1;
    cp.a = a;
    cp.eps = pt.eps;
    cp.t_max = t_max;
    CatalogEntry e = resolve_catalog("log.sharp_neg_family", cp);
    std::vector<double> tg = e.default_t_grid(t_points);
    SystemCheckReport r =
        check_system(e.cand, e.eq, e.params, SystemKind::A3, Branch::I, tg, f_grid);
    int rc = r.verdict == Verdict::Pass   ? kExitPass
             : r.verdict == Verdict::Fail ? kExitViolation
                                          : kExitInconclusive;
    code = combine(code, rc);
    ContinuationCheck cc = continuation_check(e.l->trajectory(), a);

    json row = {{"eps", pt.eps},
                {"A_eps", num(pt.a_eps)},
                {"capped", pt.capped},
                {"window", {{"lo", 0.0}, {"hi", num(e.l->junction() + e.l->a_eps())}}},
                {"check_window_hi", tg.back()},
                {"verdict", to_string(r.verdict)},
                {"failing", r.failing},
                {"continuation",
                 {{"N", cc.steps}, {"N_delta0", num(cc.certified_time)}, {"holds", cc.holds}}}};
    if (t_eval < static_cast<double>(e.cand.t_domain.hi)) {
      CurvatureParams P{m, 0.0, 1};
      double mf = max_finite(harnack_F(e.cand, eq, P, exact[0], exact[1], exact[2]));
      maxF_exact.push_back(mf);
      row["max_F_exact"] = num(mf);
      if (sim_stencil) {
        const auto& st = *sim_stencil;
        row["max_F_simulated"] =
            num(max_finite(harnack_F(e.cand, eq, P, st[0], st[1], st[2])));
      }
    }
    rows.push_back(row);
    out.say("eps=" + std::to_string(pt.eps) + " A_eps=" + std::to_string(static_cast<double>(pt.a_eps)) +
            " " + to_string(r.verdict));
  }

  // order eps descending, then A_eps must grow and max F must climb toward 0
  std::vector<std::size_t> idx(eps_list.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return eps_list[x] > eps_list[y]; });
  bool a_trend = true, f_trend = maxF_exact.size() == eps_list.size();
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (!(curve[idx[k]].a_eps > curve[idx[k - 1]].a_eps) && !curve[idx[k]].capped) a_trend = false;
    if (f_trend && !(maxF_exact[idx[k]] >= maxF_exact[idx[k - 1]])) f_trend = false;
  }
  if (!a_trend) code = combine(code, kExitViolation);

  CommandResult res;
  res.exit_code = code;
  res.report = {{"command", "eps-sweep"},
                {"config", cfg},
                {"rows", rows},
                {"a_eps_increasing_as_eps_decreases", a_trend},
                {"max_F_exact_rises_toward_zero", f_trend},
                {"exit_code", code}};
  out.finish("eps-sweep", res.report);
  return res;
}

// ---------------------------------------------------------------- dispatch

int run_config(const json& cfg, const RunContext& ctx) {
  try {
    if (!cfg.is_object() || !cfg.contains("command") || !cfg["command"].is_string())
      throw ConfigError("config needs a string field 'command'");
    const std::string cmd = cfg["command"].get<std::string>();
    CommandResult r;
    if (cmd == "verify-system") r = cmd_verify_system(cfg, ctx);
    else if (cmd == "simulate") r = cmd_simulate(cfg, ctx);
    else if (cmd == "sharpness") r = cmd_sharpness(cfg, ctx);
    else if (cmd == "eps-sweep") r = cmd_eps_sweep(cfg, ctx);
    else throw ConfigError("unknown command '" + cmd +
                           "' (verify-system, simulate, sharpness, eps-sweep)");
    return r.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
}

int run_config_file(const std::string& path, const RunContext& ctx) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "cannot open config " << path << '\n';
    return kExitUsage;
  }
  json cfg;
  try {
    is >> cfg;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << path << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return run_config(cfg, ctx);
}

}  // namespace harnack
