#include "harnack/pde_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace harnack {

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Periodic: return "periodic";
    case Boundary::Neumann: return "neumann";
    case Boundary::Open: return "open";
  }
  return "?";
}

Boundary parse_boundary(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "neumann") return Boundary::Neumann;
  if (s == "open") return Boundary::Open;
  throw std::invalid_argument("unknown boundary '" + s + "'");
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
  for (int ax = 0; ax < dim; ++ax) {
    if (points[ax] < 8) throw std::invalid_argument("grid needs at least 8 points per axis");
    if (!(extent[ax] > 0.0) || !std::isfinite(extent[ax]))
      throw std::invalid_argument("grid extent must be finite and > 0");
  }
  if (dim == 2 && points[0] * points[1] > 256u * 256u)
    throw std::invalid_argument("2-D grids are capped at 256^2 nodes");
  if (dim == 1 && points[0] > 65536u) throw std::invalid_argument("1-D grids are capped at 65536 nodes");
}

double GridSpec::coord(int axis, std::size_t i) const {
  double off = boundary == Boundary::Neumann ? 0.5 : 0.0;
  return origin[axis] + (static_cast<double>(i) + off) * h(axis);
}

bool GridSpec::same_as(const GridSpec& o) const {
  if (dim != o.dim || boundary != o.boundary) return false;
  for (int ax = 0; ax < dim; ++ax)
    if (points[ax] != o.points[ax] || extent[ax] != o.extent[ax] || origin[ax] != o.origin[ax])
      return false;
  return true;
}

Field make_field(const GridSpec& grid, const std::function<double(double, double)>& u0, double t) {
  grid.validate();
  Field f;
  f.grid = grid;
  f.t = t;
  f.u.resize(grid.size());
  std::size_t ny = grid.dim == 2 ? grid.points[1] : 1;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < grid.points[0]; ++i) {
      double y = grid.dim == 2 ? grid.coord(1, j) : 0.0;
      f.u[f.index(i, j)] = u0(grid.coord(0, i), y);
    }
  return f;
}

double max_stable_dt(const GridSpec& grid) {
  double h = grid.h(0);
  if (grid.dim == 2) h = std::min(h, grid.h(1));
  return 0.9 * h * h / (2.0 * grid.dim);
}

namespace {

// Maps an index offset to a node on the axis, or -1 when there is none.
long wrap(const GridSpec& g, int axis, long i) {
  long n = static_cast<long>(g.points[axis]);
  switch (g.boundary) {
    case Boundary::Periodic:
      return ((i % n) + n) % n;
    case Boundary::Neumann:
      // cell-centred reflection: ghost -1 <-> 0, -2 <-> 1, n <-> n-1
      if (i < 0) i = -i - 1;
      if (i >= n) i = 2 * n - i - 1;
      return (i < 0 || i >= n) ? -1 : i;
    case Boundary::Open:
      return (i < 0 || i >= n) ? -1 : i;
  }
  return -1;
}

// Reaction H(u) without the variant dispatch in the inner loop.
struct Reaction {
  enum { Lin, Log, Pow } kind = Lin;
  double p = 0.0;
  double a = 0.0;
  std::vector<PowerTerm> terms;

  explicit Reaction(const Equation& eq) {
    if (const auto* l = std::get_if<LinearEq>(&eq.kind())) {
      kind = Lin;
      p = l->p;
    } else if (const auto* g = std::get_if<LogEq>(&eq.kind())) {
      kind = Log;
      a = g->a;
    } else {
      kind = Pow;
      terms = std::get<PowerSumEq>(eq.kind()).terms;
    }
  }
  double operator()(double u) const {
    switch (kind) {
      case Lin: return p * u;
      case Log: return a * u * std::log(u);
      case Pow: {
        double s = 0.0;
        for (const auto& t : terms) s += t.coeff * std::pow(u, t.exponent);
        return s;
      }
    }
    return 0.0;
  }
};

// neighbour tables so the inner loop has no boundary logic
struct Neighbours {
  std::array<std::vector<long>, 2> minus, plus;
  explicit Neighbours(const GridSpec& g) {
    for (int ax = 0; ax < g.dim; ++ax) {
      long n = static_cast<long>(g.points[ax]);
      for (long i = 0; i < n; ++i) {
        minus[ax].push_back(wrap(g, ax, i - 1));
        plus[ax].push_back(wrap(g, ax, i + 1));
      }
    }
  }
};

void laplacian(const GridSpec& g, const Neighbours& nb, const std::vector<double>& u,
               std::vector<double>& out) {
  const std::size_t nx = g.points[0];
  const double ihx2 = 1.0 / (g.h(0) * g.h(0));
  const long* xm = nb.minus[0].data();
  const long* xp = nb.plus[0].data();
  if (g.dim == 1) {
    for (std::size_t i = 0; i < nx; ++i) out[i] = (u[xm[i]] - 2.0 * u[i] + u[xp[i]]) * ihx2;
    return;
  }
  const std::size_t ny = g.points[1];
  const double ihy2 = 1.0 / (g.h(1) * g.h(1));
  for (std::size_t j = 0; j < ny; ++j) {
    std::size_t jm = nx * static_cast<std::size_t>(nb.minus[1][j]);
    std::size_t jp = nx * static_cast<std::size_t>(nb.plus[1][j]);
    const double* row = u.data() + nx * j;
    for (std::size_t i = 0; i < nx; ++i) {
      double c = row[i];
      out[i + nx * j] = (row[xm[i]] - 2.0 * c + row[xp[i]]) * ihx2 +
                        (u[i + jm] - 2.0 * c + u[i + jp]) * ihy2;
    }
  }
}

struct Stepper {
  const GridSpec& g;
  Neighbours nb;
  Reaction H;
  std::vector<double> k1, k2, k3, k4, tmp;

  Stepper(const GridSpec& grid, const Equation& eq) : g(grid), nb(grid), H(eq) {
    std::size_t n = g.size();
    k1.resize(n);
    k2.resize(n);
    k3.resize(n);
    k4.resize(n);
    tmp.resize(n);
  }

  void rhs(const std::vector<double>& u, std::vector<double>& out) {
    laplacian(g, nb, u, out);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += H(u[i]);
  }

  // one RK4 step; false if any value ends up non-positive or non-finite
  bool step(const std::vector<double>& u, double dt, std::vector<double>& out) {
    const std::size_t n = u.size();
    rhs(u, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
    rhs(tmp, k4);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!(out[i] > 0.0) || !std::isfinite(out[i])) ok = false;
    }
    return ok;
  }
};

}  // namespace

Simulation simulate(const Equation& eq, const Field& u0, double t_end, double dt,
                    const SimOptions& opt) {
  const GridSpec& g = u0.grid;
  g.validate();
  if (g.boundary == Boundary::Open) throw std::invalid_argument("cannot simulate on an open grid");
  if (u0.u.size() != g.size()) throw std::invalid_argument("field size does not match its grid");
  for (double v : u0.u)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("initial data must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (dt > max_stable_dt(g) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << dt << " violates dt <= 0.9 h^2/(2 dim) = " << max_stable_dt(g);
    throw std::invalid_argument(os.str());
  }
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");

  long n = static_cast<long>(std::llround(t_end / dt));
  if (std::fabs(n * dt - t_end) > 1e-9 * std::max(1.0, t_end)) n = static_cast<long>(std::ceil(t_end / dt));
  if (n > opt.max_steps) {
    std::ostringstream os;
    os << "run needs " << n << " steps, cap is " << opt.max_steps;
    throw std::invalid_argument(os.str());
  }

  const int w = opt.stencil_half_width;
  std::vector<long> centers;
  for (double T : opt.stencil_times) {
    long k = static_cast<long>(std::llround((T - u0.t) / dt));
    if (k - w < 0 || k + w > n)
      throw std::invalid_argument("stencil time outside the run (needs half width on both sides)");
    centers.push_back(k);
  }

  Simulation sim;
  sim.dt = dt;
  sim.stencils.resize(centers.size());
  auto record = [&](long k, const Field& f) {
    bool snap = k == 0 || k == n || (opt.record_every > 0 && k % opt.record_every == 0);
    if (snap) sim.snapshots.push_back(f);
    for (std::size_t s = 0; s < centers.size(); ++s)
      if (k >= centers[s] - w && k <= centers[s] + w) sim.stencils[s].push_back(f);
  };

  Stepper st(g, eq);
  Field cur = u0;
  Field next = u0;
  record(0, cur);
  for (long k = 0; k < n; ++k) {
    double h = std::min(dt, u0.t + t_end - cur.t);
    if (k < n - 1) h = dt;
    bool ok = st.step(cur.u, h, next.u);
    int halv = 0;
    while (!ok) {
      if (++halv > opt.max_halvings) {
        std::ostringstream os;
        os << "positivity lost at t = " << cur.t << " after " << opt.max_halvings << " dt halvings";
        throw std::runtime_error(os.str());
      }
      long sub = 1L << halv;
      std::vector<double> w0 = cur.u;
      ok = true;
      for (long s = 0; s < sub && ok; ++s) {
        ok = st.step(w0, h / static_cast<double>(sub), next.u);
        w0 = next.u;
      }
    }
    sim.halvings_used = std::max(sim.halvings_used, halv);
    next.t = u0.t + (k + 1) * dt;
    if (k == n - 1) next.t = u0.t + std::max(t_end, 0.0);
    std::swap(cur, next);
    record(k + 1, cur);
  }
  sim.steps = n;
  return sim;
}

namespace {

// log of every state
std::vector<std::vector<double>> logs_of(const std::vector<const Field*>& fs) {
  std::vector<std::vector<double>> out;
  for (const Field* f : fs) {
    std::vector<double> l(f->u.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!(f->u[i] > 0.0)) throw std::domain_error("field has a non-positive value");
      l[i] = std::log(f->u[i]);
    }
    out.push_back(std::move(l));
  }
  return out;
}

void check_same_grid(const std::vector<const Field*>& fs) {
  for (const Field* f : fs) {
    if (!f->grid.same_as(fs.front()->grid)) throw std::invalid_argument("states are on different grids");
    if (f->u.size() != f->grid.size()) throw std::invalid_argument("field size does not match its grid");
  }
}

double equal_spacing(const std::vector<const Field*>& fs) {
  double tau = fs[1]->t - fs[0]->t;
  if (!(tau > 0.0)) throw std::invalid_argument("states must be increasing in time");
  for (std::size_t k = 2; k < fs.size(); ++k)
    if (std::fabs((fs[k]->t - fs[k - 1]->t) - tau) > 1e-9 * tau)
      throw std::invalid_argument("states must be equally spaced in time");
  return tau;
}

// f at node (i + di, j + dj) of a log-state, NaN where the stencil leaves an open grid
struct Accessor {
  const GridSpec& g;
  const std::vector<double>& v;
  double operator()(long i, long j) const {
    long ii = wrap(g, 0, i);
    long jj = g.dim == 2 ? wrap(g, 1, j) : 0;
    if (ii < 0 || jj < 0) return std::numeric_limits<double>::quiet_NaN();
    return v[static_cast<std::size_t>(ii) + g.points[0] * static_cast<std::size_t>(jj)];
  }
};

}  // namespace

std::vector<double> harnack_F(const CandidateFunctions& cand, const Equation& eq,
                              const CurvatureParams& params, const Field& prev,
                              const Field& cur, const Field& next) {
  params.validate();
  std::vector<const Field*> fs{&prev, &cur, &next};
  check_same_grid(fs);
  double tau = equal_spacing(fs);
  auto L = logs_of(fs);
  const GridSpec& g = cur.grid;
  QuintupleSample q = evaluate(cand, cur.t);
  const double gam = static_cast<double>(q.gamma.value), al = static_cast<double>(q.alpha.value),
               phi = static_cast<double>(q.phi.value);
  Accessor f{g, L[1]};
  std::vector<double> F(g.size());
  const std::size_t nx = g.points[0], ny = g.dim == 2 ? g.points[1] : 1;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      long I = static_cast<long>(i), J = static_cast<long>(j);
      double fx = (f(I + 1, J) - f(I - 1, J)) / (2.0 * g.h(0));
      double grad2 = fx * fx;
      if (g.dim == 2) {
        double fy = (f(I, J + 1) - f(I, J - 1)) / (2.0 * g.h(1));
        grad2 += fy * fy;
      }
      std::size_t idx = i + nx * j;
      double ft = (L[2][idx] - L[0][idx]) / (2.0 * tau);
      F[idx] = gam * grad2 - al * ft + al * eq.reaction(L[1][idx]).h - phi;
    }
  return F;
}

std::vector<double> evolution_identity_residual(const Equation& eq,
                                                const std::vector<Field>& stencil,
                                                const CandidateFunctions& cand) {
  if (stencil.size() != 5) throw std::invalid_argument("evolution identity needs five states");
  std::vector<const Field*> fs;
  for (const auto& s : stencil) fs.push_back(&s);
  check_same_grid(fs);
  const double tau = equal_spacing(fs);
  auto L = logs_of(fs);
  const GridSpec& g = stencil[2].grid;
  const double hx = g.h(0), hy = g.dim == 2 ? g.h(1) : 1.0;

  std::array<QuintupleSample, 5> q;
  for (int k = 1; k <= 3; ++k) q[k] = evaluate(cand, stencil[k].t);

  std::vector<Accessor> acc;
  for (int k = 0; k < 5; ++k) acc.push_back(Accessor{g, L[k]});

  // F at node (i, j), state k in {1, 2, 3}
  auto Fat = [&](long i, long j, int k) {
    const Accessor& f = acc[k];
    double fx = (f(i + 1, j) - f(i - 1, j)) / (2.0 * hx);
    double grad2 = fx * fx;
    if (g.dim == 2) {
      double fy = (f(i, j + 1) - f(i, j - 1)) / (2.0 * hy);
      grad2 += fy * fy;
    }
    double ft = (acc[k + 1](i, j) - acc[k - 1](i, j)) / (2.0 * tau);
    double fc = f(i, j);
    if (std::isnan(fc)) return fc;
    const auto& s = q[k];
    return static_cast<double>(s.gamma.value) * grad2 - static_cast<double>(s.alpha.value) * ft +
           static_cast<double>(s.alpha.value) * eq.reaction(fc).h - static_cast<double>(s.phi.value);
  };

  const QuintupleSample& c = q[2];
  const double gam = static_cast<double>(c.gamma.value), gp = static_cast<double>(c.gamma.deriv);
  const double al = static_cast<double>(c.alpha.value), ap = static_cast<double>(c.alpha.deriv);
  const double phip = static_cast<double>(c.phi.deriv);

  std::vector<double> res(g.size(), std::numeric_limits<double>::quiet_NaN());
  const std::size_t nx = g.points[0], ny = g.dim == 2 ? g.points[1] : 1;
  const Accessor& f = acc[2];
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      long I = static_cast<long>(i), J = static_cast<long>(j);
      double F0 = Fat(I, J, 2);
      double Fxm = Fat(I - 1, J, 2), Fxp = Fat(I + 1, J, 2);
      double lapF = (Fxp - 2.0 * F0 + Fxm) / (hx * hx);
      double Fx = (Fxp - Fxm) / (2.0 * hx);
      double fx = (f(I + 1, J) - f(I - 1, J)) / (2.0 * hx);
      double fxx = (f(I + 1, J) - 2.0 * f(I, J) + f(I - 1, J)) / (hx * hx);
      double grad2 = fx * fx, gradfF = fx * Fx, lapf = fxx, hess2 = fxx * fxx;
      if (g.dim == 2) {
        double Fym = Fat(I, J - 1, 2), Fyp = Fat(I, J + 1, 2);
        lapF += (Fyp - 2.0 * F0 + Fym) / (hy * hy);
        double Fy = (Fyp - Fym) / (2.0 * hy);
        double fy = (f(I, J + 1) - f(I, J - 1)) / (2.0 * hy);
        double fyy = (f(I, J + 1) - 2.0 * f(I, J) + f(I, J - 1)) / (hy * hy);
        double fxy = (f(I + 1, J + 1) - f(I + 1, J - 1) - f(I - 1, J + 1) + f(I - 1, J - 1)) /
                     (4.0 * hx * hy);
        grad2 += fy * fy;
        gradfF += fy * Fy;
        lapf += fyy;
        hess2 += fyy * fyy + 2.0 * fxy * fxy;
      }
      double Ft = (Fat(I, J, 3) - Fat(I, J, 1)) / (2.0 * tau);
      double ft = (acc[3](I, J) - acc[1](I, J)) / (2.0 * tau);
      double fc = f(I, J);
      if (std::isnan(fc)) continue;
      ReactionTerm r = eq.reaction(fc);
      double lhs = lapF - Ft;
      double rhs = 2.0 * gam * hess2 - 2.0 * gradfF + (2.0 * (al - gam) * r.h1 - gp) * grad2 +
                   ap * ft + al * (r.h1 * lapf + r.h2 * grad2) - ap * r.h + phip;
      double v = lhs - rhs;
      if (std::isfinite(v)) res[i + nx * j] = v;
    }
  return res;
}

namespace {

struct LogParts {
  long double D, A, r2;
};

LogParts log_parts(const ExactLogSolution& s, const std::array<double, 2>& x, double t) {
  if (s.a == 0.0) throw std::invalid_argument("exact log solution needs a != 0");
  if (s.n < 1 || s.n > 2) throw std::invalid_argument("exact log solution supports n = 1, 2");
  long double a = s.a;
  long double D = -std::expm1(-a * static_cast<long double>(t));
  if (D == 0.0L) throw std::domain_error("exact log solution undefined where e^{-at} = 1");
  long double r2 = 0.0L;
  for (int i = 0; i < s.n; ++i) {
    long double d = static_cast<long double>(x[i]) - s.x0[i];
    r2 += d * d;
  }
  return {D, a / (4.0L * D), r2};
}

}  // namespace

double ExactLogSolution::log_u(const std::array<double, 2>& x, double t) const {
  LogParts p = log_parts(*this, x, t);
  long double eat = std::exp(static_cast<long double>(a) * t);
  return static_cast<double>(-p.A * p.r2 - 0.5L * n * eat * std::log(std::fabs(p.D)) + C * eat);
}

double ExactLogSolution::operator()(const std::array<double, 2>& x, double t) const {
  return std::exp(log_u(x, t));
}

double exact_log_eval(const ExactLogSolution& sol, const std::array<double, 2>& x, double t) {
  return sol(x, t);
}

double exact_log_residual(const ExactLogSolution& sol, const std::array<double, 2>& x, double t) {
  LogParts p = log_parts(sol, x, t);
  const long double a = sol.a, n = sol.n, T = t;
  const long double eat = std::exp(a * T), emat = std::exp(-a * T);
  const long double lnD = std::log(std::fabs(p.D));
  const long double f = -p.A * p.r2 - 0.5L * n * eat * lnD + sol.C * eat;
  // A' = -a^2 e^{-at}/(4 D^2)
  const long double Ap = -a * a * emat / (4.0L * p.D * p.D);
  const long double ft = -Ap * p.r2 - 0.5L * n * (a * eat * lnD + a / p.D) + a * sol.C * eat;
  const long double lap = -2.0L * n * p.A;
  const long double grad2 = 4.0L * p.A * p.A * p.r2;
  return static_cast<double>(ft - lap - grad2 - a * f);
}

double exact_log_sharp_gap(const ExactLogSolution& sol, const std::array<double, 2>& x, double t) {
  LogParts p = log_parts(sol, x, t);
  long double lap = -2.0L * sol.n * p.A;
  return static_cast<double>(-lap - sol.n * static_cast<long double>(sol.a) / (2.0L * p.D));
}

double exact_log_sharp_gap_fd(const ExactLogSolution& sol, const std::array<double, 2>& x,
                              double t, double h, double tau) {
  LogParts p = log_parts(sol, x, t);
  double u0 = sol(x, t);
  double grad2 = 0.0;
  for (int i = 0; i < sol.n; ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    double ux = (sol(xp, t) - sol(xm, t)) / (2.0 * h);
    grad2 += ux * ux;
  }
  double ut = (sol(x, t + tau) - sol(x, t - tau)) / (2.0 * tau);
  double sharp = static_cast<double>(sol.n * static_cast<long double>(sol.a) / (2.0L * p.D));
  return grad2 / (u0 * u0) - ut / u0 + sol.a * std::log(u0) - sharp;
}

std::vector<Field> sample_exact_log(const ExactLogSolution& sol, const GridSpec& grid, double t,
                                    double tau, int half_width) {
  if (grid.dim != sol.n) throw std::invalid_argument("grid dim must match the solution's n");
  std::vector<Field> out;
  for (int k = -half_width; k <= half_width; ++k) {
    double tk = t + k * tau;
    out.push_back(make_field(grid, [&](double x, double y) { return sol({x, y}, tk); }, tk));
  }
  return out;
}

namespace {

// Delta f at every node, NaN where the stencil leaves an open grid
std::vector<double> lap_log(const Field& s) {
  auto L = logs_of({&s});
  Accessor f{s.grid, L[0]};
  const GridSpec& g = s.grid;
  std::vector<double> out(g.size());
  const std::size_t nx = g.points[0], ny = g.dim == 2 ? g.points[1] : 1;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      long I = static_cast<long>(i), J = static_cast<long>(j);
      double v = (f(I + 1, J) - 2.0 * f(I, J) + f(I - 1, J)) / (g.h(0) * g.h(0));
      if (g.dim == 2) v += (f(I, J + 1) - 2.0 * f(I, J) + f(I, J - 1)) / (g.h(1) * g.h(1));
      out[i + nx * j] = v;
    }
  return out;
}

BoundCheck bound_check(const std::string& id, const std::vector<Field>& states, double tol,
                       const std::function<double(double)>& shift) {
  BoundCheck bc;
  bc.id = id;
  bc.tol = tol;
  bc.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& s : states) {
    if (!(s.t > 0.0)) continue;
    auto lap = lap_log(s);
    double add = shift(s.t);
    for (std::size_t i = 0; i < lap.size(); ++i) {
      if (std::isnan(lap[i])) continue;
      double v = lap[i] + add;
      if (v < bc.min_slack) {
        bc.min_slack = v;
        bc.worst_t = s.t;
        bc.worst_node = i;
      }
    }
  }
  bc.pass = bc.min_slack >= -tol;
  return bc;
}

}  // namespace

BoundCheck sharp_log_check(double a, int n, const std::vector<Field>& states, double tol) {
  if (a == 0.0) throw std::invalid_argument("sharp_log_check needs a != 0");
  return bound_check("sharp_log", states, tol, [=](double t) {
    return static_cast<double>(n * static_cast<long double>(a) /
                               (2.0L * -std::expm1(-static_cast<long double>(a) * t)));
  });
}

BoundCheck liyau_power_check(int n, const std::vector<Field>& states, double tol) {
  return bound_check("liyau_power", states, tol, [=](double t) { return n / (2.0 * t); });
}

BoundCheck monotone_checks(const std::vector<Field>& snapshots, MonotoneQuantity q, int n,
                           double a, double tol) {
  BoundCheck bc;
  bc.id = q == MonotoneQuantity::TPowHalfU ? "t_pow_n_half_u" : "F_log";
  bc.tol = tol;
  bc.min_slack = std::numeric_limits<double>::infinity();
  if (q == MonotoneQuantity::FLog && a == 0.0) throw std::invalid_argument("F_log needs a != 0");
  auto Q = [&](double u, double t) {
    if (q == MonotoneQuantity::TPowHalfU) return std::pow(t, 0.5 * n) * u;
    return liouville_F_log(a, n, std::log(u), t);
  };
  const Field* prev = nullptr;
  for (const auto& s : snapshots) {
    if (!(s.t > 0.0)) continue;
    if (prev) {
      if (!s.grid.same_as(prev->grid)) throw std::invalid_argument("snapshots on different grids");
      for (std::size_t i = 0; i < s.u.size(); ++i) {
        double d = Q(s.u[i], s.t) - Q(prev->u[i], prev->t);
        if (d < bc.min_slack) {
          bc.min_slack = d;
          bc.worst_t = s.t;
          bc.worst_node = i;
        }
      }
    }
    prev = &s;
  }
  bc.pass = bc.min_slack >= -tol;
  return bc;
}

double refinement_difference(const GridSpec& coarse, const std::vector<double>& a,
                             const GridSpec& fine, const std::vector<double>& b) {
  if (coarse.dim != fine.dim || coarse.boundary != fine.boundary)
    throw std::invalid_argument("refinement pair must share dim and boundary");
  for (int ax = 0; ax < coarse.dim; ++ax)
    if (fine.points[ax] != 2 * coarse.points[ax] || fine.extent[ax] != coarse.extent[ax])
      throw std::invalid_argument("fine grid must double the points on the same box");
  const bool centred = coarse.boundary == Boundary::Neumann;
  const std::size_t nx = coarse.points[0], ny = coarse.dim == 2 ? coarse.points[1] : 1;
  const std::size_t fx = fine.points[0];
  double worst = 0.0;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      double va = a[i + nx * j];
      double vb;
      if (!centred) {
        vb = b[2 * i + fx * (coarse.dim == 2 ? 2 * j : 0)];
      } else if (coarse.dim == 1) {
        vb = 0.5 * (b[2 * i] + b[2 * i + 1]);
      } else {
        vb = 0.25 * (b[2 * i + fx * 2 * j] + b[2 * i + 1 + fx * 2 * j] + b[2 * i + fx * (2 * j + 1)] +
                     b[2 * i + 1 + fx * (2 * j + 1)]);
      }
      if (std::isnan(va) || std::isnan(vb)) continue;
      worst = std::max(worst, std::fabs(va - vb));
    }
  return worst;
}

}  // namespace harnack
