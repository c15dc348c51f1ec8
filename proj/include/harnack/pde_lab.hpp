#pragma once

// Method-of-lines solver for u_t = Delta u + H(u) on flat 1-D/2-D tori and
// Neumann boxes, finite-difference evaluation of the Harnack quantity
// F = gamma |grad f|^2 - alpha f_t + alpha h(f) - phi (f = ln u), the
// pointwise evolution identity for F, and the exact Euclidean solutions of
// the logarithmic equation.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "harnack/candidates.hpp"
#include "harnack/equations.hpp"

namespace harnack {

// Open grids carry analytic samples only: no boundary condition, and
// stencil operations report interior nodes.
enum class Boundary { Periodic, Neumann, Open };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

struct GridSpec {
  int dim = 1;
  std::array<double, 2> extent{2.0 * 3.14159265358979323846, 1.0};
  std::array<std::size_t, 2> points{64, 1};
  Boundary boundary = Boundary::Periodic;
  std::array<double, 2> origin{0.0, 0.0};

  void validate() const;  // dim in {1,2}, points >= 8 per active axis, extent > 0
  double h(int axis) const { return extent[axis] / static_cast<double>(points[axis]); }
  std::size_t size() const { return dim == 1 ? points[0] : points[0] * points[1]; }
  // Periodic/Open: origin + i h. Neumann: cell centers origin + (i + 1/2) h.
  double coord(int axis, std::size_t i) const;
  bool same_as(const GridSpec& o) const;
};

struct Field {
  GridSpec grid;
  std::vector<double> u;  // x fastest
  double t = 0.0;

  std::size_t index(std::size_t i, std::size_t j = 0) const { return i + grid.points[0] * j; }
};

Field make_field(const GridSpec& grid, const std::function<double(double, double)>& u0,
                 double t = 0.0);

// Largest step the solver accepts: 0.9 h^2 / (2 dim).
double max_stable_dt(const GridSpec& grid);

struct SimOptions {
  int record_every = 0;  // 0: record only the first and last state
  // Times at which to record stencils of 2*stencil_half_width + 1 consecutive
  // states, centered on the step nearest each time.
  std::vector<double> stencil_times;
  int stencil_half_width = 1;
  long max_steps = 100000;
  int max_halvings = 20;
};

struct Simulation {
  std::vector<Field> snapshots;
  std::vector<std::vector<Field>> stencils;  // one per stencil time
  double dt = 0.0;
  long steps = 0;
  int halvings_used = 0;  // deepest dt halving any step needed for positivity
};

// Classical RK4 with second-order central Laplacian (ghost reflection for
// Neumann). A step that produces a non-positive value is redone as 2^k
// substeps, k <= max_halvings. Throws std::invalid_argument on a CFL
// violation or bad input, std::runtime_error when positivity is lost.
Simulation simulate(const Equation& eq, const Field& u0, double t_end, double dt,
                    const SimOptions& opt = {});

// F at every node from three consecutive equally spaced states. On Neumann
// grids the boundary nodes use reflected ghosts.
std::vector<double> harnack_F(const CandidateFunctions& cand, const Equation& eq,
                              const CurvatureParams& params, const Field& prev,
                              const Field& cur, const Field& next);

// LF - RHS of the evolution identity for F at the centre time of a five-state
// stencil. Entries at nodes without a full stencil (Open/Neumann edges) are NaN.
std::vector<double> evolution_identity_residual(const Equation& eq,
                                                const std::vector<Field>& stencil,
                                                const CandidateFunctions& cand);

// u = exp[-a |x-x0|^2/(4(1-e^{-at})) - (n/2) e^{at} ln|1-e^{-at}| + C e^{at}]
struct ExactLogSolution {
  double a = 1.0;
  int n = 1;
  std::array<double, 2> x0{0.0, 0.0};
  double C = 0.0;

  double log_u(const std::array<double, 2>& x, double t) const;
  double operator()(const std::array<double, 2>& x, double t) const;
};

double exact_log_eval(const ExactLogSolution& sol, const std::array<double, 2>& x, double t);
// (u_t - Delta u - a u ln u)/u from closed-form derivatives.
double exact_log_residual(const ExactLogSolution& sol, const std::array<double, 2>& x, double t);
// -Delta ln u - n a/(2(1 - e^{-at})), closed form.
double exact_log_sharp_gap(const ExactLogSolution& sol, const std::array<double, 2>& x, double t);
// |grad u|^2/u^2 - u_t/u + a ln u - n a/(2(1 - e^{-at})) with central
// differences of u, spatial step h and time step tau.
double exact_log_sharp_gap_fd(const ExactLogSolution& sol, const std::array<double, 2>& x,
                              double t, double h, double tau);

// Samples the exact solution on an Open grid at times t + k tau, k = -w..w.
std::vector<Field> sample_exact_log(const ExactLogSolution& sol, const GridSpec& grid, double t,
                                    double tau, int half_width);

struct BoundCheck {
  std::string id;
  double min_slack = 0.0;  // min over nodes/times of the checked expression
  double worst_t = 0.0;
  std::size_t worst_node = 0;
  double tol = 0.0;
  bool pass = true;
};

// Delta f + n a/(2(1 - e^{-at})) >= -tol over the given states.
BoundCheck sharp_log_check(double a, int n, const std::vector<Field>& states, double tol);
// Delta f + n/(2t) >= -tol over the given states.
BoundCheck liyau_power_check(int n, const std::vector<Field>& states, double tol);

enum class MonotoneQuantity { TPowHalfU, FLog };

// Per node, Q(t_{k+1}) - Q(t_k) >= -tol over consecutive snapshots.
// TPowHalfU: t^{n/2} u. FLog: e^{-at} ln u + (n/2) ln|e^{-at} - 1|.
BoundCheck monotone_checks(const std::vector<Field>& snapshots, MonotoneQuantity q, int n,
                           double a, double tol);

// Max of |A - B| at the nodes of `coarse`, where `fine` has twice the points
// per axis on the same box. Used for refinement-derived tolerances.
double refinement_difference(const GridSpec& coarse, const std::vector<double>& a,
                             const GridSpec& fine, const std::vector<double>& b);

// Binary dump: "HKFIELD1", u32 dim, u32 boundary, f64 extent[2], u64 points[2],
// f64 origin[2], f64 t, then size() f64 values, all little-endian.
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);
// CSV with columns x[,y],u.
void write_field_csv(const std::string& path, const Field& f);

}  // namespace harnack
