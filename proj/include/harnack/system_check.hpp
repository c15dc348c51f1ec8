#pragma once

// Margins of the A1/A2/A3 inequality systems over a (t, f) grid.

#include <optional>
#include <string>
#include <vector>

#include "harnack/candidates.hpp"
#include "harnack/equations.hpp"

namespace harnack {

enum class SystemKind { A1, A2, A3 };
// None with A3 means "any of I/II/III": each branch is checked and one must pass.
enum class Branch { None, I, II, III };
enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(SystemKind s);
std::string to_string(Branch b);
std::string to_string(Verdict v);
SystemKind parse_system_kind(const std::string& s);
Branch parse_branch(const std::string& s);

struct Tolerances {
  double eq = 1e-9;       // ">= 0" constraints accept margins >= -eq
  double strict = 1e-12;  // "> 0" constraints need margins >= strict

  static Tolerances for_candidate(const CandidateFunctions& cand);
};

// All margins at one (t, f). a1_first_lemma is the rearranged form
//   [(4g/m)c + (a-2g)h1 + a h2 - 2Kg - g'] - (g/a)[(4g/m)c - a h1 - a']
// which equals a1_first algebraically.
struct MarginValues {
  Real a1_first = 0;
  Real a1_first_lemma = 0;
  Real a1_second = 0;
  Real a1_third = 0;
  Real a3_third = 0;  // NaN when the candidate has no beta
};

MarginValues margins_from_values(const QuintupleSample& q, const ReactionTerm& r, double m,
                                 double K);

Real margin_A1_first(const CandidateFunctions& cand, const Equation& eq,
                     const CurvatureParams& params, Real t, double f);
Real margin_A1_first_lemma(const CandidateFunctions& cand, const Equation& eq,
                           const CurvatureParams& params, Real t, double f);
Real margin_A1_second(const CandidateFunctions& cand, const Equation& eq,
                      const CurvatureParams& params, Real t, double f);
Real margin_A1_third(const CandidateFunctions& cand, const Equation& eq,
                     const CurvatureParams& params, Real t, double f);
Real margin_A3_third(const CandidateFunctions& cand, const Equation& eq,
                     const CurvatureParams& params, Real t, double f);

struct SubCheck {
  std::string id;
  Verdict verdict = Verdict::Pass;
  double value = 0.0;  // the number the decision was based on
  std::string detail;
};

struct ConstraintReport {
  std::string id;
  bool strict = false;
  Real min_margin = 0;
  double worst_t = 0.0;
  double worst_f = 0.0;
  bool pass = true;
  std::vector<Real> values;  // t-major over t_grid x f_grid
};

struct SystemCheckReport {
  std::string candidate;
  SystemKind system = SystemKind::A1;
  Branch branch = Branch::None;
  Tolerances tol;
  std::vector<double> t_grid;
  std::vector<double> f_grid;  // after intersecting with the candidate's f-window
  std::vector<ConstraintReport> constraints;
  std::vector<SubCheck> boundary_checks;
  std::vector<SubCheck> branch_checks;
  Verdict verdict = Verdict::Pass;
  std::vector<std::string> failing;
  std::vector<std::string> inconclusive;
  std::string window_label;
  bool clamped = false;
  bool experimental = false;
};

struct CheckOptions {
  std::optional<Tolerances> tol;  // default: Tolerances::for_candidate
  std::optional<double> eps;      // branch I epsilon; unset: inferred from the window
  double bound_cap = 1e8;         // boundedness cap for branches II/III
};

// Branch conditions on the t-grid. Each element is one condition.
std::vector<SubCheck> check_condition_branch(const CandidateFunctions& cand, Branch branch,
                                             const std::vector<double>& t_grid,
                                             const CheckOptions& opt = {});

// Limits at t -> 0+: alpha and gamma converge, phi diverges.
std::vector<SubCheck> check_A2_boundary(const CandidateFunctions& cand);

// beta(1e-8) < 1e-6 beta(t_ref), t_ref = 1 or the end of a shorter domain.
SubCheck check_beta_zero(const CandidateFunctions& cand);

SystemCheckReport check_system(const CandidateFunctions& cand, const Equation& eq,
                               const CurvatureParams& params, SystemKind system, Branch branch,
                               const std::vector<double>& t_grid,
                               const std::vector<double>& f_grid, const CheckOptions& opt = {});

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);
// Inserts the midpoint of every interval (geometric midpoint when both ends
// are positive); the result contains the input grid.
std::vector<double> refine_grid(const std::vector<double>& grid, bool geometric);

}  // namespace harnack
