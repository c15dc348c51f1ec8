#pragma once

// Candidate quintuples (gamma, alpha, phi, beta, c) of time functions and the
// catalog of closed-form families for the heat, logarithmic and Yamabe-type
// reactions.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "harnack/equations.hpp"
#include "harnack/ode_lab.hpp"
#include "harnack/time_function.hpp"

namespace harnack {

// Raised when a family is asked for parameters outside its admissible range.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CandidateFunctions {
  std::string name;
  TimeFunction gamma;
  TimeFunction alpha;
  TimeFunction phi;
  TimeFunction beta;  // empty when the family has no beta (A1/A2 only)
  TimeFunction c;
  TimeDomain t_domain;
  std::map<std::string, double> param_meta;
  // f-range on which the family's assumptions hold (bounded-solution
  // families); unset means all f
  std::optional<std::pair<double, double>> f_window;
  bool experimental = false;

  bool has_beta() const { return static_cast<bool>(beta); }
};

struct QuintupleSample {
  Sample gamma, alpha, phi, beta, c;
  bool has_beta = false;
};

// Throws std::domain_error when t is outside t_domain.
QuintupleSample evaluate(const CandidateFunctions& cand, Real t);

enum class HeatKind { LiYauDavies, LiXu, LinearLiXu, Hamilton };

enum class LogKind {
  LiYauCase1a,
  LiYauCase1b,
  LiYauCase2,
  LiXuPos,
  LiXuPosAlt,
  LiXuNeg,
  LiXuNegAlt,
  LinearLiXuPos,
  LinearLiXuNeg,
  HamiltonPos,
  HamiltonNeg,
  ExtraPos,
  ExtraNeg,
  SharpCompact,
  SharpPosComplete,
  SharpNegFamily,
};

// Type of estimate a Yamabe-type entry generalizes.
enum class YamabeType { LiYau, LiXu, LinearLiXu, Hamilton };

// Sub-case of H(u) = a u + b u^p:
//   1.1 b>0,p>1   1.2 b<0,0<p<1   1.3 b<0,p<0
//   2.1 b>0,p<0   2.2 b>0,0<p<1   2.3 b<0,p>1
enum class YamabeCase { C1_1, C1_2, C1_3, C2_1, C2_2, C2_3 };

struct FamilyExtras {
  double alpha = 2.0;  // constant alpha of the Li-Yau type entries
  double delta = 0.5;  // Hamilton-type gamma = delta e^{-2Kt}
  double k = 0.0;      // scaling factor; 0 means "use 1/p" for Case 1.2
  const LFunction* l = nullptr;  // SharpNegFamily input (copied)
};

CandidateFunctions make_heat_family(HeatKind kind, const CurvatureParams& params,
                                    const FamilyExtras& extra = {});

CandidateFunctions make_log_family(LogKind kind, const CurvatureParams& params, double a,
                                   const FamilyExtras& extra = {});

// M >= 0 bounds |b(p-1)| u^{p-1}. Case 1.2 entries of type LiYau/LiXu/
// LinearLiXu are the k-scaled Case 1.1 functions (k = extra.k >= 1/p).
CandidateFunctions make_yamabe_family(YamabeCase yc, YamabeType type,
                                      const CurvatureParams& params, double a, double b,
                                      double p, double M, const FamilyExtras& extra = {});

// Li-Yau type entry for H = sum a_i u^{p_i}, a_i >= 0, p_i <= 1: the heat
// Li-Yau functions with alpha in [1, alpha0]; alpha = 1 only for K = 0.
CandidateFunctions make_power_li_yau(const CurvatureParams& params, double alpha);

// (k alpha, beta, k^2 phi, k c) with gamma unchanged.
CandidateFunctions k_scaled(const CandidateFunctions& base, double k);

struct TabulatedRow {
  double t, gamma, alpha, phi, beta, c;
};

// Monotone cubic (PCHIP) interpolation of each component.
CandidateFunctions tabulated_candidate(const std::string& name,
                                       const std::vector<TabulatedRow>& samples);

// Li-Xu correction g(x) = (sinh x cosh x - x)/sinh^2 x and g'(x); stable
// near x = 0. alpha = 1 + g(Kt) in the Li-Xu families.
Real li_xu_g(Real x);
Real li_xu_g_prime(Real x);

// Unique x > 0 with 1 + g(x) = 1/p for p in (1/2, 1).
double li_xu_crossing(double p);

}  // namespace harnack
