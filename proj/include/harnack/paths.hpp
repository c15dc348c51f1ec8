#pragma once

// Integrated Harnack inequalities along space-time paths, the optimal
// exponential speed profile, and the sharp equality data of the exact
// logarithmic solutions.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harnack/candidates.hpp"
#include "harnack/pde_lab.hpp"

namespace harnack {

using Point = std::array<double, 2>;

enum class SpeedProfile { Constant, Exponential, Sampled };

struct PathSpec {
  int dim = 1;
  Point x1{0.0, 0.0};
  Point x2{0.0, 0.0};
  double t1 = 0.0;
  double t2 = 1.0;
  SpeedProfile profile = SpeedProfile::Constant;
  // Sampled: positions at equally spaced times from t1 to t2, first = x1,
  // last = x2; straight segments in between.
  std::vector<Point> samples;

  void validate() const;
  double displacement() const;  // Euclidean |x2 - x1|
};

enum class PathEquation { Log, Power };

// int_{t1}^{t2} -e^{-at} phi/alpha dt - (alpha/(4 gamma)) a d^2/(e^{a t2} - e^{a t1})
// for constant alpha, gamma. Uses the closed form of the phi-integral for
// log.sharp_compact and adaptive Gauss-Kronrod otherwise.
double harnack_rhs_log(const CandidateFunctions& cand, double a, double t1, double t2, double dist);

// int w(t) (-phi/alpha - (alpha/(4 gamma)) |l'|^2) dt along the path, with
// w = e^{-at} (Log) or 1 (Power). `a` also sets the Exponential profile.
double path_integral_rhs(const CandidateFunctions& cand, PathEquation kind, double a,
                         const PathSpec& path);

// |l'(t)| = a L e^{at}/(e^{a t2} - e^{a t1}); constant L/(t2 - t1) at a = 0.
std::function<double(double)> optimal_speed(double a, double t1, double t2, double L);
// a L^2/(e^{a t2} - e^{a t1}); L^2/(t2 - t1) at a = 0.
double min_energy(double a, double t1, double t2, double L);
// int e^{-at} |l'|^2 dt along the path.
double path_energy(double a, const PathSpec& path);

Point sharp_x0(double a, double t1, double t2, const Point& x1, const Point& x2, int dim = 1);

struct SharpHarnackReport {
  Point x0{0.0, 0.0};
  double lhs = 0.0;  // e^{-a t2} ln u(x2, t2) - e^{-a t1} ln u(x1, t1)
  double rhs = 0.0;  // -(n/2) ln((1-e^{-a t2})/(1-e^{-a t1})) - a |x1-x2|^2/(4(e^{a t2}-e^{a t1}))
  double slack = 0.0;
  bool equality = false;  // |slack| <= 1e-10
  bool holds = false;     // slack >= -1e-10
};

// Exact solution with C = 0 centred at x0 (default: sharp_x0).
SharpHarnackReport verify_sharp_harnack(double a, int n, double t1, double t2, const Point& x1,
                                        const Point& x2, std::optional<Point> x0 = std::nullopt);

// Minimal-image distance on periodic axes, Euclidean otherwise.
double grid_distance(const GridSpec& g, const Point& p, const Point& q);

struct PairResult {
  std::size_t node1 = 0, node2 = 0;
  double dist = 0.0;
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
};

struct PairReport {
  std::vector<PairResult> pairs;  // failing pairs first
  double min_slack = 0.0;
  double tol = 0.0;
  bool pass = true;
};

// Random node pairs (std::mt19937_64 seeded with `seed`) between two
// snapshots of one run, t1 < t2. Log: e^{-at} weighted with harnack_rhs_log;
// Power: f2 - f1 against the constant-speed path integral.
PairReport harnack_pairs(const CandidateFunctions& cand, PathEquation kind, double a,
                         const Field& s1, const Field& s2, std::size_t n_pairs, std::uint64_t seed,
                         double tol);

}  // namespace harnack
