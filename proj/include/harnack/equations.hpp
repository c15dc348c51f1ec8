#pragma once

// Reaction terms for u_t = Delta u + H(u) and the reduced coefficient
// h(f) = H(e^f) e^{-f} together with its first two f-derivatives.

#include <string>
#include <variant>
#include <vector>

namespace harnack {

struct LinearEq {
  double p = 0.0;  // H(u) = p u
};

struct LogEq {
  double a = 0.0;  // H(u) = a u ln u, a != 0
};

struct PowerTerm {
  double coeff = 0.0;
  double exponent = 1.0;
};

struct PowerSumEq {
  std::vector<PowerTerm> terms;  // H(u) = sum coeff u^exponent
};

// h, h', h'' at one f. `clamped` is set when an exponent (p_i - 1) f had to
// be clipped to +-700 to stay finite.
struct ReactionTerm {
  double h = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  bool clamped = false;
};

class Equation {
 public:
  using Kind = std::variant<LinearEq, LogEq, PowerSumEq>;

  static Equation linear(double p);
  static Equation logarithmic(double a);
  // Terms with equal exponents are rejected; zero coefficients are dropped.
  static Equation power_sum(std::vector<PowerTerm> terms);
  // H(u) = a u + b u^p, the Yamabe-type reaction.
  static Equation yamabe(double a, double b, double p);

  const Kind& kind() const { return kind_; }
  bool is_linear() const { return std::holds_alternative<LinearEq>(kind_); }
  bool is_log() const { return std::holds_alternative<LogEq>(kind_); }
  bool is_power_sum() const { return std::holds_alternative<PowerSumEq>(kind_); }

  double big_H(double u) const;
  ReactionTerm reaction(double f) const;
  std::string describe() const;

 private:
  explicit Equation(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

double h(const Equation& eq, double f);
double h1(const Equation& eq, double f);
double h2(const Equation& eq, double f);

// Manifold data: m > 0 is the dimension constant in the system,
// K >= 0 the Ricci lower bound Ric >= -K, n the spatial dimension.
struct CurvatureParams {
  double m = 1.0;
  double K = 0.0;
  int n = 1;

  void validate() const;  // throws std::invalid_argument
  void validate_for_exact() const;  // additionally m >= n
};

}  // namespace harnack
