#include "harnack/equations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace harnack {

namespace {

constexpr double kExpClamp = 700.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Equation Equation::linear(double p) {
  if (!std::isfinite(p)) throw std::invalid_argument("linear coefficient must be finite");
  return Equation(LinearEq{p});
}

Equation Equation::logarithmic(double a) {
  if (!std::isfinite(a) || a == 0.0)
    throw std::invalid_argument("log coefficient a must be finite and nonzero");
  return Equation(LogEq{a});
}

Equation Equation::power_sum(std::vector<PowerTerm> terms) {
  std::vector<PowerTerm> kept;
  for (const auto& t : terms) {
    if (!std::isfinite(t.coeff) || !std::isfinite(t.exponent))
      throw std::invalid_argument("power-sum terms must be finite");
    if (t.coeff != 0.0) kept.push_back(t);
  }
  if (kept.empty()) throw std::invalid_argument("power-sum needs at least one nonzero term");
  std::sort(kept.begin(), kept.end(),
            [](const PowerTerm& x, const PowerTerm& y) { return x.exponent < y.exponent; });
  for (std::size_t i = 1; i < kept.size(); ++i)
    if (kept[i].exponent == kept[i - 1].exponent)
      throw std::invalid_argument("power-sum exponents must be distinct");
  return Equation(PowerSumEq{std::move(kept)});
}

Equation Equation::yamabe(double a, double b, double p) {
  if (p == 1.0) throw std::invalid_argument("Yamabe exponent p must differ from 1");
  if (b == 0.0) throw std::invalid_argument("Yamabe coefficient b must be nonzero");
  return power_sum({{a, 1.0}, {b, p}});
}

double Equation::big_H(double u) const {
  if (!(u > 0.0)) throw std::domain_error("H(u) needs u > 0");
  return std::visit(Overloaded{
                        [&](const LinearEq& e) { return e.p * u; },
                        [&](const LogEq& e) { return e.a * u * std::log(u); },
                        [&](const PowerSumEq& e) {
                          double s = 0.0;
                          for (const auto& t : e.terms) s += t.coeff * std::pow(u, t.exponent);
                          return s;
                        },
                    },
                    kind_);
}

ReactionTerm Equation::reaction(double f) const {
  if (!std::isfinite(f)) throw std::domain_error("f must be finite");
  return std::visit(Overloaded{
                        [&](const LinearEq& e) { return ReactionTerm{e.p, 0.0, 0.0, false}; },
                        [&](const LogEq& e) {
                          return ReactionTerm{e.a * f, e.a, 0.0, false};
                        },
                        [&](const PowerSumEq& e) {
                          ReactionTerm r;
                          for (const auto& t : e.terms) {
                            long double q = static_cast<long double>(t.exponent) - 1.0L;
                            long double x = q * f;
                            if (x > kExpClamp) { x = kExpClamp; r.clamped = true; }
                            if (x < -kExpClamp) { x = -kExpClamp; r.clamped = true; }
                            long double w = t.coeff * std::exp(x);
                            r.h += w;
                            r.h1 += q * w;
                            r.h2 += q * q * w;
                          }
                          return r;
                        },
                    },
                    kind_);
}

std::string Equation::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const LinearEq& e) { os << "linear(p=" << e.p << ")"; },
                 [&](const LogEq& e) { os << "log(a=" << e.a << ")"; },
                 [&](const PowerSumEq& e) {
                   os << "power_sum(";
                   for (std::size_t i = 0; i < e.terms.size(); ++i) {
                     if (i) os << ", ";
                     os << e.terms[i].coeff << "*u^" << e.terms[i].exponent;
                   }
                   os << ")";
                 },
             },
             kind_);
  return os.str();
}

double h(const Equation& eq, double f) { return static_cast<double>(eq.reaction(f).h); }
double h1(const Equation& eq, double f) { return static_cast<double>(eq.reaction(f).h1); }
double h2(const Equation& eq, double f) { return static_cast<double>(eq.reaction(f).h2); }

void CurvatureParams::validate() const {
  if (!(K >= 0.0) || !std::isfinite(K)) throw std::invalid_argument("K must be finite and >= 0");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("m must be finite and > 0");
}

void CurvatureParams::validate_for_exact() const {
  validate();
  if (m < static_cast<double>(n)) throw std::invalid_argument("exact solutions need m >= n");
}

}  // namespace harnack
