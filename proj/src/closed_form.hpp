#pragma once

// Helpers shared by the catalog translation units.

#include <cmath>
#include <sstream>
#include <string>

#include "harnack/candidates.hpp"
#include "harnack/dual.hpp"

namespace harnack::detail {

using D = Dual<Real>;

template <class F>
TimeFunction closed_form(F f) {
  return [f](Real t) {
    D r = f(D::variable(t));
    return Sample{r.v, r.d};
  };
}

inline TimeFunction constant_fn(Real v) {
  return [v](Real) { return Sample{v, 0.0L}; };
}

// coth(x) + 1 = -2 / expm1(-2x), x > 0
inline D coth_plus_one(const D& x) { return -2.0L / expm1(-2.0L * x); }

// 1 + g(x) with the stable g
inline D li_xu_alpha(const D& x) { return D(1.0L + li_xu_g(x.v), li_xu_g_prime(x.v) * x.d); }

// (e^{-a t} - 1)/a, with the a -> 0 limit -t
inline D expm1_neg_over(Real a, const D& t) {
  if (a == 0.0L) return -t;
  return expm1(-a * t) / a;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ConstructionError(what);
}

inline std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Shared shapes, all with gamma = 1 unless stated. Defined in catalog_log.cpp.

// alpha const, beta = t, phi = m al^2/(2t) + phi_const, c = m al/(2t) + c_const
void set_li_yau_shape(CandidateFunctions& c, Real m, Real al, Real phi_const, Real c_const);
// alpha = 1 + g(kt), beta = tanh(kt), phi = c = (m k/2)(coth(kt) + 1)
void set_li_xu_heat_shape(CandidateFunctions& c, Real m, Real k);
// the exponential Li-Xu form with reaction slope a >= 0 (a -> 0 allowed)
void set_li_xu_pos_shape(CandidateFunctions& c, Real m, Real K, Real a);
// alpha = s(1 + 2Kt/3), beta = tanh(Kt),
// phi = s^2 [(m/2)(1/t + K + K^2 t/3) + (m a/16)(a t + 6)(1 + 2Kt/3)^2],
// c = s [(m/2)(1/t + K) + (m a/4)(1 + 2Kt/3)]
void set_linear_li_xu_shape(CandidateFunctions& c, Real m, Real K, Real a, Real s);
// gamma = delta e^{-2Kt}, alpha = 1, beta = t,
// phi = kphi m e^{2Kt}/(2 delta) (1/t + sphi), c = kc m e^{2Kt}/(2 delta) (1/t + sc)
void set_hamilton_shape(CandidateFunctions& c, Real m, Real K, Real delta, Real kphi, Real sphi,
                        Real kc, Real sc);

}  // namespace harnack::detail
