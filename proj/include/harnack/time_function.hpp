#pragma once

#include <functional>
#include <limits>
#include <string>

namespace harnack {

using Real = long double;

// value and first t-derivative of a time function
struct Sample {
  Real value = 0.0L;
  Real deriv = 0.0L;
};

using TimeFunction = std::function<Sample(Real)>;

struct TimeDomain {
  Real lo = 0.0L;
  Real hi = std::numeric_limits<Real>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(Real t) const {
    bool above = lo_closed ? t >= lo : t > lo;
    bool below = hi_closed ? t <= hi : t < hi;
    return above && below;
  }
  bool bounded() const { return hi < std::numeric_limits<Real>::infinity(); }
  std::string describe() const;
};

}  // namespace harnack
