#pragma once

#include <cmath>
#include <limits>

#include "cesembed/errors.hpp"

namespace cesembed {

// Nonnegative extended real number [0, +inf].
//
// Arithmetic follows the measure-theoretic conventions
//   1/(+inf) = 0,   0/0 = 0,   0 * (+inf) = 0,
// so products and quotients of norms and weights never produce NaN.
struct ExtReal {
  double v = 0.0;

  ExtReal() = default;
  ExtReal(double x) : v(x) {
    if (std::isnan(x)) throw ParamError("ExtReal: NaN");
    if (x < 0) throw ParamError("ExtReal: negative value");
  }

  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool finite() const { return std::isfinite(v); }
  bool is_inf() const { return std::isinf(v); }
  bool is_zero() const { return v == 0.0; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v + b.v); }
  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if ((a.v == 0.0 && b.is_inf()) || (b.v == 0.0 && a.is_inf())) return ExtReal(0.0);
    return ExtReal(a.v * b.v);
  }
  friend ExtReal operator/(ExtReal a, ExtReal b) {
    if (a.v == 0.0) return ExtReal(0.0);               // covers 0/0 = 0
    if (b.is_inf()) return ExtReal(0.0);               // covers x/inf = 0
    if (b.v == 0.0) return ExtReal::infinity();        // x/0 = inf for x > 0
    return ExtReal(a.v / b.v);
  }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v == b.v; }
  friend bool operator!=(ExtReal a, ExtReal b) { return a.v != b.v; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v < b.v; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v <= b.v; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v > b.v; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v >= b.v; }
};

// x^e with 0^0 = inf^0 = 1, 0^e = inf for e < 0, inf^e = 0 for e < 0.
inline ExtReal pow(ExtReal x, double e) {
  if (e == 0.0) return ExtReal(1.0);
  if (x.v == 0.0) return e > 0 ? ExtReal(0.0) : ExtReal::infinity();
  if (x.is_inf()) return e > 0 ? ExtReal::infinity() : ExtReal(0.0);
  return ExtReal(std::pow(x.v, e));
}

inline ExtReal max(ExtReal a, ExtReal b) { return a.v >= b.v ? a : b; }

}  // namespace cesembed
