#pragma once

#include <algorithm>
#include <cmath>

#include "cesembed/errors.hpp"

namespace cesembed {

// Open interval (a, b) with 0 <= a < b <= +inf; a is always finite.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  Interval() = default;
  Interval(double lo, double hi) : a(lo), b(hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw ParamError("Interval: NaN endpoint");
    if (!std::isfinite(lo)) throw ParamError("Interval: lower endpoint must be finite");
    if (lo < 0) throw ParamError("Interval: lower endpoint must be >= 0");
    if (!(lo < hi)) throw ParamError("Interval: requires a < b");
  }

  bool bounded() const { return std::isfinite(b); }
  double length() const { return b - a; }  // +inf when unbounded

  bool contains(double t) const { return a < t && t < b; }
  bool contains(const Interval& sub) const { return a <= sub.a && sub.b <= b; }

  friend bool operator==(const Interval& x, const Interval& y) {
    return x.a == y.a && x.b == y.b;
  }
};

// Intersection clipped to `outer`; empty results are reported via `ok = false`.
struct Clip {
  bool ok = false;
  Interval iv{0.0, 1.0};
};

inline Clip clip(const Interval& piece, double lo, double hi) {
  double a = std::max(piece.a, lo);
  double b = std::min(piece.b, hi);
  if (!(a < b)) return {};
  return {true, Interval(a, b)};
}

}  // namespace cesembed
