#pragma once

// Weight expressions and their calculus.
//
// A Weight is an immutable expression tree over the closed power family
//   pow      t^alpha
//   dpow     (sign*(t-center))^alpha        (shifted/reflected powers)
//   powlog   t^alpha * log(e+t)^beta
//   scale    c * w          (c >= 0; zero weights are legal limit cases)
//   prod     w1 * w2
//   powof    w^e
//   pw       piecewise glue of the above
//   tailnorm x -> (int_x^b u^p)^(1/p)  /  head variant   (norm tails)
//   refl     t -> w(s - t)                               (reflections)
//
// integrate() and ess_sup() use exact antiderivatives whenever the expression
// reduces to a single shifted power, and otherwise fall back to graded
// quadrature / sampled search with growth-based divergence detection.
// Divergence at an endpoint is decided analytically from endpoint exponents
// whenever the expression supports that analysis (endpoint_behavior).

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cesembed/errors.hpp"
#include "cesembed/extreal.hpp"
#include "cesembed/interval.hpp"
#include "cesembed/quadrature.hpp"

namespace cesembed {

// Shortest round-trip decimal form of a double.
inline std::string num_str(double d) {
  std::array<char, 40> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  return std::string(buf.data(), p);
}

enum class MonoDir { increasing, decreasing, flat, unknown };

// coef * (sign*(t-center))^alpha
struct PowerForm {
  double coef = 1.0;
  double center = 0.0;
  int sign = +1;
  double alpha = 0.0;

  double value(double t) const {
    if (coef == 0.0) return 0.0;
    if (alpha == 0.0) return coef;
    double d = sign > 0 ? t - center : center - t;
    return coef * std::pow(d, alpha);
  }
};

// int_x^y (sign*(t-center))^m dt, with y possibly +inf and the singular point
// d = 0 handled as an improper limit. Returns +inf on divergence.
inline double power_primitive_integral(double center, int sign, double m, double x, double y) {
  double d0, d1;
  if (sign > 0) {
    d0 = x - center;
    d1 = std::isinf(y) ? kInf : y - center;
  } else {
    if (std::isinf(y)) return m == 0.0 ? kInf : kInf;  // (c-t)^m has no mass at +inf side
    d0 = center - y;
    d1 = center - x;
  }
  if (d0 < 0 || d1 < d0) throw DomainError("power integral outside domain");
  if (d0 == d1) return 0.0;
  if (m == -1.0) {
    if (d0 == 0.0 || std::isinf(d1)) return kInf;
    return std::log(d1 / d0);
  }
  double s = m + 1.0;
  if (d0 == 0.0) {
    if (s <= 0.0) return kInf;
    return std::pow(d1, s) / s;  // d1 = inf gives inf, correctly
  }
  if (std::isinf(d1)) {
    if (s >= 0.0) return kInf;
    return -std::pow(d0, s) / s;
  }
  // both endpoints finite and positive: cancellation-safe difference
  double lr = std::log1p((d1 - d0) / d0);
  double val = std::pow(d0, s) * std::expm1(s * lr) / s;
  return val;
}

class Weight {
 public:
  Weight() = default;  // empty handle; factories below produce real weights

  // --- factories -----------------------------------------------------------
  static Weight power(double alpha) { return power_at(0.0, +1, alpha); }
  static Weight constant(double c) { return c == 1.0 ? power(0.0) : scaled(c, power(0.0)); }
  static Weight power_at(double center, int sign, double alpha);
  static Weight power_log(double alpha, double beta);
  static Weight scaled(double c, Weight inner);
  static Weight product(Weight a, Weight b);
  static Weight power_of(Weight inner, double e);
  static Weight piecewise(std::vector<std::pair<Interval, Weight>> pieces);
  static Weight tail_norm(Weight u, double p, Interval iv);  // x -> ||u||_{p,(x,b)}
  static Weight head_norm(Weight u, double p, Interval iv);  // x -> ||u||_{p,(a,x)}
  static Weight reflect(Weight inner, double s);

  bool valid() const { return n_ != nullptr; }

  // --- evaluation ----------------------------------------------------------
  std::pair<double, double> domain() const;  // lo may be -inf, hi may be +inf
  double value(double t) const;
  ExtReal integrate(double e, Interval sub, const QuadOptions& opts = {}) const;
  bool closed_form_integral(double e) const;  // integrate(e, .) uses exact antiderivatives only
  ExtReal ess_sup(Interval sub, const SupOptions& opts = {}) const;
  MonoDir monotone_dir() const;
  std::optional<PowerForm> as_power() const;

  // f ~ C d^k (times log^l at infinity) near the point T (finite or +inf);
  // returns {k, l} when the analysis applies.
  std::optional<std::pair<double, double>> endpoint_behavior(double T) const;

  // --- transforms ----------------------------------------------------------
  Weight simplified() const;
  std::optional<Weight> invert_about(double a) const;  // t -> w(a + 1/(t-a))
  std::vector<double> piece_breaks() const;            // interior breakpoints

  // --- identity / text -----------------------------------------------------
  bool same_as(const Weight& o) const;
  std::string to_string() const;

  // true when the integral of the weight over `sub` is zero
  bool ae_zero(Interval sub) const;

 private:
  struct Node;
  explicit Weight(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct Weight::Node {
  enum class K { power, powerlog, piecewise, product, scaled, powerof, normtail, reflect };
  K k = K::power;

  double center = 0.0, alpha = 0.0;
  int sign = +1;
  double beta = 0.0;  // powerlog only
  double c = 1.0;     // scaled
  double e = 1.0;     // powerof
  Weight x, y;        // children
  std::vector<std::pair<Interval, Weight>> pieces;
  double s = 0.0;             // reflect point
  double p = 1.0;             // normtail exponent
  Interval nt_iv{0.0, 1.0};   // normtail base interval
  bool head = false;          // normtail orientation
};

// --- factory implementations -----------------------------------------------

inline Weight Weight::power_at(double center, int sign, double alpha) {
  if (!std::isfinite(center) || !std::isfinite(alpha)) throw ParamError("power: finite parameters required");
  auto n = std::make_shared<Node>();
  n->k = Node::K::power;
  n->center = center;
  n->sign = sign >= 0 ? +1 : -1;
  n->alpha = alpha;
  return Weight(std::move(n));
}

inline Weight Weight::power_log(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ParamError("powlog: finite parameters required");
  auto n = std::make_shared<Node>();
  n->k = Node::K::powerlog;
  n->alpha = alpha;
  n->beta = beta;
  return Weight(std::move(n));
}

inline Weight Weight::scaled(double c, Weight inner) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw ParamError("scale: coefficient must be finite and >= 0");
  if (!inner.valid()) throw ParamError("scale: empty inner weight");
  auto n = std::make_shared<Node>();
  n->k = Node::K::scaled;
  n->c = c;
  n->x = std::move(inner);
  return Weight(std::move(n));
}

inline Weight Weight::product(Weight a, Weight b) {
  if (!a.valid() || !b.valid()) throw ParamError("prod: empty factor");
  auto n = std::make_shared<Node>();
  n->k = Node::K::product;
  n->x = std::move(a);
  n->y = std::move(b);
  return Weight(std::move(n));
}

inline Weight Weight::power_of(Weight inner, double e) {
  if (!std::isfinite(e)) throw ParamError("powof: finite exponent required");
  if (!inner.valid()) throw ParamError("powof: empty inner weight");
  auto n = std::make_shared<Node>();
  n->k = Node::K::powerof;
  n->e = e;
  n->x = std::move(inner);
  return Weight(std::move(n));
}

inline Weight Weight::piecewise(std::vector<std::pair<Interval, Weight>> pieces) {
  if (pieces.empty()) throw ParamError("pw: at least one piece required");
  std::sort(pieces.begin(), pieces.end(),
            [](const auto& l, const auto& r) { return l.first.a < r.first.a; });
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
    if (pieces[i].first.b != pieces[i + 1].first.a)
      throw ParamError("pw: pieces must tile the interval");
  for (auto& pc : pieces)
    if (!pc.second.valid()) throw ParamError("pw: empty piece weight");
  auto n = std::make_shared<Node>();
  n->k = Node::K::piecewise;
  n->pieces = std::move(pieces);
  return Weight(std::move(n));
}

inline Weight Weight::tail_norm(Weight u, double p, Interval iv) {
  if (!(p > 0)) throw ParamError("tailnorm: p must be positive");
  auto n = std::make_shared<Node>();
  n->k = Node::K::normtail;
  n->x = std::move(u);
  n->p = p;
  n->nt_iv = iv;
  n->head = false;
  return Weight(std::move(n));
}

inline Weight Weight::head_norm(Weight u, double p, Interval iv) {
  if (!(p > 0)) throw ParamError("headnorm: p must be positive");
  auto n = std::make_shared<Node>();
  n->k = Node::K::normtail;
  n->x = std::move(u);
  n->p = p;
  n->nt_iv = iv;
  n->head = true;
  return Weight(std::move(n));
}

inline Weight Weight::reflect(Weight inner, double s) {
  if (!std::isfinite(s)) throw ParamError("refl: finite reflection point required");
  if (!inner.valid()) throw ParamError("refl: empty inner weight");
  // structural cancellation makes double reflection exact
  if (inner.n_->k == Node::K::reflect && inner.n_->s == s) return inner.n_->x;
  auto n = std::make_shared<Node>();
  n->k = Node::K::reflect;
  n->s = s;
  n->x = std::move(inner);
  return Weight(std::move(n));
}

// --- structure queries -------------------------------------------------------

inline std::pair<double, double> Weight::domain() const {
  if (!valid()) throw Error("empty weight");
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::power:
      if (n.alpha == 0.0) return {-kInf, kInf};
      return n.sign > 0 ? std::pair{n.center, kInf} : std::pair{-kInf, n.center};
    case Node::K::powerlog:
      return {0.0, kInf};
    case Node::K::scaled:
      return n.c == 0.0 ? std::pair{-kInf, kInf} : n.x.domain();
    case Node::K::powerof:
      return n.e == 0.0 ? std::pair{-kInf, kInf} : n.x.domain();
    case Node::K::product: {
      auto [la, ha] = n.x.domain();
      auto [lb, hb] = n.y.domain();
      return {std::max(la, lb), std::min(ha, hb)};
    }
    case Node::K::piecewise:
      return {n.pieces.front().first.a, n.pieces.back().first.b};
    case Node::K::normtail:
      return {n.nt_iv.a, n.nt_iv.b};
    case Node::K::reflect: {
      auto [l, h] = n.x.domain();
      return {n.s - h, n.s - l};
    }
  }
  return {-kInf, kInf};
}

inline std::optional<PowerForm> Weight::as_power() const {
  if (!valid()) return std::nullopt;
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::power:
      return PowerForm{1.0, n.center, n.sign, n.alpha};
    case Node::K::scaled: {
      auto f = n.x.as_power();
      if (!f) return std::nullopt;
      f->coef *= n.c;
      if (f->coef == 0.0) f->alpha = 0.0;
      return f;
    }
    case Node::K::powerof: {
      auto f = n.x.as_power();
      if (!f) return std::nullopt;
      double c = std::pow(f->coef, n.e);
      if (!std::isfinite(c)) return std::nullopt;
      return PowerForm{c, f->center, f->sign, f->alpha * n.e};
    }
    case Node::K::product: {
      auto fa = n.x.as_power();
      auto fb = n.y.as_power();
      if (!fa || !fb) return std::nullopt;
      if (fa->coef == 0.0 || fb->coef == 0.0) return PowerForm{0.0, 0.0, +1, 0.0};
      if (fa->alpha == 0.0) return PowerForm{fa->coef * fb->coef, fb->center, fb->sign, fb->alpha};
      if (fb->alpha == 0.0) return PowerForm{fa->coef * fb->coef, fa->center, fa->sign, fa->alpha};
      if (fa->center == fb->center && fa->sign == fb->sign)
        return PowerForm{fa->coef * fb->coef, fa->center, fa->sign, fa->alpha + fb->alpha};
      return std::nullopt;
    }
    case Node::K::reflect: {
      auto f = n.x.as_power();
      if (!f) return std::nullopt;
      // coef*(sign*(s-t-center))^a = coef*((-sign)*(t-(s-center)))^a
      return PowerForm{f->coef, n.s - f->center, -f->sign, f->alpha};
    }
    default:
      return std::nullopt;
  }
}

inline double Weight::value(double t) const {
  if (!valid()) throw Error("empty weight");
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::power: {
      if (n.alpha == 0.0) return 1.0;
      double d = n.sign > 0 ? t - n.center : n.center - t;
      if (d < 0) throw DomainError("weight evaluated outside its domain");
      return std::pow(d, n.alpha);  // d == 0: IEEE gives 0 or inf as appropriate
    }
    case Node::K::powerlog: {
      double a = n.alpha == 0.0 ? 1.0 : std::pow(t, n.alpha);
      double b = n.beta == 0.0 ? 1.0 : std::pow(std::log(std::numbers::e + t), n.beta);
      return a * b;
    }
    case Node::K::scaled: {
      if (n.c == 0.0) return 0.0;
      return n.c * n.x.value(t);
    }
    case Node::K::powerof: {
      if (n.e == 0.0) return 1.0;
      double v = n.x.value(t);
      if (v == 0.0) return n.e > 0 ? 0.0 : kInf;
      return std::pow(v, n.e);
    }
    case Node::K::product: {
      double a = n.x.value(t), b = n.y.value(t);
      if ((a == 0.0 && std::isinf(b)) || (b == 0.0 && std::isinf(a))) return 0.0;
      return a * b;
    }
    case Node::K::piecewise: {
      for (const auto& pc : n.pieces)
        if (t >= pc.first.a && t < pc.first.b) return pc.second.value(t);
      if (t == n.pieces.back().first.b) return n.pieces.back().second.value(t);
      throw DomainError("piecewise weight evaluated outside its pieces");
    }
    case Node::K::normtail: {
      Interval seg = n.head ? Interval(n.nt_iv.a, std::max(t, n.nt_iv.a + 0.0)) : n.nt_iv;
      double lo = n.head ? n.nt_iv.a : t;
      double hi = n.head ? t : n.nt_iv.b;
      (void)seg;
      if (!(lo < hi)) return 0.0;
      if (std::isinf(n.p)) return n.x.ess_sup(Interval(lo, hi)).v;
      return cesembed::pow(n.x.integrate(n.p, Interval(lo, hi)), 1.0 / n.p).v;
    }
    case Node::K::reflect:
      return n.x.value(n.s - t);
  }
  throw Error("unreachable");
}

inline MonoDir Weight::monotone_dir() const {
  if (!valid()) return MonoDir::unknown;
  const Node& n = *n_;
  auto flip = [](MonoDir d) {
    if (d == MonoDir::increasing) return MonoDir::decreasing;
    if (d == MonoDir::decreasing) return MonoDir::increasing;
    return d;
  };
  switch (n.k) {
    case Node::K::power:
      if (n.alpha == 0.0) return MonoDir::flat;
      if (n.sign > 0) return n.alpha > 0 ? MonoDir::increasing : MonoDir::decreasing;
      return n.alpha > 0 ? MonoDir::decreasing : MonoDir::increasing;
    case Node::K::powerlog:
      if (n.alpha == 0.0 && n.beta == 0.0) return MonoDir::flat;
      if (n.alpha >= 0.0 && n.beta >= 0.0) return MonoDir::increasing;
      if (n.alpha <= 0.0 && n.beta <= 0.0) return MonoDir::decreasing;
      return MonoDir::unknown;
    case Node::K::scaled:
      return n.c == 0.0 ? MonoDir::flat : n.x.monotone_dir();
    case Node::K::powerof: {
      if (n.e == 0.0) return MonoDir::flat;
      MonoDir d = n.x.monotone_dir();
      return n.e > 0 ? d : flip(d);
    }
    case Node::K::product: {
      MonoDir a = n.x.monotone_dir(), b = n.y.monotone_dir();
      if (a == MonoDir::flat) return b;
      if (b == MonoDir::flat) return a;
      if (a == b && a != MonoDir::unknown) return a;
      return MonoDir::unknown;
    }
    case Node::K::piecewise:
      return MonoDir::unknown;
    case Node::K::normtail:
      return n.head ? MonoDir::increasing : MonoDir::decreasing;
    case Node::K::reflect:
      return flip(n.x.monotone_dir());
  }
  return MonoDir::unknown;
}

inline std::optional<std::pair<double, double>> Weight::endpoint_behavior(double T) const {
  if (!valid()) return std::nullopt;
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::power: {
      if (n.alpha == 0.0) return std::pair{0.0, 0.0};
      if (std::isinf(T)) return n.sign > 0 ? std::optional(std::pair{n.alpha, 0.0}) : std::nullopt;
      if (T == n.center) return std::pair{n.alpha, 0.0};
      return std::pair{0.0, 0.0};
    }
    case Node::K::powerlog:
      if (std::isinf(T)) return std::pair{n.alpha, n.beta};
      if (T == 0.0) return std::pair{n.alpha, 0.0};
      return std::pair{0.0, 0.0};
    case Node::K::scaled:
      if (n.c == 0.0) return std::pair{0.0, 0.0};
      return n.x.endpoint_behavior(T);
    case Node::K::powerof: {
      auto b = n.x.endpoint_behavior(T);
      if (!b) return std::nullopt;
      return std::pair{b->first * n.e, b->second * n.e};
    }
    case Node::K::product: {
      auto a = n.x.endpoint_behavior(T);
      auto b = n.y.endpoint_behavior(T);
      if (!a || !b) return std::nullopt;
      return std::pair{a->first + b->first, a->second + b->second};
    }
    case Node::K::reflect:
      if (std::isinf(T)) return std::nullopt;
      return n.x.endpoint_behavior(n.s - T);
    default:
      return std::nullopt;
  }
}

inline std::vector<double> Weight::piece_breaks() const {
  std::vector<double> out;
  if (!valid()) return out;
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::piecewise:
      for (std::size_t i = 0; i + 1 < n.pieces.size(); ++i) out.push_back(n.pieces[i].first.b);
      for (const auto& pc : n.pieces)
        for (double b : pc.second.piece_breaks()) out.push_back(b);
      break;
    case Node::K::scaled:
    case Node::K::powerof:
      out = n.x.piece_breaks();
      break;
    case Node::K::product: {
      out = n.x.piece_breaks();
      auto o2 = n.y.piece_breaks();
      out.insert(out.end(), o2.begin(), o2.end());
      break;
    }
    case Node::K::reflect:
      for (double b : n.x.piece_breaks()) out.push_back(n.s - b);
      break;
    default:
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- integration -------------------------------------------------------------

inline ExtReal Weight::integrate(double e, Interval sub, const QuadOptions& opts) const {
  if (!valid()) throw Error("empty weight");
  auto [lo, hi] = domain();
  if (sub.a < lo - 1e-12 * std::max(1.0, std::abs(lo)) || (std::isfinite(hi) && sub.b > hi * (1 + 1e-12) + 1e-300))
    throw DomainError("integrate: subinterval outside weight domain");
  const Node& n = *n_;

  switch (n.k) {
    case Node::K::piecewise: {
      ExtReal total(0.0);
      for (const auto& pc : n.pieces) {
        auto cl = clip(pc.first, sub.a, sub.b);
        if (cl.ok) total = total + pc.second.integrate(e, cl.iv, opts);
      }
      return total;
    }
    case Node::K::reflect: {
      if (!sub.bounded()) throw DomainError("integrate: reflected weight on unbounded interval");
      return n.x.integrate(e, Interval(n.s - sub.b, n.s - sub.a), opts);
    }
    case Node::K::scaled: {
      if (n.c == 0.0) return e > 0 ? ExtReal(0.0) : ExtReal::infinity() * ExtReal(sub.length());
      return cesembed::pow(ExtReal(n.c), e) * n.x.integrate(e, sub, opts);
    }
    case Node::K::powerof:
      return n.x.integrate(e * n.e, sub, opts);
    default:
      break;
  }

  if (auto f = as_power()) {
    if (f->coef == 0.0) return e > 0 ? ExtReal(0.0) : ExtReal::infinity() * ExtReal(sub.length());
    double m = f->alpha * e;
    double raw = power_primitive_integral(f->center, f->sign, m, sub.a, sub.b);
    ExtReal c = cesembed::pow(ExtReal(f->coef), e);
    return c * ExtReal(raw);
  }

  // analytic divergence pre-check at the endpoints when the behavior is known
  auto check = [&](double T) -> std::optional<bool> {  // true => divergent
    auto b = endpoint_behavior(T);
    if (!b) return std::nullopt;
    double k = b->first * e, l = b->second * e;
    if (std::isinf(T)) {
      if (k > -1.0) return true;
      if (k == -1.0) return l >= -1.0;
      return false;
    }
    return k <= -1.0;
  };
  if (sub.a == 0.0 || sub.a == domain().first) {
    if (auto d = check(sub.a); d && *d) return ExtReal::infinity();
  }
  if (!sub.bounded()) {
    if (auto d = check(kInf); d && *d) return ExtReal::infinity();
  } else if (sub.b == domain().second) {
    if (auto d = check(sub.b); d && *d) return ExtReal::infinity();
  }

  auto f = [this, e](double t) {
    double v = value(t);
    if (v == 0.0) return e > 0 ? 0.0 : kInf;
    if (std::isinf(v)) return e > 0 ? kInf : 0.0;
    return std::pow(v, e);
  };
  return integrate_fn(f, sub, piece_breaks(), opts);
}

inline bool Weight::closed_form_integral(double e) const {
  if (!valid()) return false;
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::power: return true;
    case Node::K::powerlog: return false;
    case Node::K::normtail: return false;
    case Node::K::scaled: return n.x.closed_form_integral(e);
    case Node::K::powerof: return n.x.closed_form_integral(e * n.e);
    case Node::K::reflect: return n.x.closed_form_integral(e);
    case Node::K::piecewise:
      for (const auto& pc : n.pieces)
        if (!pc.second.closed_form_integral(e)) return false;
      return true;
    case Node::K::product: return as_power().has_value();
  }
  return false;
}

// --- essential supremum --------------------------------------------------------

inline ExtReal Weight::ess_sup(Interval sub, const SupOptions& opts) const {
  if (!valid()) throw Error("empty weight");
  const Node& n = *n_;
  if (n.k == Node::K::piecewise) {
    ExtReal best(0.0);
    for (const auto& pc : n.pieces) {
      auto cl = clip(pc.first, sub.a, sub.b);
      if (cl.ok) best = max(best, pc.second.ess_sup(cl.iv, opts));
    }
    return best;
  }
  if (n.k == Node::K::reflect) {
    if (!sub.bounded()) throw DomainError("ess_sup: reflected weight on unbounded interval");
    return n.x.ess_sup(Interval(n.s - sub.b, n.s - sub.a), opts);
  }
  if (n.k == Node::K::scaled) {
    if (n.c == 0.0) return ExtReal(0.0);
    return ExtReal(n.c) * n.x.ess_sup(sub, opts);
  }

  MonoDir d = monotone_dir();
  if (d == MonoDir::flat) return ExtReal(value(sub.bounded() ? 0.5 * (sub.a + sub.b) : sub.a + 1.0));
  if (d == MonoDir::increasing || d == MonoDir::decreasing) {
    double T = d == MonoDir::increasing ? sub.b : sub.a;
    if (std::isinf(T)) {
      if (auto b = endpoint_behavior(kInf)) {
        if (b->first > 0 || (b->first == 0 && b->second > 0)) return ExtReal::infinity();
        if (b->first < 0 || (b->first == 0 && b->second < 0)) return ExtReal(0.0);
        return ExtReal(value(std::max(1.0, sub.a) * 1e14));
      }
      double v = value(std::max(1.0, sub.a) * 1e14);
      return std::isinf(v) ? ExtReal::infinity() : ExtReal(v);
    }
    if (auto b = endpoint_behavior(T)) {
      if (b->first < 0) return ExtReal::infinity();
      if (b->first > 0) return ExtReal(0.0);
    }
    double scale = sub.bounded() ? sub.length() : std::max(1.0, sub.a);
    double t = T + (d == MonoDir::increasing ? -1.0 : 1.0) * 1e-13 * scale;
    double v = value(t);
    return std::isinf(v) ? ExtReal::infinity() : ExtReal(v);
  }

  SupOptions so = opts;
  auto r = sup_search([this](double t) { return value(t); }, sub, so);
  return r.value;
}

inline bool Weight::ae_zero(Interval sub) const {
  QuadOptions cheap;
  cheap.rel_tol = 1e-6;
  cheap.floor_rel = 1e-9;
  cheap.refine_rounds = 0;
  Interval probe = sub.bounded() ? sub : Interval(sub.a, sub.a + 2.0 * std::max(1.0, sub.a));
  return integrate(1.0, probe, cheap).is_zero();
}

// --- simplification ------------------------------------------------------------

inline Weight Weight::simplified() const {
  if (!valid()) return *this;
  if (auto f = as_power()) {
    Weight p = power_at(f->center, f->sign, f->alpha);
    return f->coef == 1.0 ? p : scaled(f->coef, p);
  }
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::piecewise: {
      auto pcs = n.pieces;
      for (auto& pc : pcs) pc.second = pc.second.simplified();
      return piecewise(std::move(pcs));
    }
    case Node::K::scaled:
      return scaled(n.c, n.x.simplified());
    case Node::K::powerof:
      return power_of(n.x.simplified(), n.e);
    case Node::K::product:
      return product(n.x.simplified(), n.y.simplified());
    case Node::K::reflect:
      return reflect(n.x.simplified(), n.s);
    default:
      return *this;
  }
}

// Rewrites w(a + 1/(t-a)) inside the family. Supported for trees of powers
// centered at `a` (plain powers when a == 0), constants, scalings, products,
// integer-free power-of nodes and piecewise glue. Anything else (powlog,
// norm tails, reflections, powers centered elsewhere) has no closed-form
// image and yields nullopt.
inline std::optional<Weight> Weight::invert_about(double a) const {
  if (!valid()) return std::nullopt;
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::power: {
      if (n.alpha == 0.0) return *this;
      if (n.sign != +1 || n.center != a) return std::nullopt;
      return power_at(a, +1, -n.alpha);
    }
    case Node::K::scaled: {
      auto in = n.x.invert_about(a);
      if (!in) return std::nullopt;
      return scaled(n.c, *in);
    }
    case Node::K::powerof: {
      auto in = n.x.invert_about(a);
      if (!in) return std::nullopt;
      return power_of(*in, n.e);
    }
    case Node::K::product: {
      auto ia = n.x.invert_about(a);
      auto ib = n.y.invert_about(a);
      if (!ia || !ib) return std::nullopt;
      return product(*ia, *ib);
    }
    case Node::K::piecewise: {
      std::vector<std::pair<Interval, Weight>> out;
      for (const auto& pc : n.pieces) {
        auto iw = pc.second.invert_about(a);
        if (!iw) return std::nullopt;
        double lo = pc.first.a, hi = pc.first.b;
        double nlo = std::isinf(hi) ? a : a + 1.0 / (hi - a);
        double nhi = lo == a ? kInf : a + 1.0 / (lo - a);
        if (!(nlo < nhi)) return std::nullopt;
        out.push_back({Interval(nlo, nhi), *iw});
      }
      return piecewise(std::move(out));
    }
    default:
      return std::nullopt;
  }
}

// --- structural equality ---------------------------------------------------------

inline bool Weight::same_as(const Weight& o) const {
  if (n_ == o.n_) return true;
  if (!valid() || !o.valid()) return false;
  const Node& a = *n_;
  const Node& b = *o.n_;
  if (a.k != b.k) return false;
  switch (a.k) {
    case Node::K::power:
      return a.center == b.center && a.sign == b.sign && a.alpha == b.alpha;
    case Node::K::powerlog:
      return a.alpha == b.alpha && a.beta == b.beta;
    case Node::K::scaled:
      return a.c == b.c && a.x.same_as(b.x);
    case Node::K::powerof:
      return a.e == b.e && a.x.same_as(b.x);
    case Node::K::product:
      return a.x.same_as(b.x) && a.y.same_as(b.y);
    case Node::K::piecewise: {
      if (a.pieces.size() != b.pieces.size()) return false;
      for (std::size_t i = 0; i < a.pieces.size(); ++i)
        if (!(a.pieces[i].first == b.pieces[i].first) ||
            !a.pieces[i].second.same_as(b.pieces[i].second))
          return false;
      return true;
    }
    case Node::K::normtail:
      return a.p == b.p && a.head == b.head && a.nt_iv == b.nt_iv && a.x.same_as(b.x);
    case Node::K::reflect:
      return a.s == b.s && a.x.same_as(b.x);
  }
  return false;
}

// --- text form -------------------------------------------------------------------

inline std::string Weight::to_string() const {
  if (!valid()) return "<empty>";
  const Node& n = *n_;
  switch (n.k) {
    case Node::K::power:
      if (n.center == 0.0 && n.sign == +1) return "pow:" + num_str(n.alpha);
      return "dpow:" + num_str(n.center) + "," + std::string(n.sign > 0 ? "1" : "-1") + "," +
             num_str(n.alpha);
    case Node::K::powerlog:
      return "powlog:" + num_str(n.alpha) + "," + num_str(n.beta);
    case Node::K::scaled:
      return "scale:" + num_str(n.c) + "*" + n.x.to_string();
    case Node::K::powerof:
      return "powof:" + n.x.to_string() + "^" + num_str(n.e);
    case Node::K::product:
      return "prod:" + n.x.to_string() + ";" + n.y.to_string();
    case Node::K::piecewise: {
      std::string s = "pw:[";
      bool first = true;
      for (const auto& pc : n.pieces) {
        if (!first) s += ",";
        first = false;
        s += "(" + num_str(pc.first.a) + "," +
             (pc.first.bounded() ? num_str(pc.first.b) : std::string("inf")) + "," +
             pc.second.to_string() + ")";
      }
      return s + "]";
    }
    case Node::K::normtail:
      return std::string(n.head ? "headnorm" : "tailnorm") + ":" + num_str(n.p) + ",(" +
             num_str(n.nt_iv.a) + "," +
             (n.nt_iv.bounded() ? num_str(n.nt_iv.b) : std::string("inf")) + ")*(" +
             n.x.to_string() + ")";
    case Node::K::reflect:
      return "refl:" + num_str(n.s) + "*(" + n.x.to_string() + ")";
  }
  return "<unknown>";
}

// ---------------------------------------------------------------------------
// V_r: the r-dependent companion functional of the inner weight.
//   r < 1:  ( int_x^t v^{1/(1-r)} )^{(1-r)/r}
//   r = 1:  ess sup over (x, t) of v
// with V_r(x, x) = 0.
// ---------------------------------------------------------------------------

inline ExtReal v_r(const Weight& v, double r, double x, double t) {
  if (!(r > 0.0) || r > 1.0) throw ParamError("v_r: requires 0 < r <= 1");
  if (t < x) throw ParamError("v_r: requires x <= t");
  if (x == t) return ExtReal(0.0);
  if (r == 1.0) return v.ess_sup(Interval(x, t));
  double ip = 1.0 / (1.0 - r);
  ExtReal I = v.integrate(ip, Interval(x, t));
  return cesembed::pow(I, (1.0 - r) / r);
}

// ---------------------------------------------------------------------------
// Weight DSL
//   pow:<a> | powlog:<a>,<b> | scale:<c>*<expr> | prod:<expr>;<expr>
//   | powof:<expr>^<e> | pw:[(x0,x1,<expr>),...] | dpow:<center>,<sign>,<a>
//   | refl:<s>*(<expr>)
// Numbers accept decimals and rationals ("3/2").
// ---------------------------------------------------------------------------

namespace dsl {

inline double parse_number(std::string_view s, std::size_t& pos) {
  auto parse_one = [&]() -> double {
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    bool any = false;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
      ++pos;
      any = true;
    }
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
      std::size_t save = pos;
      ++pos;
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
      bool expd = false;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        ++pos;
        expd = true;
      }
      if (!expd) pos = save;
    }
    if (!any) throw ParseError(start, "expected a number");
    double out = 0.0;
    auto res = std::from_chars(s.data() + start, s.data() + pos, out);
    if (res.ec != std::errc() || res.ptr != s.data() + pos)
      throw ParseError(start, "malformed number");
    return out;
  };
  double a = parse_one();
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    double b = parse_one();
    if (b == 0.0) throw ParseError(pos, "rational with zero denominator");
    return a / b;
  }
  return a;
}

inline void expect(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c)
    throw ParseError(pos, std::string("expected '") + c + "'");
  ++pos;
}

inline double parse_endpoint(std::string_view s, std::size_t& pos) {
  if (s.substr(pos, 3) == "inf") {
    pos += 3;
    return kInf;
  }
  return parse_number(s, pos);
}

inline Weight parse_weight(std::string_view s, std::size_t& pos);

inline Weight parse_weight_impl(std::string_view s, std::size_t& pos) {
  auto kw = [&](std::string_view k) {
    if (s.substr(pos, k.size()) == k) {
      pos += k.size();
      return true;
    }
    return false;
  };
  if (kw("powlog:")) {
    double a = parse_number(s, pos);
    expect(s, pos, ',');
    double b = parse_number(s, pos);
    return Weight::power_log(a, b);
  }
  if (kw("powof:")) {
    Weight in = parse_weight(s, pos);
    expect(s, pos, '^');
    double e = parse_number(s, pos);
    return Weight::power_of(in, e);
  }
  if (kw("pow:")) return Weight::power(parse_number(s, pos));
  if (kw("dpow:")) {
    double c = parse_number(s, pos);
    expect(s, pos, ',');
    double sg = parse_number(s, pos);
    expect(s, pos, ',');
    double a = parse_number(s, pos);
    return Weight::power_at(c, sg >= 0 ? +1 : -1, a);
  }
  if (kw("scale:")) {
    double c = parse_number(s, pos);
    expect(s, pos, '*');
    return Weight::scaled(c, parse_weight(s, pos));
  }
  if (kw("prod:")) {
    Weight a = parse_weight(s, pos);
    expect(s, pos, ';');
    Weight b = parse_weight(s, pos);
    return Weight::product(a, b);
  }
  if (kw("refl:")) {
    double sp = parse_number(s, pos);
    expect(s, pos, '*');
    expect(s, pos, '(');
    Weight in = parse_weight(s, pos);
    expect(s, pos, ')');
    return Weight::reflect(in, sp);
  }
  if (kw("pw:")) {
    expect(s, pos, '[');
    std::vector<std::pair<Interval, Weight>> pieces;
    while (true) {
      expect(s, pos, '(');
      double x0 = parse_endpoint(s, pos);
      expect(s, pos, ',');
      double x1 = parse_endpoint(s, pos);
      expect(s, pos, ',');
      Weight w = parse_weight(s, pos);
      expect(s, pos, ')');
      pieces.push_back({Interval(x0, x1), w});
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    expect(s, pos, ']');
    return Weight::piecewise(std::move(pieces));
  }
  throw ParseError(pos, "expected a weight expression");
}

inline Weight parse_weight(std::string_view s, std::size_t& pos) {
  try {
    return parse_weight_impl(s, pos);
  } catch (const ParamError& e) {
    throw ParseError(pos, e.what());
  }
}

}  // namespace dsl

inline Weight parse_weight(std::string_view text) {
  std::size_t pos = 0;
  Weight w = dsl::parse_weight(text, pos);
  if (pos != text.size()) throw ParseError(pos, "trailing characters after weight");
  return w;
}

}  // namespace cesembed
