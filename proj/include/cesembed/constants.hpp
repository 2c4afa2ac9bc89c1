#pragma once

// Regime classification and evaluation of the seven two-sided-estimate
// constants for the canonical inequality
//
//   ( int_a^b ( int_a^t f^r v )^{q/r} u dt )^{1/q}
//       <= C ( int_a^b ( int_a^t f )^p w dt )^{1/p},
//
// under 0 < r <= 1, 0 < p,q < inf and the hypothesis 0 < int_x^b w < inf for
// every interior x. Throughout, W(x) = int_x^b w, U(t) = int_t^b u, and
// V_r(x,t) is the r-dependent functional of v defined in weights.hpp.
//
// Key exact reductions used below (dU = -u dt):
//   int_y^x U(t)^k u(t) dt = (U(y)^{k+1} - U(x)^{k+1}) / (k+1),
//   int_t^x u = U(t) - U(x),
// which make the innermost kernels of the nested constants O(1) per point.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cesembed/errors.hpp"
#include "cesembed/extreal.hpp"
#include "cesembed/interval.hpp"
#include "cesembed/quadrature.hpp"
#include "cesembed/reduce.hpp"
#include "cesembed/weights.hpp"

namespace cesembed {

// ---------------------------------------------------------------------------
// Regimes
// ---------------------------------------------------------------------------

enum class RegimeId { i, ii, iii, iv, v, vi, vii };

inline const char* to_string(RegimeId r) {
  switch (r) {
    case RegimeId::i: return "i";
    case RegimeId::ii: return "ii";
    case RegimeId::iii: return "iii";
    case RegimeId::iv: return "iv";
    case RegimeId::v: return "v";
    case RegimeId::vi: return "vi";
    case RegimeId::vii: return "vii";
  }
  return "?";
}

inline std::vector<int> required_constants(RegimeId r) {
  switch (r) {
    case RegimeId::i: return {1};
    case RegimeId::ii: return {2};
    case RegimeId::iii: return {1, 3};
    case RegimeId::iv: return {2, 3};
    case RegimeId::v: return {4, 5};
    case RegimeId::vi: return {1, 5, 6};
    case RegimeId::vii: return {1, 6, 7};
  }
  return {};
}

struct Regime {
  RegimeId id = RegimeId::i;
  std::vector<int> required;
};

// The seven conditions partition {0<p<inf} x {0<q<inf} x {0<r<=1} exactly;
// boundary equalities go where the inequalities place them (p=r counts as
// p<=r, q=1 counts as q>=1).
inline Regime classify_regime(double p, double q, double r) {
  for (double e : {p, q})
    if (std::isnan(e) || e <= 0.0 || std::isinf(e))
      throw ParamError("classify_regime requires 0 < p, q < inf");
  if (std::isnan(r) || r <= 0.0) throw ParamError("classify_regime requires r > 0");
  if (r > 1.0)
    throw ParamError("classify_regime: r > 1 admits only trivial functions; run triviality_check");
  RegimeId id;
  if (q >= 1.0) {
    if (p <= r) id = RegimeId::i;
    else if (p <= q) id = RegimeId::iii;
    else id = RegimeId::vii;
  } else {
    if (p <= q) id = p <= r ? RegimeId::ii : RegimeId::iv;
    else id = p <= r ? RegimeId::v : RegimeId::vi;
  }
  return {id, required_constants(id)};
}

// ---------------------------------------------------------------------------
// Evaluation options
// ---------------------------------------------------------------------------

struct EvalOptions {
  int sup_n = 256;            // grid size for suprema in x and nested y
  int sup_inner_n = 96;       // grid size for suprema nested inside an outer integral
  double tau_sup = 1e-8;
  QuadOptions quad;           // outer integrals and the per-x inner integrals
  int kernel_half_cells = 6;  // fixed-budget innermost integral (C5): cells per side
  int kernel_gl = 6;
  int cache_nodes_hint = 0;   // 0: use the default master partition for C6's cache
};

namespace detail {

inline SupOptions sup_opts(const EvalOptions& eo) {
  SupOptions so;
  so.n = std::max(8, eo.sup_n);
  so.tau = eo.tau_sup;
  return so;
}

inline SupOptions sup_opts_inner(const EvalOptions& eo) {
  SupOptions so;
  so.n = std::max(8, eo.sup_inner_n);
  so.tau = std::max(eo.tau_sup, 1e-5);
  so.brackets = 2;
  return so;
}

// Budget for the supremum at the very bottom of a sup-inside-sup nest (C7's
// t-search): every probe of the enclosing search pays for a full run of this
// one, so it gets the smallest grid.
inline SupOptions sup_opts_innermost(const EvalOptions& eo) {
  SupOptions so;
  so.n = std::max(8, eo.sup_inner_n / 2);
  so.tau = std::max(eo.tau_sup, 1e-5);
  so.brackets = 1;
  return so;
}

inline std::vector<double> merged_breaks(std::initializer_list<const Weight*> ws) {
  std::vector<double> out;
  for (const Weight* w : ws)
    for (double b : w->piece_breaks()) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Log-graded master partition of (a,b), dense toward both endpoints (toward a
// and toward infinity when b = inf), with the weights' breakpoints inserted.
inline std::vector<double> master_partition(Interval iv, const std::vector<double>& breaks,
                                            int per_side = 44) {
  std::vector<double> pts;
  if (iv.bounded()) {
    double len = iv.length();
    double lg0 = -13.0, lg1 = std::log10(0.5);
    for (int k = 0; k <= per_side; ++k) {
      double lg = lg0 + (lg1 - lg0) * k / per_side;
      pts.push_back(iv.a + len * std::pow(10.0, lg));
      pts.push_back(iv.b - len * std::pow(10.0, lg));
    }
    // the graded ladders leave near-octave gaps around the midpoint; a
    // uniform fill keeps interpolated caches honest there
    for (int k = 1; k <= per_side; ++k) pts.push_back(iv.a + len * k / (per_side + 1.0));
  } else {
    double s = std::max(1.0, iv.a);
    for (int k = 0; k <= 2 * per_side; ++k) {
      double lg = -13.0 + 26.0 * k / (2 * per_side);
      pts.push_back(iv.a + s * std::pow(10.0, lg));
    }
  }
  for (double b : breaks)
    if (b > pts.front() && (!iv.bounded() || b < iv.b) && b < pts.back()) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Tail integral x -> int_x^b w, with interior segments int_lo^hi w. Exact when
// the weight family admits closed-form antiderivatives; otherwise evaluated
// from a per-cell Gauss table on the master partition.
class CumFn {
 public:
  CumFn(Weight w, Interval iv, QuadOptions qo = {})
      : w_(std::move(w)), iv_(iv), qo_(qo), direct_(w_.closed_form_integral(1.0)) {
    if (direct_) return;
    rule_ = gauss_rule(16);
    xs_ = master_partition(iv_, w_.piece_breaks());
    const std::size_t m = xs_.size() - 1;
    cells_.resize(m);
    for (std::size_t j = 0; j < m; ++j)
      cells_[j] = gl_cell([this](double t) { return w_.value(t); }, xs_[j], xs_[j + 1], rule_);
    ExtReal hi_seg = w_.integrate(1.0, Interval(xs_.back(), iv_.b), qo_);
    suffix_.assign(m + 1, 0.0);
    suffix_[m] = hi_seg.v;
    for (std::size_t j = m; j-- > 0;) suffix_[j] = suffix_[j + 1] + cells_[j];
    prefix_.assign(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) prefix_[j + 1] = prefix_[j] + cells_[j];
  }

  ExtReal operator()(double x) const {
    if (x >= iv_.b) return ExtReal(0.0);
    if (x < iv_.a) x = iv_.a;
    if (direct_) return w_.integrate(1.0, Interval(x, iv_.b), qo_);
    if (x <= xs_.front() || x >= xs_.back())
      return w_.integrate(1.0, Interval(x, iv_.b), qo_);
    std::size_t j = cell_of(x);
    double part = x == xs_[j] ? 0.0
                              : gl_cell([this](double t) { return w_.value(t); }, x, xs_[j + 1], rule_);
    double s = suffix_[j + 1] + part;
    return std::isnan(s) ? ExtReal::infinity() : ExtReal(s);
  }

  // int_lo^hi w; finite for interior segments even when the tail diverges
  ExtReal seg(double lo, double hi) const {
    if (!(hi > lo)) return ExtReal(0.0);
    if (direct_) return w_.integrate(1.0, Interval(lo, hi), qo_);
    if (lo < xs_.front() || hi > xs_.back()) return w_.integrate(1.0, Interval(lo, hi), qo_);
    if (cell_of(lo) == cell_of(hi)) {
      double s = gl_cell([this](double t) { return w_.value(t); }, lo, hi, rule_);
      return std::isnan(s) ? ExtReal::infinity() : ExtReal(std::max(0.0, s));
    }
    double glo = anchored(lo), ghi = anchored(hi);
    if (std::isinf(glo) || std::isinf(ghi) || std::isnan(ghi - glo))
      return w_.integrate(1.0, Interval(lo, hi), qo_);
    return ExtReal(std::max(0.0, ghi - glo));
  }

 private:
  std::size_t cell_of(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs_.begin());
    if (j == 0) return 0;
    if (j >= xs_.size()) return xs_.size() - 2;
    return j - 1;
  }
  double anchored(double x) const {  // int_{xs_.front()}^{x}
    std::size_t j = cell_of(x);
    double part = x == xs_[j] ? 0.0
                              : gl_cell([this](double t) { return w_.value(t); }, xs_[j], x, rule_);
    return prefix_[j] + part;
  }

  Weight w_;
  Interval iv_;
  QuadOptions qo_;
  bool direct_ = true;
  GaussRule rule_;
  std::vector<double> xs_;
  std::vector<double> cells_, suffix_, prefix_;
};

// V_r(x,t) as a two-point functional; exact for the closed-form family, table
// fallback otherwise. V_r(x,t) = 0 whenever t <= x.
class VrFn {
 public:
  VrFn(Weight v, double r, Interval iv, QuadOptions qo = {})
      : v_(std::move(v)), r_(r), iv_(iv), qo_(qo) {
    if (std::isnan(r_) || r_ <= 0.0 || r_ > 1.0) throw ParamError("V_r requires 0 < r <= 1");
    if (r_ == 1.0) return;
    vpow_ = Weight::power_of(v_, 1.0 / (1.0 - r_));
    direct_ = vpow_.closed_form_integral(1.0);
    if (direct_) return;
    rule_ = gauss_rule(16);
    xs_ = master_partition(iv_, vpow_.piece_breaks());
    prefix_.assign(xs_.size(), 0.0);
    for (std::size_t j = 0; j + 1 < xs_.size(); ++j)
      prefix_[j + 1] =
          prefix_[j] + gl_cell([this](double t) { return vpow_.value(t); }, xs_[j], xs_[j + 1], rule_);
  }

  ExtReal operator()(double x, double t) const {
    if (!(t > x)) return ExtReal(0.0);
    if (r_ == 1.0) return v_.ess_sup(Interval(std::max(x, iv_.a), std::min(t, iv_.b)));
    ExtReal I;
    if (direct_) {
      I = vpow_.integrate(1.0, Interval(x, t), qo_);
    } else if (x < xs_.front() || t > xs_.back()) {
      I = vpow_.integrate(1.0, Interval(x, t), qo_);
    } else {
      double d = anchored(t) - anchored(x);
      I = std::isnan(d) ? ExtReal::infinity() : ExtReal(std::max(0.0, d));
    }
    return cesembed::pow(I, (1.0 - r_) / r_);
  }

 private:
  double anchored(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs_.begin());
    if (j == 0) return 0.0;
    j -= 1;
    if (j + 1 >= xs_.size()) return prefix_.back();
    double part = x == xs_[j] ? 0.0
                              : gl_cell([this](double t) { return vpow_.value(t); }, xs_[j], x, rule_);
    return prefix_[j] + part;
  }

  Weight v_;
  double r_ = 1.0;
  Interval iv_;
  QuadOptions qo_;
  Weight vpow_;
  bool direct_ = true;
  GaussRule rule_;
  std::vector<double> xs_;
  std::vector<double> prefix_;
};

struct Env {
  const CanonicalProblem& c;
  CumFn W, U;
  VrFn Vr;
  Env(const CanonicalProblem& cp, const EvalOptions& eo)
      : c(cp),
        W(cp.w, cp.interval, eo.quad),
        U(cp.u, cp.interval, eo.quad),
        Vr(cp.v, cp.r, cp.interval, eo.quad) {}

  // int_t^x u as U(t) - U(x); falls back to the segment integral when the
  // tails are infinite and the difference is indeterminate.
  ExtReal u_seg(double t, double x, const ExtReal& Ux) const {
    if (!(x > t)) return ExtReal(0.0);
    ExtReal Ut = U(t);
    if (Ut.is_inf() || Ux.is_inf()) {
      if (Ut.is_inf() && !Ux.is_inf()) return ExtReal::infinity();
      return U.seg(t, x);
    }
    double d = Ut.v - Ux.v;
    // The subtraction cancels catastrophically when t is so close to x that
    // the true mass is below the rounding floor of the tail values; recompute
    // the short segment directly in that case.
    if (d < 64.0 * std::numeric_limits<double>::epsilon() * Ut.v) return U.seg(t, x);
    return ExtReal(d);
  }
};

inline void check_common(const CanonicalProblem& c) {
  for (double e : {c.p, c.q})
    if (std::isnan(e) || e <= 0.0 || std::isinf(e))
      throw ParamError("constant evaluation requires 0 < p, q < inf");
  if (std::isnan(c.r) || c.r <= 0.0) throw ParamError("constant evaluation requires r > 0");
  if (c.r > 1.0)
    throw RegimeMisuseError("r > 1: inequality holds only for trivial functions");
  if (!c.hypothesis_ok)
    throw HypothesisError("hypothesis 0 < int_x^b w < inf fails on (a,b)");
}

// Fixed-budget integral of a bounded kernel over (lo,hi): cells geometrically
// graded toward both endpoints, Gauss-Legendre inside each. Used for
// innermost kernels whose endpoints are interior points of the ambient
// interval; no divergence analysis.
template <class F>
inline double light_integral(F&& f, double lo, double hi, int half_cells, int gl_order) {
  if (!(hi > lo)) return 0.0;
  const GaussRule& g = gauss_rule(gl_order);
  const double len = hi - lo;
  std::vector<double> pts;
  pts.reserve(2 * half_cells);
  pts.push_back(lo);
  for (int k = half_cells - 1; k >= 1; --k) pts.push_back(lo + len * std::pow(2.0, -double(k + 1)));
  for (int k = 1; k <= half_cells - 1; ++k) pts.push_back(hi - len * std::pow(2.0, -double(k + 1)));
  pts.push_back(hi);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    double cell = gl_cell(f, pts[i], pts[i + 1], g);
    if (std::isinf(cell)) return kInf;
    acc += cell;
  }
  return acc;
}

// Cache of a positive monotone function of one variable on the master
// partition. Used for C6's innermost integral, which depends only on the
// nested supremum variable. Values interpolate linearly in (chart coordinate,
// log value): power-law growth toward an endpoint is exactly linear in that
// parametrization, so tails of the form (b-y)^-k or (y-a)^m cost nothing.
class SampledFn {
 public:
  template <class F>
  SampledFn(std::vector<double> xs, Interval iv, F&& eval) : xs_(std::move(xs)), iv_(iv) {
    ys_.reserve(xs_.size());
    zs_.reserve(xs_.size());
    for (double x : xs_) {
      ys_.push_back(eval(x));
      zs_.push_back(chart_fwd(x, iv_));
    }
  }

  ExtReal operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const ExtReal &y0 = ys_[j], &y1 = ys_[j + 1];
    if (y0.is_inf() || y1.is_inf()) {
      double mid = 0.5 * (xs_[j] + xs_[j + 1]);
      return x < mid ? y0 : y1;
    }
    double lin = (x - xs_[j]) / (xs_[j + 1] - xs_[j]);
    double z0 = zs_[j], z1 = zs_[j + 1];
    if (y0.is_zero() || y1.is_zero() || !std::isfinite(z0) || !std::isfinite(z1) ||
        !(z1 > z0))
      return ExtReal(y0.v + lin * (y1.v - y0.v));
    double t = (chart_fwd(x, iv_) - z0) / (z1 - z0);
    return ExtReal(std::exp(std::log(y0.v) + t * (std::log(y1.v) - std::log(y0.v))));
  }

 private:
  std::vector<double> xs_;
  Interval iv_;
  std::vector<ExtReal> ys_;
  std::vector<double> zs_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// The seven constants
// ---------------------------------------------------------------------------

// C1 = ess sup_x W(x)^{-1/p} ess sup_{t in (x,b)} U(t)^{1/q} V_r(x,t)
inline ExtReal eval_C1(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  detail::Env E(c, eo);
  SupOptions so = detail::sup_opts(eo);
  const Interval iv = c.interval;
  auto outer = [&](double x) -> double {
    ExtReal wf = pow(E.W(x), -1.0 / c.p);
    if (wf.is_zero()) return 0.0;
    auto inner = [&](double t) -> double { return (pow(E.U(t), 1.0 / c.q) * E.Vr(x, t)).v; };
    ExtReal is = sup_search(inner, Interval(x, iv.b), so).value;
    return (wf * is).v;
  };
  return sup_search(outer, iv, so).value;
}

// C2 = sup_x W(x)^{-1/p} ( int_x^b U^{q/(1-q)} u V_r(x,t)^{q/(1-q)} dt )^{(1-q)/q},  q < 1
inline ExtReal eval_C2(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  if (!(c.q < 1.0)) throw RegimeMisuseError("C2 requires q < 1");
  detail::Env E(c, eo);
  SupOptions so = detail::sup_opts(eo);
  QuadOptions qi = eo.quad;
  qi.refine_rounds = std::min(qi.refine_rounds, 1);
  const double kq = c.q / (1.0 - c.q);
  const Interval iv = c.interval;
  auto brks = detail::merged_breaks({&c.u, &c.v});
  auto outer = [&](double x) -> double {
    ExtReal wf = pow(E.W(x), -1.0 / c.p);
    if (wf.is_zero()) return 0.0;
    auto g = [&](double t) -> double {
      return (pow(E.U(t), kq) * ExtReal(c.u.value(t)) * pow(E.Vr(x, t), kq)).v;
    };
    ExtReal J = integrate_fn(g, Interval(x, iv.b), brks, qi);
    return (wf * pow(J, (1.0 - c.q) / c.q)).v;
  };
  return sup_search(outer, iv, so).value;
}

// C3 = sup_x U(x)^{1/q} ( int_a^x W^{-p/(p-r)} w V_r(t,x)^{pr/(p-r)} dt )^{(p-r)/(pr)},  r < p
inline ExtReal eval_C3(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  if (!(c.r < c.p)) throw RegimeMisuseError("C3 requires r < p");
  detail::Env E(c, eo);
  SupOptions so = detail::sup_opts(eo);
  QuadOptions qi = eo.quad;
  qi.refine_rounds = std::min(qi.refine_rounds, 1);
  const double sb = c.p / (c.p - c.r);
  const double mb = c.p * c.r / (c.p - c.r);
  const Interval iv = c.interval;
  auto brks = detail::merged_breaks({&c.w, &c.v});
  auto outer = [&](double x) -> double {
    ExtReal uf = pow(E.U(x), 1.0 / c.q);
    if (uf.is_zero()) return 0.0;
    auto g = [&](double t) -> double {
      return (pow(E.W(t), -sb) * ExtReal(c.w.value(t)) * pow(E.Vr(t, x), mb)).v;
    };
    ExtReal K = integrate_fn(g, Interval(iv.a, x), brks, qi);
    return (uf * pow(K, (c.p - c.r) / (c.p * c.r))).v;
  };
  return sup_search(outer, iv, so).value;
}

// C4 = ( int_a^b U^{q/(p-q)} u . ess sup_{t<x} W(t)^{-q/(p-q)} V_r(t,x)^{pq/(p-q)} dx )^{(p-q)/(pq)},  q < p
inline ExtReal eval_C4(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  if (!(c.q < c.p)) throw RegimeMisuseError("C4 requires q < p");
  detail::Env E(c, eo);
  SupOptions so = detail::sup_opts(eo);
  const double kp = c.q / (c.p - c.q);
  const Interval iv = c.interval;
  auto brks = detail::merged_breaks({&c.u, &c.w, &c.v});
  auto integrand = [&](double x) -> double {
    ExtReal lead = pow(E.U(x), kp) * ExtReal(c.u.value(x));
    if (lead.is_zero()) return 0.0;
    auto inner = [&](double t) -> double {
      return (pow(E.W(t), -kp) * pow(E.Vr(t, x), c.p * kp)).v;
    };
    ExtReal S = sup_search(inner, Interval(iv.a, x), so).value;
    return (lead * S).v;
  };
  ExtReal acc = integrate_fn(integrand, iv, brks, eo.quad);
  return pow(acc, (c.p - c.q) / (c.p * c.q));
}

// C5 = ( int_a^b w(x) sup_{y<x} W(y)^{-p/(p-q)}
//        ( int_y^x (U(t)-U(x))^{q/(1-q)} u(t) V_r(y,t)^{q/(1-q)} dt )^{p(1-q)/(p-q)} dx )^{(p-q)/(pq)}
// for q < 1, q < p; the inner u-tail int_t^x u = U(t)-U(x) is exact.
inline ExtReal eval_C5(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  if (!(c.q < 1.0)) throw RegimeMisuseError("C5 requires q < 1");
  if (!(c.q < c.p)) throw RegimeMisuseError("C5 requires q < p");
  detail::Env E(c, eo);
  SupOptions so = detail::sup_opts_inner(eo);
  const double kq = c.q / (1.0 - c.q);
  const double emid = c.p * (1.0 - c.q) / (c.p - c.q);
  const double spw = c.p / (c.p - c.q);
  const Interval iv = c.interval;
  auto brks = detail::merged_breaks({&c.u, &c.w, &c.v});
  QuadOptions qo = eo.quad;
  qo.refine_rounds = std::min(qo.refine_rounds, 1);
  qo.gl_order = std::min(qo.gl_order, 8);
  auto integrand = [&](double x) -> double {
    double wx = c.w.value(x);
    if (wx == 0.0) return 0.0;
    ExtReal Ux = E.U(x);
    auto inner = [&](double y) -> double {
      ExtReal wf = pow(E.W(y), -spw);
      if (wf.is_zero()) return 0.0;
      auto h = [&](double t) -> double {
        return (pow(E.u_seg(t, x, Ux), kq) * ExtReal(c.u.value(t)) * pow(E.Vr(y, t), kq)).v;
      };
      double T = detail::light_integral(h, y, x, eo.kernel_half_cells, eo.kernel_gl);
      ExtReal Te = std::isinf(T) ? ExtReal::infinity() : ExtReal(T);
      return (wf * pow(Te, emid)).v;
    };
    ExtReal S = sup_search(inner, Interval(iv.a, x), so).value;
    return (ExtReal(wx) * S).v;
  };
  ExtReal acc = integrate_fn(integrand, iv, brks, qo);
  return pow(acc, (c.p - c.q) / (c.p * c.q));
}

// C6 = ( int_a^b w(x) ess sup_{y<x} [ W(y)^{-1}
//          . int_y^x U^{q/(p-q)} u dt
//          . ( int_a^y W^{-p/(p-r)} w V_r(t,y)^{pr/(p-r)} dt )^{(p-r)q/((p-q)r)} ] dx )^{(p-q)/(pq)}
// for r < p, q < p. The middle factor has the exact closed form
// (U(y)^{p/(p-q)} - U(x)^{p/(p-q)}) . (p-q)/p; the third depends on y alone
// and is cached on the master partition.
inline ExtReal eval_C6(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  if (!(c.r < c.p)) throw RegimeMisuseError("C6 requires r < p");
  if (!(c.q < c.p)) throw RegimeMisuseError("C6 requires q < p");
  detail::Env E(c, eo);
  SupOptions so = detail::sup_opts(eo);
  const double kp1 = c.p / (c.p - c.q);  // q/(p-q) + 1
  const double sb = c.p / (c.p - c.r);
  const double mb = c.p * c.r / (c.p - c.r);
  const double e3 = (c.p - c.r) * c.q / ((c.p - c.q) * c.r);
  const Interval iv = c.interval;
  auto brks = detail::merged_breaks({&c.u, &c.w, &c.v});
  auto brks_wv = detail::merged_breaks({&c.w, &c.v});

  QuadOptions q0 = eo.quad;
  q0.refine_rounds = 0;
  detail::SampledFn I2(
      detail::master_partition(iv, brks_wv,
                               eo.cache_nodes_hint > 0 ? eo.cache_nodes_hint : 44),
      iv, [&](double y) -> ExtReal {
        auto g = [&](double t) -> double {
          return (pow(E.W(t), -sb) * ExtReal(c.w.value(t)) * pow(E.Vr(t, y), mb)).v;
        };
        if (!(y > iv.a)) return ExtReal(0.0);
        return integrate_fn(g, Interval(iv.a, y), brks_wv, q0);
      });

  auto mid = [&](double y, double x) -> ExtReal {
    ExtReal Uy = E.U(y), Ux = E.U(x);
    if (Uy.is_inf() || Ux.is_inf()) {
      if (!Uy.is_inf()) return ExtReal(0.0);
      return E.U.seg(y, x) > ExtReal(0.0) ? ExtReal::infinity() : ExtReal(0.0);
    }
    double d = std::pow(Uy.v, kp1) - std::pow(Ux.v, kp1);
    return ExtReal(std::max(0.0, d) / kp1);
  };

  auto integrand = [&](double x) -> double {
    double wx = c.w.value(x);
    if (wx == 0.0) return 0.0;
    auto inner = [&](double y) -> double {
      ExtReal wf = pow(E.W(y), -1.0);
      if (wf.is_zero()) return 0.0;
      return (wf * mid(y, x) * pow(I2(y), e3)).v;
    };
    ExtReal S = sup_search(inner, Interval(iv.a, x), so).value;
    return (ExtReal(wx) * S).v;
  };
  ExtReal acc = integrate_fn(integrand, iv, brks, eo.quad);
  return pow(acc, (c.p - c.q) / (c.p * c.q));
}

// C7 = ( int_a^b w(x) ess sup_{y<x} W(y)^{-p/(p-q)}
//          ess sup_{t in (y,x)} (U(t)-U(x))^{p/(p-q)} V_r(y,t)^{pq/(p-q)} dx )^{(p-q)/(pq)}
// for q >= 1, q < p; int_t^x u = U(t)-U(x) is exact.
inline ExtReal eval_C7(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  if (!(c.q >= 1.0)) throw RegimeMisuseError("C7 requires q >= 1");
  if (!(c.q < c.p)) throw RegimeMisuseError("C7 requires q < p");
  detail::Env E(c, eo);
  SupOptions so = detail::sup_opts_inner(eo);
  SupOptions soi = detail::sup_opts_innermost(eo);
  const double sp = c.p / (c.p - c.q);
  const double mq = c.p * c.q / (c.p - c.q);
  const Interval iv = c.interval;
  auto brks = detail::merged_breaks({&c.u, &c.w, &c.v});
  QuadOptions qo = eo.quad;
  qo.refine_rounds = std::min(qo.refine_rounds, 1);
  qo.gl_order = std::min(qo.gl_order, 8);
  auto integrand = [&](double x) -> double {
    double wx = c.w.value(x);
    if (wx == 0.0) return 0.0;
    ExtReal Ux = E.U(x);
    auto inner = [&](double y) -> double {
      ExtReal wf = pow(E.W(y), -sp);
      if (wf.is_zero()) return 0.0;
      auto h = [&](double t) -> double {
        return (pow(E.u_seg(t, x, Ux), sp) * pow(E.Vr(y, t), mq)).v;
      };
      ExtReal T = sup_search(h, Interval(y, x), soi).value;
      return (wf * T).v;
    };
    ExtReal S = sup_search(inner, Interval(iv.a, x), so).value;
    return (ExtReal(wx) * S).v;
  };
  ExtReal acc = integrate_fn(integrand, iv, brks, qo);
  return pow(acc, (c.p - c.q) / (c.p * c.q));
}

// ---------------------------------------------------------------------------
// Verdict
// ---------------------------------------------------------------------------

struct ConstantsReport {
  Regime regime;
  std::map<std::string, ExtReal> values;
  ExtReal estimate{0.0};
  bool finite = true;
};

inline ExtReal eval_constant(int k, const CanonicalProblem& c, const EvalOptions& eo = {}) {
  switch (k) {
    case 1: return eval_C1(c, eo);
    case 2: return eval_C2(c, eo);
    case 3: return eval_C3(c, eo);
    case 4: return eval_C4(c, eo);
    case 5: return eval_C5(c, eo);
    case 6: return eval_C6(c, eo);
    case 7: return eval_C7(c, eo);
  }
  throw ParamError("constant index must be 1..7");
}

// Classifies and evaluates exactly the constants the regime requires; the
// estimate is their sum and finiteness of the embedding is equivalent to all
// of them being finite.
inline ConstantsReport theorem_verdict(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  detail::check_common(c);
  ConstantsReport rep;
  rep.regime = classify_regime(c.p, c.q, c.r);
  ExtReal est(0.0);
  bool fin = true;
  for (int k : rep.regime.required) {
    ExtReal val = eval_constant(k, c, eo);
    rep.values["C" + std::to_string(k)] = val;
    est = est + val;
    fin = fin && val.finite();
  }
  rep.estimate = est;
  rep.finite = fin;
  return rep;
}

// Exact best constant at p = q = r = 1, by interchanging the order of
// integration on both sides: sup_s v(s) U(s) / W(s).
inline ExtReal fubini_constant(const CanonicalProblem& c, const EvalOptions& eo = {}) {
  if (!(c.p == 1.0 && c.q == 1.0 && c.r == 1.0))
    throw ParamError("fubini_constant requires p = q = r = 1");
  if (!c.hypothesis_ok) throw HypothesisError("hypothesis 0 < int_x^b w < inf fails on (a,b)");
  detail::CumFn W(c.w, c.interval, eo.quad), U(c.u, c.interval, eo.quad);
  SupOptions so = detail::sup_opts(eo);
  auto f = [&](double s) -> double { return (ExtReal(c.v.value(s)) * (U(s) / W(s))).v; };
  return sup_search(f, c.interval, so).value;
}

}  // namespace cesembed
