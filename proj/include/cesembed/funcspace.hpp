#pragma once

// Weighted Lebesgue norms and the two-parameter function space norms built
// from them.
//
// For p < inf the inner norm over a subinterval I is
//     ||f||_{p,w,I} = ( int_I |f|^p w^p )^{1/p}
// (the weight enters to the p-th power), and for p = inf it is the essential
// supremum of |f| w over I. A space specification is one of
//     ces: t -> ||f||_{p,v,(a,t)} measured in ||.||_{q,u,(a,b)}
//     cop: t -> ||f||_{p,v,(t,b)} measured in ||.||_{q,u,(a,b)}
//     leb: plain ||f||_{p,v,(a,b)}
// Quasi-norm conditions: ces requires 0 < ||u||_{q,(t,b)} < inf for all
// interior t, cop the mirrored condition at the left endpoint.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cesembed/errors.hpp"
#include "cesembed/extreal.hpp"
#include "cesembed/interval.hpp"
#include "cesembed/quadrature.hpp"
#include "cesembed/stepfunc.hpp"
#include "cesembed/weights.hpp"

namespace cesembed {

enum class SpaceKind { ces, cop, leb };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::ces: return "ces";
    case SpaceKind::cop: return "cop";
    case SpaceKind::leb: return "leb";
  }
  return "?";
}

struct SpaceSpec {
  SpaceKind kind = SpaceKind::ces;
  double p = 1.0;  // inner exponent (the only exponent for leb)
  double q = 1.0;  // outer exponent; unused for leb
  Weight u;        // outer weight; unused for leb
  Weight v;        // inner weight (the Lebesgue weight for leb)
  Interval interval{0.0, 1.0};
};

namespace detail {

inline void require_exponent(double e, const char* name) {
  if (std::isnan(e) || e <= 0.0) throw ParamError(std::string(name) + " must be in (0, inf]");
}

}  // namespace detail

// Throws SpecError naming the failing endpoint when the outer weight violates
// the quasi-norm condition of the space.
inline void validate_quasinorm(const SpaceSpec& s) {
  detail::require_exponent(s.p, "p");
  if (s.kind == SpaceKind::leb) return;
  detail::require_exponent(s.q, "q");
  const Interval& iv = s.interval;
  double mid = iv.bounded() ? 0.5 * (iv.a + iv.b) : iv.a + std::max(1.0, iv.a);

  auto tail_mass = [&](Interval seg) -> ExtReal {
    if (std::isinf(s.q)) return s.u.ess_sup(seg);
    return s.u.integrate(s.q, seg);
  };

  if (s.kind == SpaceKind::ces) {
    if (!tail_mass(Interval(mid, iv.b)).finite())
      throw SpecError("quasi-norm condition fails: ||u|| over (t," +
                      (iv.bounded() ? num_str(iv.b) : std::string("inf")) +
                      ") is infinite (endpoint b)");
    double probe_lo;
    if (iv.bounded()) {
      probe_lo = iv.b - 0.25 * iv.length();
    } else {
      probe_lo = 2.0 * std::max(1.0, mid);
      for (double br : s.u.piece_breaks()) probe_lo = std::max(probe_lo, 2.0 * br);
    }
    Interval probe = iv.bounded() ? Interval(probe_lo, iv.b) : Interval(probe_lo, 2.0 * probe_lo);
    if (s.u.ae_zero(probe))
      throw SpecError("quasi-norm condition fails: ||u|| vanishes near endpoint b");
  } else {
    if (!tail_mass(Interval(iv.a, mid)).finite())
      throw SpecError("quasi-norm condition fails: ||u|| over (" + num_str(iv.a) +
                      ",t) is infinite (endpoint a)");
    double w = iv.bounded() ? 0.25 * iv.length() : 0.25;
    if (s.u.ae_zero(Interval(iv.a, iv.a + w)))
      throw SpecError("quasi-norm condition fails: ||u|| vanishes near endpoint a");
  }
}

// ---------------------------------------------------------------------------
// Weighted Lebesgue norm of a step function over a subinterval.
// ---------------------------------------------------------------------------

inline ExtReal lebesgue_norm(const StepFunction& f, double p, const Weight& w, Interval sub) {
  detail::require_exponent(p, "p");
  f.validate();
  ExtReal acc(0.0);
  bool is_inf_p = std::isinf(p);
  for (std::size_t i = 0; i < f.cells(); ++i) {
    if (f.values[i] == 0.0) continue;
    auto cl = clip(Interval(f.breaks[i], f.breaks[i + 1]), sub.a, sub.b);
    if (!cl.ok) continue;
    if (is_inf_p) {
      acc = max(acc, ExtReal(f.values[i]) * w.ess_sup(cl.iv));
    } else {
      acc = acc + ExtReal(std::pow(f.values[i], p)) * w.integrate(p, cl.iv);
    }
  }
  return is_inf_p ? acc : pow(acc, 1.0 / p);
}

// ---------------------------------------------------------------------------
// space_norm
// ---------------------------------------------------------------------------

namespace detail {

// Inner cumulative mass of f against v^p up to / beyond each break.
struct CellData {
  std::vector<double> pts;    // merged breakpoints covering the support
  std::vector<double> fval;   // f value per cell
  std::vector<ExtReal> mass;  // int_cell v^p (p finite)
};

inline CellData make_cells(const StepFunction& f, const Weight& v, double p) {
  CellData cd;
  cd.pts = f.breaks;
  for (double b : v.piece_breaks())
    if (b > f.breaks.front() && b < f.breaks.back()) cd.pts.push_back(b);
  std::sort(cd.pts.begin(), cd.pts.end());
  cd.pts.erase(std::unique(cd.pts.begin(), cd.pts.end()), cd.pts.end());
  for (std::size_t i = 0; i + 1 < cd.pts.size(); ++i) {
    double m = 0.5 * (cd.pts[i] + cd.pts[i + 1]);
    cd.fval.push_back(f.value_at(m));
    if (!std::isinf(p))
      cd.mass.push_back(v.integrate(p, Interval(cd.pts[i], cd.pts[i + 1])));
  }
  return cd;
}

}  // namespace detail

inline ExtReal space_norm(const StepFunction& f, const SpaceSpec& s) {
  validate_quasinorm(s);
  f.validate();
  const Interval& iv = s.interval;
  if (f.breaks.front() < iv.a - 1e-12 * std::max(1.0, iv.a) ||
      (iv.bounded() && f.breaks.back() > iv.b * (1 + 1e-12) + 1e-300))
    throw SpecError("step function support leaves the space interval");
  if (s.kind == SpaceKind::leb) return lebesgue_norm(f, s.p, s.v, iv);
  if (f.is_zero()) return ExtReal(0.0);

  const bool ces = s.kind == SpaceKind::ces;
  const bool p_inf = std::isinf(s.p);
  const bool q_inf = std::isinf(s.q);

  auto cd = detail::make_cells(f, s.v, s.p);
  const std::size_t m = cd.fval.size();
  const double x0 = cd.pts.front(), xm = cd.pts.back();

  // Inner norm raised to the p-th power (finite p), as a function of t:
  //   ces: G(t) = sum over cells below t;  cop: mass at or above t.
  // For p = inf the inner norm is a running (reversed for cop) max of
  // f * ess sup v.
  std::vector<double> base(m + 1, 0.0);  // base[j]: mass strictly before pts[j] (ces)
  bool inner_infinite = false;
  if (!p_inf) {
    if (ces) {
      for (std::size_t j = 0; j < m; ++j) {
        ExtReal add = ExtReal(std::pow(cd.fval[j], s.p)) * cd.mass[j];
        if (!add.finite()) inner_infinite = true;
        base[j + 1] = base[j] + add.v;
      }
    } else {
      for (std::size_t j = m; j-- > 0;) {
        ExtReal add = ExtReal(std::pow(cd.fval[j], s.p)) * cd.mass[j];
        if (!add.finite()) inner_infinite = true;
        base[j] = base[j + 1] + add.v;
      }
    }
  } else {
    if (ces) {
      double run = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        ExtReal piece = ExtReal(cd.fval[j]) * s.v.ess_sup(Interval(cd.pts[j], cd.pts[j + 1]));
        if (!piece.finite() && cd.fval[j] > 0) inner_infinite = true;
        run = std::max(run, piece.v);
        base[j + 1] = run;
      }
    } else {
      double run = 0.0;
      for (std::size_t j = m; j-- > 0;) {
        ExtReal piece = ExtReal(cd.fval[j]) * s.v.ess_sup(Interval(cd.pts[j], cd.pts[j + 1]));
        if (!piece.finite() && cd.fval[j] > 0) inner_infinite = true;
        run = std::max(run, piece.v);
        base[j] = run;
      }
    }
  }
  if (inner_infinite) return ExtReal::infinity();

  // inner norm (to the 1st power for p = inf, to the p-th power otherwise)
  auto inner_pow = [&](double t) -> double {
    std::size_t j = std::upper_bound(cd.pts.begin(), cd.pts.end(), t) - cd.pts.begin();
    if (j == 0) return ces ? 0.0 : base[0];
    if (j >= cd.pts.size()) return ces ? base[m] : 0.0;
    std::size_t cell = j - 1;
    if (p_inf) {
      if (ces) {
        ExtReal part = ExtReal(cd.fval[cell]) * s.v.ess_sup(Interval(cd.pts[cell], t));
        return std::max(base[cell], part.v);
      }
      ExtReal part = ExtReal(cd.fval[cell]) * s.v.ess_sup(Interval(t, cd.pts[cell + 1]));
      return std::max(base[cell + 1], part.v);
    }
    if (ces) {
      double part = cd.fval[cell] == 0.0
                        ? 0.0
                        : std::pow(cd.fval[cell], s.p) *
                              s.v.integrate(s.p, Interval(cd.pts[cell], t)).v;
      return base[cell] + part;
    }
    double part = cd.fval[cell] == 0.0 ? 0.0
                                       : std::pow(cd.fval[cell], s.p) *
                                             s.v.integrate(s.p, Interval(t, cd.pts[cell + 1])).v;
    return base[cell + 1] + part;
  };
  const double inner_exp = p_inf ? 1.0 : 1.0 / s.p;  // G^inner_exp is the inner norm

  // --- outer essential supremum ---------------------------------------------
  if (q_inf) {
    ExtReal best(0.0);
    auto obj = [&](double t) {
      double g = inner_pow(t);
      double nrm = g == 0.0 ? 0.0 : std::pow(g, inner_exp);
      double uv = s.u.value(t);
      if (nrm == 0.0) return 0.0;
      return std::isinf(uv) ? kInf : nrm * uv;
    };
    // over the support
    SupOptions so;
    so.n = 160;
    best = max(best, sup_search(obj, Interval(x0, xm), so).value);
    // constant-inner segments outside the support
    if (ces && xm < iv.b) {
      ExtReal g = pow(ExtReal(base[m]), inner_exp);
      best = max(best, g * s.u.ess_sup(Interval(xm, iv.b)));
    }
    if (!ces && iv.a < x0) {
      ExtReal g = pow(ExtReal(base[0]), inner_exp);
      best = max(best, g * s.u.ess_sup(Interval(iv.a, x0)));
    }
    return best;
  }

  // --- outer integral ---------------------------------------------------------
  const double kappa = s.q * inner_exp;  // G(t)^kappa is the inner norm to the q-th
  auto integrand = [&](double t) {
    double g = inner_pow(t);
    double uv = s.u.value(t);
    double uq = uv == 0.0 ? 0.0 : std::pow(uv, s.q);
    if (g == 0.0) return 0.0;
    double gp = std::pow(g, kappa);
    if (std::isinf(uq)) return kInf;
    return gp * uq;
  };

  QuadOptions qo;
  qo.refine_rounds = 1;
  ExtReal acc = integrate_fn(integrand, Interval(x0, xm), cd.pts, qo);

  if (ces && xm < iv.b) {
    ExtReal tail = s.u.integrate(s.q, Interval(xm, iv.b));
    acc = acc + pow(ExtReal(base[m]), kappa) * tail;
  }
  if (!ces && iv.a < x0) {
    ExtReal head = s.u.integrate(s.q, Interval(iv.a, x0));
    acc = acc + pow(ExtReal(base[0]), kappa) * head;
  }
  return pow(acc, 1.0 / s.q);
}

// ---------------------------------------------------------------------------
// pp_weight: for p = q the space collapses to a weighted Lebesgue space,
//   ces: w(x) = v(x) * ( int_x^b u^p )^{1/p}
//   cop: w(x) = v(x) * ( int_a^x u^p )^{1/p}
// The norm-tail factor is simplified to a closed-form power when the tail
// integral is itself a pure power (power u with b = inf, resp. head at a).
// ---------------------------------------------------------------------------

inline Weight pp_weight(const SpaceSpec& s) {
  if (s.kind == SpaceKind::leb) throw ParamError("pp_weight: space already Lebesgue");
  if (!(s.p == s.q)) throw ParamError("pp_weight: requires p == q");
  detail::require_exponent(s.p, "p");
  const Interval& iv = s.interval;
  const double p = s.p;
  Weight tailpart;
  bool closed = false;
  if (!std::isinf(p)) {
    if (auto pf = s.u.as_power()) {
      double m = pf->alpha * p;
      if (s.kind == SpaceKind::ces && !iv.bounded() && pf->sign == +1 && m < -1.0) {
        double c = std::pow(pf->coef, p) / (-m - 1.0);
        tailpart = Weight::scaled(std::pow(c, 1.0 / p),
                                  Weight::power_at(pf->center, +1, (m + 1.0) / p));
        closed = true;
      }
      if (s.kind == SpaceKind::cop && pf->sign == +1 && pf->center == iv.a && m > -1.0) {
        double c = std::pow(pf->coef, p) / (m + 1.0);
        tailpart = Weight::scaled(std::pow(c, 1.0 / p),
                                  Weight::power_at(pf->center, +1, (m + 1.0) / p));
        closed = true;
      }
    }
  }
  if (!closed)
    tailpart = s.kind == SpaceKind::ces ? Weight::tail_norm(s.u, p, iv)
                                        : Weight::head_norm(s.u, p, iv);
  return Weight::product(s.v, tailpart).simplified();
}

}  // namespace cesembed
