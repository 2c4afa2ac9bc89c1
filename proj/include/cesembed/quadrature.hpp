#pragma once

// Numeric plumbing shared by the norm, bound and oracle evaluators:
//   * Gauss-Legendre rules (nodes computed once by Newton iteration),
//   * integrate_fn: improper integrals over geometrically graded cells with
//     power-tail extrapolation and growth-based divergence detection,
//   * sup_search: log-uniform sampling plus golden-section refinement, again
//     with growth-based divergence detection toward open endpoints.
//
// All adaptive decisions are made through *relative* comparisons, so every
// routine here commutes exactly with rescaling the integrand or objective.
// The bound evaluators rely on that to reproduce scaling laws to high
// precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "cesembed/errors.hpp"
#include "cesembed/extreal.hpp"
#include "cesembed/interval.hpp"

namespace cesembed {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Gauss-Legendre rules
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Roots of the Legendre polynomial P_n by Newton iteration from the Chebyshev
// initial guess. Deterministic and accurate to ~1 ulp for the orders used here.
inline GaussRule make_gauss_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

inline const GaussRule& gauss_rule(int order) {
  static const GaussRule g8 = make_gauss_rule(8);
  static const GaussRule g16 = make_gauss_rule(16);
  static const GaussRule g32 = make_gauss_rule(32);
  if (order <= 8) return g8;
  if (order <= 16) return g16;
  return g32;
}

// ---------------------------------------------------------------------------
// integrate_fn
// ---------------------------------------------------------------------------

struct QuadOptions {
  double rel_tol = 1e-10;    // target relative accuracy
  double floor_rel = 1e-14;  // smallest graded offset, relative to scale
  double grow = 4.0;         // geometric cell growth away from endpoints
  double inf_span = 1e16;    // largest offset covered on an unbounded side
  double div_ratio = 0.999;  // cell-ratio threshold classifying divergence
  int gl_order = 16;
  int refine_rounds = 2;
};

namespace detail {

inline double gl_cell(const std::function<double(double)>& f, double lo, double hi,
                      const GaussRule& g) {
  double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double v = f(c + h * g.nodes[i]);
    if (std::isnan(v)) throw Error("integrand evaluated to NaN");
    s += g.weights[i] * v;
  }
  return s * h;
}

// Contribution ratios walking toward an endpoint. Divergence (including the
// borderline logarithmic case) shows up as ratios pinned at or above 1; a
// convergent power tail gives a stable geometric ratio < 1 that we use to
// extrapolate the remainder below the grading floor.
struct TailVerdict {
  bool divergent = false;
  double extrapolated = 0.0;
};

inline TailVerdict analyze_tail(const std::vector<double>& toward_end, double div_ratio) {
  TailVerdict out;
  std::size_t m = toward_end.size();
  if (m < 5) return out;
  double prev = toward_end[m - 5];
  bool all_high = prev > 0.0;
  std::vector<double> ratios;
  for (std::size_t k = m - 4; k < m; ++k) {
    double cur = toward_end[k];
    if (prev <= 0.0 || cur <= 0.0) {
      all_high = false;
      ratios.clear();
      break;
    }
    ratios.push_back(cur / prev);
    prev = cur;
  }
  if (!ratios.empty()) {
    double rmin = *std::min_element(ratios.begin(), ratios.end());
    double rmax = *std::max_element(ratios.begin(), ratios.end());
    if (all_high && rmin >= div_ratio) {
      out.divergent = true;
      return out;
    }
    // geometric tail completion
    if (rmax < div_ratio && rmax / rmin < 1.02 && rmax > 0.05) {
      double rho = ratios.back();
      out.extrapolated = toward_end[m - 1] * rho / (1.0 - rho);
    }
  }
  return out;
}

}  // namespace detail

// Integral of `f` over `iv`, splitting at `breaks` and grading geometrically
// toward both endpoints (and toward infinity when iv is unbounded). Returns
// +inf when the tail analysis classifies the integral as divergent.
inline ExtReal integrate_fn(const std::function<double(double)>& f, Interval iv,
                            std::vector<double> breaks = {}, QuadOptions opts = {}) {
  const GaussRule& g = gauss_rule(opts.gl_order);
  const double len = iv.bounded() ? iv.length() : std::max(1.0, iv.a);
  const double floor_off = len * opts.floor_rel;

  // Assemble the cell boundaries.
  std::vector<double> pts;
  auto push_fan = [&](double from, double upto, bool offsets_up) {
    // geometric offsets from `from` of magnitude floor_off * grow^k, capped at |upto-from|
    double span = std::abs(upto - from);
    for (double d = floor_off; d < span; d *= opts.grow)
      pts.push_back(offsets_up ? from + d : from - d);
  };
  pts.push_back(iv.a + floor_off);
  if (iv.bounded()) {
    double mid = 0.5 * (iv.a + iv.b);
    push_fan(iv.a, mid, true);
    push_fan(iv.b, mid, false);
    pts.push_back(iv.b - floor_off);
  } else {
    push_fan(iv.a, iv.a + len, true);
    for (double d = len; d < len * opts.inf_span; d *= opts.grow) pts.push_back(iv.a + d);
    pts.push_back(iv.a + len * opts.inf_span);
  }
  for (double b : breaks)
    if (b > iv.a + floor_off && (!iv.bounded() ? true : b < iv.b - floor_off) && iv.contains(b))
      pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double x, double y) { return std::abs(x - y) <= 1e-15 * len; }),
            pts.end());

  struct Cell {
    double lo, hi, val;
  };
  std::vector<Cell> cells;
  cells.reserve(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double v = detail::gl_cell(f, pts[i], pts[i + 1], g);
    if (std::isinf(v)) return ExtReal::infinity();
    cells.push_back({pts[i], pts[i + 1], v});
  }
  if (cells.empty()) return ExtReal(0.0);

  // Refinement: split cells whose halved estimate moves the total.
  for (int round = 0; round < opts.refine_rounds; ++round) {
    double total = 0.0;
    for (auto& c : cells) total += std::abs(c.val);
    if (total == 0.0) break;
    std::vector<Cell> next;
    next.reserve(cells.size());
    bool changed = false;
    for (auto& c : cells) {
      double m = 0.5 * (c.lo + c.hi);
      double v1 = detail::gl_cell(f, c.lo, m, g);
      double v2 = detail::gl_cell(f, m, c.hi, g);
      if (std::isinf(v1) || std::isinf(v2)) return ExtReal::infinity();
      if (std::abs(v1 + v2 - c.val) > opts.rel_tol * total) {
        next.push_back({c.lo, m, v1});
        next.push_back({m, c.hi, v2});
        changed = true;
      } else {
        c.val = v1 + v2;
        next.push_back(c);
      }
    }
    cells.swap(next);
    if (!changed) break;
  }

  // Tail analysis toward each graded endpoint.
  std::vector<double> toward_a, toward_b;
  for (std::size_t i = std::min<std::size_t>(cells.size(), 8); i-- > 0;)
    toward_a.push_back(cells[i].val);
  for (std::size_t i = cells.size() >= 8 ? cells.size() - 8 : 0; i < cells.size(); ++i)
    toward_b.push_back(cells[i].val);

  auto va = detail::analyze_tail(toward_a, opts.div_ratio);
  auto vb = detail::analyze_tail(toward_b, opts.div_ratio);
  if (va.divergent || vb.divergent) return ExtReal::infinity();

  double sum = va.extrapolated + vb.extrapolated;
  double comp = 0.0;  // Neumaier compensation
  for (auto& c : cells) {
    double t = sum + c.val;
    comp += (std::abs(sum) >= std::abs(c.val)) ? (sum - t) + c.val : (c.val - t) + sum;
    sum = t;
  }
  sum += comp;
  if (sum < 0.0 && sum > -1e-12) sum = 0.0;  // roundoff guard: integrands are >= 0
  return ExtReal(std::max(sum, 0.0));
}

// ---------------------------------------------------------------------------
// sup_search
// ---------------------------------------------------------------------------

struct SupOptions {
  int n = 256;               // log-uniform samples
  double tau = 1e-8;         // relative refinement tolerance
  double floor_rel = 1e-12;  // closest sampled offset, relative to scale
  double inf_span = 1e12;    // largest sampled offset on an unbounded side
  double div_growth = 10.0;  // growth across the boundary decade => +inf
  double hard_cap = 1e150;   // values beyond this are reported as +inf
  int brackets = 3;          // local maxima refined by golden section
};

struct SupResult {
  ExtReal value{0.0};
  double arg = 0.0;
};

namespace detail {

// Monotone chart used for golden-section refinement: finite intervals use the
// logit-type coordinate log((x-a)/(b-x)), unbounded ones log(x-a).
inline double chart_fwd(double x, const Interval& iv) {
  return iv.bounded() ? std::log((x - iv.a) / (iv.b - x)) : std::log(x - iv.a);
}
inline double chart_inv(double z, const Interval& iv) {
  if (!iv.bounded()) return iv.a + std::exp(z);
  double e = std::exp(z);
  return (iv.a + iv.b * e) / (1.0 + e);
}

}  // namespace detail

// Supremum of `f` over `iv` by log-uniform sampling toward both open endpoints
// plus golden refinement around the best local maxima. Persistent growth into
// an endpoint is classified as an infinite supremum.
inline SupResult sup_search(const std::function<double(double)>& f, Interval iv,
                            SupOptions opts = {}) {
  const double len = iv.bounded() ? iv.length() : std::max(1.0, iv.a);
  const double lo_off = len * opts.floor_rel;

  std::vector<double> xs;
  xs.reserve(opts.n + 2);
  int half = opts.n / 2;
  if (iv.bounded()) {
    double hi_off = 0.5 * len;
    double ratio = std::pow(hi_off / lo_off, 1.0 / (half - 1));
    double d = lo_off;
    for (int i = 0; i < half; ++i, d *= ratio) {
      xs.push_back(iv.a + d);
      xs.push_back(iv.b - d);
    }
  } else {
    double hi_off = len * opts.inf_span;
    double ratio = std::pow(hi_off / lo_off, 1.0 / (opts.n - 1));
    double d = lo_off;
    for (int i = 0; i < opts.n; ++i, d *= ratio) xs.push_back(iv.a + d);
  }
  // Keep every sample strictly inside the open interval: for very short
  // intervals the graded offsets can round onto the endpoints themselves.
  const double lo_in = std::nextafter(iv.a, kInf);
  const double hi_in = iv.bounded() ? std::nextafter(iv.b, -kInf) : kInf;
  if (lo_in > hi_in) {
    double m = iv.a;
    double y = f(m);
    return {std::isinf(y) ? ExtReal::infinity() : ExtReal(std::max(y, 0.0)), m};
  }
  for (double& x : xs) x = std::min(std::max(x, lo_in), hi_in);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double y = f(xs[i]);
    if (std::isnan(y)) throw Error("sup_search objective evaluated to NaN");
    if (std::isinf(y) || y > opts.hard_cap) return {ExtReal::infinity(), xs[i]};
    ys[i] = y;
  }

  std::size_t ibest = std::max_element(ys.begin(), ys.end()) - ys.begin();

  // Divergence into an endpoint, two tests. (a) The global max sits on the
  // outermost samples and keeps growing by >= div_growth across the final
  // stretch; catches steep blow-ups outright. (b) When the max sits exactly
  // on a boundary sample, zoom: re-evaluate at geometrically closer offsets
  // (bounded side) or geometrically larger abscissas (infinite side). A
  // genuine divergence keeps multiplying under every zoom step, an attained
  // supremum stalls at once. (b) is what catches slow power growth such as
  // x^-1 or x^-2, whose rise across the sampling window alone stays under
  // div_growth.
  auto window_grows = [&](bool left) -> bool {
    const std::size_t k = 6;
    if (xs.size() < k + 2) return false;
    std::size_t edge = left ? 0 : xs.size() - 1;
    if (ibest != edge && (left ? ibest > 2 : ibest + 3 < xs.size())) return false;
    double inner = left ? ys[k - 1] : ys[xs.size() - k];
    double outer = ys[edge];
    if (inner <= 0.0) return false;
    // Strict growth at every step: rounding noise produces staircases with
    // flat plateaus, genuine blow-up on log-spaced samples never does.
    for (std::size_t j = 1; j < k; ++j) {
      std::size_t cur = left ? k - 1 - j : xs.size() - k + j;
      std::size_t prv = left ? cur + 1 : cur - 1;
      if (ys[cur] <= ys[prv]) return false;
    }
    return outer / inner >= opts.div_growth;
  };
  if (window_grows(true)) return {ExtReal::infinity(), xs.front()};
  if (window_grows(false)) return {ExtReal::infinity(), xs.back()};

  // The probe must survive every zoom step before it may call the supremum
  // infinite: a finite limit that merely sits closer to the endpoint than the
  // sampling floor (so the edge sample underestimates it) grows for the first
  // step or two and then stalls, while genuine blow-up keeps multiplying over
  // all five steps, i.e. across ten more orders of magnitude in distance.
  double probe_best = 0.0, probe_arg = xs[ibest];
  auto zoom_diverges = [&](bool left, double& where) -> bool {
    std::size_t edge = left ? 0 : xs.size() - 1;
    if (ibest != edge) return false;
    double y = ys[edge];
    if (!(y > 0.0)) return false;
    double x = xs[edge];
    const int steps = 5;
    for (int j = 0; j < steps; ++j) {
      double nx;
      if (!left && !iv.bounded()) {
        nx = x * 100.0;
        if (!(nx < 1e300)) return false;
      } else {
        double anchor = left ? iv.a : iv.b;
        double d = (left ? x - anchor : anchor - x) * 0.01;
        nx = left ? anchor + d : anchor - d;
        if (!(left ? (nx > anchor && nx < x) : (nx < anchor && nx > x))) return false;
      }
      double ny = f(nx);
      if (std::isnan(ny)) return false;
      if (std::isinf(ny) || ny > opts.hard_cap) {
        where = nx;
        return true;
      }
      if (ny > probe_best) {
        probe_best = ny;
        probe_arg = nx;
      }
      if (ny < y * 1.5) return false;  // stalled: a finite limit, not blow-up
      x = nx;
      y = ny;
    }
    if (y / ys[edge] >= opts.div_growth) {
      where = x;
      return true;
    }
    return false;
  };
  double div_at = 0.0;
  if (zoom_diverges(true, div_at)) return {ExtReal::infinity(), div_at};
  if (zoom_diverges(false, div_at)) return {ExtReal::infinity(), div_at};

  // Collect the top local maxima and refine each bracket by golden section in
  // the chart coordinate.
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool up = (i == 0) || ys[i] >= ys[i - 1];
    bool dn = (i + 1 == xs.size()) || ys[i] >= ys[i + 1];
    if (up && dn) cand.push_back(i);
  }
  std::sort(cand.begin(), cand.end(), [&](auto a, auto b) { return ys[a] > ys[b]; });
  const std::size_t keep = static_cast<std::size_t>(std::max(1, opts.brackets));
  if (cand.size() > keep) cand.resize(keep);

  double best = ys[ibest], barg = xs[ibest];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t ci : cand) {
    std::size_t l = ci > 0 ? ci - 1 : ci;
    std::size_t r = ci + 1 < xs.size() ? ci + 1 : ci;
    double zl = detail::chart_fwd(xs[l], iv), zr = detail::chart_fwd(xs[r], iv);
    if (!std::isfinite(zl) || !std::isfinite(zr) || !(zr > zl)) continue;
    double z1 = zr - gr * (zr - zl), z2 = zl + gr * (zr - zl);
    double f1 = f(detail::chart_inv(z1, iv)), f2 = f(detail::chart_inv(z2, iv));
    for (int it = 0; it < 120 && zr - zl > 1e-13; ++it) {
      if (f1 < f2) {
        zl = z1;
        z1 = z2;
        f1 = f2;
        z2 = zl + gr * (zr - zl);
        f2 = f(detail::chart_inv(z2, iv));
      } else {
        zr = z2;
        z2 = z1;
        f2 = f1;
        z1 = zr - gr * (zr - zl);
        f1 = f(detail::chart_inv(z1, iv));
      }
      if (std::isinf(f1) || std::isinf(f2))
        return {ExtReal::infinity(), detail::chart_inv(std::isinf(f1) ? z1 : z2, iv)};
      double cur = std::max(f1, f2);
      if (cur > best) {
        best = cur;
        barg = detail::chart_inv(f1 >= f2 ? z1 : z2, iv);
      }
      if (best > 0 && std::abs(f1 - f2) < opts.tau * best && it > 10) break;
    }
    if (best > opts.hard_cap) return {ExtReal::infinity(), barg};
  }
  if (probe_best > best) {
    best = probe_best;
    barg = probe_arg;
  }
  return {ExtReal(std::max(best, 0.0)), barg};
}

}  // namespace cesembed
