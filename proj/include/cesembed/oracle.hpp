#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cesembed/errors.hpp"
#include "cesembed/extreal.hpp"
#include "cesembed/funcspace.hpp"
#include "cesembed/interval.hpp"
#include "cesembed/quadrature.hpp"
#include "cesembed/reduce.hpp"
#include "cesembed/stepfunc.hpp"
#include "cesembed/weights.hpp"

// Brute-force estimation of the best constant in the canonical inequality
// (and of the original four-weight form) by maximizing the two-sided ratio
// over nonnegative step functions. No regime logic lives here: the oracle is
// the regime-free ground truth the theorem-side evaluation is checked against.

namespace cesembed {

struct OracleConfig {
  int grid_size = 128;                     // cells per ladder rung
  std::vector<Interval> truncation_ladder; // empty => default_ladder(domain)
  int restarts = 16;
  int ascent_iters = 500;
  double growth_factor_infinite = 10.0;    // x10 across rungs, twice => inf
  std::uint64_t seed = 0;
  int gl_order = 8;                        // outer quadrature nodes per cell
  double fd_step = 1e-4;                   // log-space finite-difference step
};

struct LadderRung {
  Interval domain;
  int grid = 0;      // cell count actually used
  double ratio = 0;  // best ratio found on this rung
};

struct OracleResult {
  ExtReal best_ratio{0.0};
  StepFunction argmax;
  std::vector<LadderRung> ladder_trace;
  bool diverging = false;
};

// Sub-domains creeping toward the full interval. Bounded: both endpoints
// approached geometrically (margin shrinks x1024 per rung), so endpoint
// blow-ups reveal themselves as steady growth across rungs. Unbounded: the
// right edge marches out x4 per rung while the finest left cells shrink x4.
inline std::vector<Interval> default_ladder(const Interval& iv) {
  std::vector<Interval> out;
  if (iv.bounded()) {
    const double len = iv.b - iv.a;
    for (int k = 1; k <= 4; ++k) {
      double m = len * std::pow(1024.0, -k);
      out.emplace_back(iv.a + m, iv.b - m);
    }
  } else {
    for (int k = 1; k <= 6; ++k) out.emplace_back(iv.a, iv.a + std::pow(4.0, k));
  }
  return out;
}

namespace detail {

// Breakpoints for one rung: log-graded toward the truncated ends (finest cell
// comparable to the margin, so refinement tracks the ladder), weight
// breakpoints merged in.
inline std::vector<double> oracle_grid(const Interval& dom, const Interval& ambient, int n,
                                       std::initializer_list<const Weight*> ws) {
  const double len = dom.b - dom.a;
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n) + 8);
  g.push_back(dom.a);
  g.push_back(dom.b);
  if (ambient.bounded()) {
    double mlo = std::max(dom.a - ambient.a, len * 1e-13);
    double mhi = std::max(ambient.b - dom.b, len * 1e-13);
    int half = std::max(4, n / 2);
    for (int side = 0; side < 2; ++side) {
      double m = side == 0 ? mlo : mhi;
      double span = len / (2.0 * m);
      if (span <= 1.0) continue;
      for (int j = 0; j < half; ++j) {
        double off = m * std::pow(span, double(j) / half);
        g.push_back(side == 0 ? dom.a + off : dom.b - off);
      }
    }
  } else {
    // dom.a is the genuine endpoint; grade the whole fan from it.
    double off0 = std::min(0.25 * len, 1.0 / len);
    double span = len / off0;
    for (int j = 1; j < n; ++j) g.push_back(dom.a + off0 * std::pow(span, double(j) / n));
  }
  for (const Weight* w : ws)
    for (double b : w->piece_breaks())
      if (b > dom.a && b < dom.b) g.push_back(b);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  // Drop zero-width cells caused by rounding of graded offsets.
  std::vector<double> out;
  out.reserve(g.size());
  for (double x : g)
    if (out.empty() || x > out.back()) out.push_back(x);
  if (out.size() < 3) out = {dom.a, 0.5 * (dom.a + dom.b), dom.b};
  return out;
}

// One side of a ratio, prepared on a fixed grid: t -> (int (inner f^rho
// omega)^{kappa/rho} theta dt)^{1/kappa}, with the inner integral running from
// the left endpoint (Cesaro) or to the right endpoint (Copson). The inner
// cumulative is exact for step f; the outer integral uses per-cell
// Gauss-Legendre with the partial inner masses precomputed at the nodes, so
// one evaluation is O(cells * nodes). Beyond the grid the inner cumulative is
// constant and the outer tail/head integrates in closed form.
class PreparedFunctional {
 public:
  // Lebesgue special case: value = (sum f^rho * mass(omega, cell))^{1/rho}.
  PreparedFunctional(double rho, Weight omega, std::vector<double> grid)
      : rho_(rho), kr_(1.0), kappa_(rho), lebesgue_(true), grid_(std::move(grid)) {
    const std::size_t m = grid_.size() - 1;
    Wm_.resize(m);
    for (std::size_t j = 0; j < m; ++j)
      Wm_[j] = omega.integrate(1.0, Interval(grid_[j], grid_[j + 1])).v;
  }

  PreparedFunctional(double rho, double kappa, const Weight& omega, const Weight& theta,
                     bool copson, std::vector<double> grid, const Interval& ambient,
                     int gl_order)
      : rho_(rho), kr_(kappa / rho), kappa_(kappa), copson_(copson), grid_(std::move(grid)) {
    const std::size_t m = grid_.size() - 1;
    const GaussRule& gr = gauss_rule(gl_order);
    K_ = gr.nodes.size();
    // The rule's nodes are not sorted; the partial masses accumulate left to
    // right, so walk them in ascending order.
    std::vector<std::size_t> ord(K_);
    for (std::size_t k = 0; k < K_; ++k) ord[k] = k;
    std::sort(ord.begin(), ord.end(),
              [&](std::size_t a, std::size_t b) { return gr.nodes[a] < gr.nodes[b]; });
    Wm_.resize(m);
    Pn_.resize(m * K_);
    Th_.resize(m * K_);
    for (std::size_t j = 0; j < m; ++j) {
      double lo = grid_[j], hi = grid_[j + 1], h = 0.5 * (hi - lo), c = 0.5 * (lo + hi);
      Wm_[j] = omega.integrate(1.0, Interval(lo, hi)).v;
      double prev_t = lo, acc = 0.0;
      for (std::size_t k : ord) {
        double t = c + h * gr.nodes[k];
        acc += t > prev_t ? omega.integrate(1.0, Interval(prev_t, t)).v : 0.0;
        prev_t = t;
        // Copson inner runs from t to the cell's right edge.
        Pn_[j * K_ + k] = copson_ ? std::max(0.0, Wm_[j] - acc) : acc;
        double tv = theta.value(t);
        Th_[j * K_ + k] = tv * gr.weights[k] * h;
      }
    }
    // Outside the grid the step function vanishes, so the inner cumulative is
    // frozen at its full value on one side and zero on the other.
    if (copson_) {
      if (grid_.front() > ambient.a)
        edge_ = theta.integrate(1.0, Interval(ambient.a, grid_.front())).v;
    } else {
      if (!ambient.bounded() || grid_.back() < ambient.b)
        edge_ = theta.integrate(1.0, Interval(grid_.back(), ambient.b)).v;
    }
  }

  std::size_t cells() const { return Wm_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  double kappa() const { return kappa_; }

  struct Cache {
    std::vector<double> A;   // inner cumulative at cell boundaries
    std::vector<double> T;   // per-cell outer contribution
    std::vector<double> PS;  // prefix (ces) / suffix (cop) sums of T
    double edge = 0.0;
    double S = 0.0;          // outer integral; +inf when divergent
  };

  // log of the side's value; fills the cache for incremental perturbations.
  double eval(const std::vector<double>& f, Cache& c) const {
    const std::size_t m = Wm_.size();
    if (lebesgue_) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (f[j] == 0.0) continue;
        double term = std::pow(f[j], rho_) * Wm_[j];
        if (std::isinf(term)) { c.S = kInf; return kInf; }
        s += term;
      }
      c.S = s;
      return std::log(s) / rho_;
    }
    c.A.assign(m + 1, 0.0);
    c.T.assign(m, 0.0);
    c.PS.assign(m + 1, 0.0);
    if (copson_) {
      for (std::size_t j = m; j-- > 0;) c.A[j] = c.A[j + 1] + cell_mass(f, j);
    } else {
      for (std::size_t j = 0; j < m; ++j) c.A[j + 1] = c.A[j] + cell_mass(f, j);
    }
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double base = copson_ ? c.A[j + 1] : c.A[j];
      double t = cell_outer(f, j, base);
      c.T[j] = t;
      if (std::isinf(t)) { c.S = kInf; return kInf; }
      s += t;
    }
    if (copson_) {
      for (std::size_t j = m; j-- > 0;) c.PS[j] = c.PS[j + 1] + c.T[j];
      c.edge = c.A[0] > 0.0 ? std::pow(c.A[0], kr_) * edge_ : 0.0;
    } else {
      for (std::size_t j = 0; j < m; ++j) c.PS[j + 1] = c.PS[j] + c.T[j];
      c.edge = c.A[m] > 0.0 ? std::pow(c.A[m], kr_) * edge_ : 0.0;
    }
    if (std::isinf(c.edge)) { c.S = kInf; return kInf; }
    s += c.edge;
    c.S = s;
    return std::log(s) / kappa_;
  }

  // log value with coordinate i replaced by fi, reusing the cache for the
  // unaffected cells. Cost is proportional to the downstream cell count.
  double eval_perturbed(const std::vector<double>& f, const Cache& c, std::size_t i,
                        double fi) const {
    const std::size_t m = Wm_.size();
    if (lebesgue_) {
      double old_t = f[i] > 0.0 ? std::pow(f[i], rho_) * Wm_[i] : 0.0;
      double new_t = fi > 0.0 ? std::pow(fi, rho_) * Wm_[i] : 0.0;
      return std::log(c.S - old_t + new_t) / rho_;
    }
    double delta = mass_of(fi, i) - cell_mass(f, i);
    double s;
    if (copson_) {
      s = c.PS[i + 1];  // cells to the right are untouched
      s += cell_outer_at(i, fi, c.A[i + 1]);
      for (std::size_t j = i; j-- > 0;) {
        double t = cell_outer(f, j, c.A[j + 1] + delta);
        if (std::isinf(t)) return kInf;
        s += t;
      }
      double a0 = c.A[0] + delta;
      s += a0 > 0.0 ? std::pow(a0, kr_) * edge_ : 0.0;
    } else {
      s = c.PS[i];
      s += cell_outer_at(i, fi, c.A[i]);
      for (std::size_t j = i + 1; j < m; ++j) {
        double t = cell_outer(f, j, c.A[j] + delta);
        if (std::isinf(t)) return kInf;
        s += t;
      }
      double am = c.A[m] + delta;
      s += am > 0.0 ? std::pow(am, kr_) * edge_ : 0.0;
    }
    if (std::isinf(s)) return kInf;
    return std::log(s) / kappa_;
  }

 private:
  double mass_of(double fi, std::size_t j) const {
    return fi > 0.0 ? std::pow(fi, rho_) * Wm_[j] : 0.0;
  }
  double cell_mass(const std::vector<double>& f, std::size_t j) const {
    return mass_of(f[j], j);
  }
  double cell_outer(const std::vector<double>& f, std::size_t j, double base) const {
    return cell_outer_at(j, f[j], base);
  }
  double cell_outer_at(std::size_t j, double fj, double base) const {
    double fp = fj > 0.0 ? std::pow(fj, rho_) : 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < K_; ++k) {
      double inner = base + fp * Pn_[j * K_ + k];
      if (inner <= 0.0) continue;
      s += std::pow(inner, kr_) * Th_[j * K_ + k];
    }
    return s;
  }

  double rho_, kr_, kappa_;
  bool copson_ = false, lebesgue_ = false;
  std::vector<double> grid_;
  std::size_t K_ = 0;
  std::vector<double> Wm_, Pn_, Th_;
  double edge_ = 0.0;
};

inline ExtReal side_value(double logv, double) {
  if (std::isinf(logv) && logv > 0) return ExtReal::infinity();
  return ExtReal(std::exp(logv));
}

// log(LHS/RHS); +inf / -inf pass through so callers can classify.
inline double log_ratio(const PreparedFunctional& L, const PreparedFunctional& R,
                        const std::vector<double>& f, PreparedFunctional::Cache& cl,
                        PreparedFunctional::Cache& cr) {
  double a = L.eval(f, cl);
  double b = R.eval(f, cr);
  if (std::isinf(a) && a < 0) return -kInf;  // LHS zero: ratio 0 (covers 0/0)
  if (std::isinf(a) && a > 0) return kInf;
  if (std::isinf(b) && b > 0) return -kInf;  // RHS infinite: ratio 0
  if (std::isinf(b) && b < 0) return kInf;   // RHS zero with LHS mass
  return a - b;
}

inline ExtReal ratio_from_log(double lr) {
  if (std::isnan(lr)) return ExtReal(0.0);
  if (std::isinf(lr)) return lr > 0 ? ExtReal::infinity() : ExtReal(0.0);
  return ExtReal(std::exp(lr));
}

struct OracleRng {
  std::uint64_t s;
  explicit OracleRng(std::uint64_t seed) : s(seed ? seed : 0x9E3779B97F4A7C15ULL) {}
  std::uint64_t next() {  // splitmix64: stable across platforms
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (double(next() >> 11) + 0.5) * 0x1p-53; }
  double normal() {
    double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

// Multiplicative coordinate ascent on log f: f_i <- f_i * exp(eta * g_i) with
// g_i the finite-difference slope of the log ratio; the step is damped on
// failure and the whole vector renormalized each round to keep magnitudes
// tame (the ratio is scale-invariant). Exact zeros never move: the update is
// multiplicative by construction.
inline double ascent(const PreparedFunctional& L, const PreparedFunctional& R,
                     std::vector<double>& f, int iters, double h) {
  const std::size_t m = f.size();
  PreparedFunctional::Cache cl, cr, tl, tr;
  double cur = log_ratio(L, R, f, cl, cr);
  if (!std::isfinite(cur)) return cur;
  double eta = 0.5;
  std::vector<double> g(m, 0.0), trial(m);
  const double eh = std::exp(h);
  int stale = 0;
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      if (f[i] == 0.0) { g[i] = 0.0; continue; }
      double lp = L.eval_perturbed(f, cl, i, f[i] * eh);
      double rp = R.eval_perturbed(f, cr, i, f[i] * eh);
      if (std::isinf(lp) && lp > 0) return kInf;
      double d = (lp - rp) - cur;
      g[i] = std::isfinite(d) ? d / h : 0.0;
    }
    double nxt = -kInf;
    bool accepted = false;
    while (eta >= 1e-7) {
      double mx = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double step = std::clamp(eta * g[i], -2.0, 2.0);
        trial[i] = f[i] * std::exp(step);
        mx = std::max(mx, trial[i]);
      }
      if (mx > 0.0)
        for (double& v : trial) v /= mx;
      nxt = log_ratio(L, R, trial, tl, tr);
      if (std::isinf(nxt) && nxt > 0) { f = trial; return kInf; }
      if (nxt > cur) { accepted = true; break; }
      eta *= 0.5;
    }
    if (!accepted) break;
    stale = nxt - cur < 1e-10 * (std::abs(cur) + 1.0) ? stale + 1 : 0;
    f = trial;
    std::swap(cl, tl);
    std::swap(cr, tr);
    cur = nxt;
    eta *= 1.25;
    if (stale >= 12) break;
  }
  return cur;
}

struct RatioSides {
  PreparedFunctional L, R;
};

// The canonical inequality compares (int (int_a^t f^r v)^{q/r} u)^{1/q}
// against (int (int_a^t f)^p w)^{1/p}; both weights enter to the first power.
inline RatioSides canonical_sides(const CanonicalProblem& c, std::vector<double> grid,
                                  int gl_order) {
  PreparedFunctional L(c.r, c.q, c.v, c.u, false, grid, c.interval, gl_order);
  PreparedFunctional R(1.0, c.p, Weight::constant(1.0), c.w, false, std::move(grid),
                       c.interval, gl_order);
  return {std::move(L), std::move(R)};
}

inline PreparedFunctional space_side(const SpaceSpec& s, const std::vector<double>& grid,
                                     int gl_order) {
  if (s.kind == SpaceKind::leb) return {s.p, Weight::power_of(s.v, s.p).simplified(), grid};
  return {s.p, s.q, Weight::power_of(s.v, s.p).simplified(),
          Weight::power_of(s.u, s.q).simplified(), s.kind == SpaceKind::cop, grid,
          s.interval, gl_order};
}

// chi_{(x,t)} witnesses on grid pairs, plus the V_r extremizer profile
// v^{1/(1-r)} * chi when r < 1. Returns the best log ratio and its function.
inline double witness_pass(const RatioSides& sides, const std::vector<double>& grid,
                           const Weight* vpow, double cap_pairs, std::vector<double>& best_f) {
  const std::size_t m = grid.size() - 1;
  std::vector<double> prof;
  if (vpow) {
    prof.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      double mass = vpow->integrate(1.0, Interval(grid[j], grid[j + 1])).v;
      double len = grid[j + 1] - grid[j];
      prof[j] = std::isfinite(mass) ? mass / len : 0.0;
    }
    double mx = *std::max_element(prof.begin(), prof.end());
    if (mx > 0)
      for (double& v : prof) v /= mx;
  }
  std::size_t total = m * (m + 1) / 2;
  std::size_t stride = 1;
  while (total / (stride * stride) > static_cast<std::size_t>(cap_pairs)) ++stride;
  double best = -kInf;
  std::vector<double> f(m, 0.0);
  PreparedFunctional::Cache cl, cr;
  for (std::size_t i = 0; i < m; i += stride) {
    for (std::size_t j = i + 1; j <= m; j += stride) {
      for (int fam = 0; fam < (vpow ? 2 : 1); ++fam) {
        std::fill(f.begin(), f.end(), 0.0);
        bool nonzero = false;
        for (std::size_t l = i; l < j; ++l) {
          f[l] = fam == 0 ? 1.0 : prof[l];
          nonzero |= f[l] > 0.0;
        }
        if (!nonzero) continue;
        double lr = log_ratio(sides.L, sides.R, f, cl, cr);
        if (lr > best) {
          best = lr;
          best_f = f;
        }
      }
    }
  }
  if (best_f.empty()) best_f.assign(m, 1.0);
  return best;
}

inline OracleResult estimate_over_ladder(const Interval& ambient,
                                         std::initializer_list<const Weight*> ws,
                                         const Weight* vpow, const OracleConfig& cfg,
                                         const std::function<RatioSides(std::vector<double>)>&
                                             make_sides) {
  if (cfg.grid_size < 8) throw ParamError("oracle grid_size must be >= 8");
  std::vector<Interval> ladder =
      cfg.truncation_ladder.empty() ? default_ladder(ambient) : cfg.truncation_ladder;
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (ladder[k].a > ladder[k - 1].a || ladder[k].b < ladder[k - 1].b)
      throw ParamError("truncation ladder must increase by inclusion");

  OracleResult res;
  double prev = -1.0;
  int streak = 0;
  double best_log = -kInf;
  for (std::size_t rung = 0; rung < ladder.size(); ++rung) {
    std::vector<double> grid = oracle_grid(ladder[rung], ambient, cfg.grid_size, ws);
    RatioSides sides = make_sides(grid);
    const std::size_t m = grid.size() - 1;

    std::vector<double> wf;
    double wlr = witness_pass(sides, grid, vpow, 1024.0, wf);
    double rung_best = wlr;
    std::vector<double> rung_f = wf;

    for (int rs = 0; rs < std::max(1, cfg.restarts); ++rs) {
      std::vector<double> f(m);
      if (rs == 0) {
        f = wf;
        double mx = *std::max_element(f.begin(), f.end());
        for (double& v : f) v = std::max(v, 1e-8 * std::max(mx, 1.0));
      } else {
        OracleRng rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (rung * 1000 + rs + 1)));
        for (double& v : f) v = std::exp(1.5 * rng.normal());
      }
      double lr = ascent(sides.L, sides.R, f, cfg.ascent_iters, cfg.fd_step);
      if (lr > rung_best) {
        rung_best = lr;
        rung_f = f;
      }
      if (std::isinf(lr) && lr > 0) break;
    }

    double ratio = std::isinf(rung_best) && rung_best > 0 ? kInf
                   : std::isfinite(rung_best)             ? std::exp(rung_best)
                                                          : 0.0;
    res.ladder_trace.push_back({ladder[rung], static_cast<int>(m), ratio});
    if (rung_best > best_log) {
      best_log = rung_best;
      std::vector<double> vals = rung_f;
      res.argmax = StepFunction(grid, std::move(vals));
    }
    if (std::isinf(ratio)) {
      res.diverging = true;
      break;
    }
    if (prev > 0.0 && ratio / prev >= cfg.growth_factor_infinite) {
      if (++streak >= 2) {
        res.diverging = true;
        prev = ratio;
        break;
      }
    } else if (prev > 0.0) {
      streak = 0;
    }
    prev = ratio;
  }
  res.best_ratio = ratio_from_log(best_log);
  if (res.best_ratio.is_inf()) res.diverging = true;
  return res;
}

}  // namespace detail

// LHS/RHS of the canonical inequality at a concrete step function. The grid
// is the union of f's breakpoints and the weights' structural breakpoints, so
// the inner cumulative integrals are exact.
inline ExtReal ratio(const CanonicalProblem& c, const StepFunction& f) {
  f.validate();
  const Interval iv = c.interval;
  std::vector<double> grid;
  grid.push_back(iv.a);
  for (double b : f.breaks)
    if (b > iv.a && (!iv.bounded() || b < iv.b)) grid.push_back(b);
  if (iv.bounded()) grid.push_back(iv.b);
  for (const Weight* w : {&c.u, &c.v, &c.w})
    for (double b : w->piece_breaks())
      if (b > iv.a && b < grid.back()) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 2) throw DomainError("ratio: f has no support inside the domain");

  const std::size_t m = grid.size() - 1;
  std::vector<double> fv(m);
  bool nonzero = false;
  double mx = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    fv[j] = f.value_at(0.5 * (grid[j] + grid[j + 1]));
    mx = std::max(mx, fv[j]);
    nonzero |= fv[j] > 0.0;
  }
  if (!nonzero) throw DomainError("ratio: undefined for f = 0 a.e.");
  for (double& v : fv) v /= mx;  // scale-invariant; keeps powers in range

  detail::RatioSides sides = detail::canonical_sides(c, grid, 8);
  detail::PreparedFunctional::Cache cl, cr;
  double lr = detail::log_ratio(sides.L, sides.R, fv, cl, cr);
  return detail::ratio_from_log(lr);
}

// Max of the ratio over structured candidates: chi_{(x,t)} for grid pairs
// x < t and, for r < 1, the same windows carrying the profile v^{1/(1-r)}.
// A cheap certified lower bound on the best constant.
inline ExtReal witness_lower_bound(const CanonicalProblem& c, const OracleConfig& cfg = {}) {
  std::vector<Interval> ladder =
      cfg.truncation_ladder.empty() ? default_ladder(c.interval) : cfg.truncation_ladder;
  const Interval dom = ladder.back();
  std::vector<double> grid =
      detail::oracle_grid(dom, c.interval, cfg.grid_size, {&c.u, &c.v, &c.w});
  detail::RatioSides sides = detail::canonical_sides(c, grid, cfg.gl_order);
  std::optional<Weight> vpow;
  if (c.r < 1.0) vpow = Weight::power_of(c.v, 1.0 / (1.0 - c.r)).simplified();
  std::vector<double> best_f;
  double lr = detail::witness_pass(sides, grid, vpow ? &*vpow : nullptr, 4096.0, best_f);
  return detail::ratio_from_log(lr);
}

// Best-constant estimate for the canonical inequality: per ladder rung, seed
// with the witness winner plus random log-normal profiles and run the
// multiplicative ascent; diverging is set when the best ratio grows by the
// configured factor across consecutive rungs twice in a row (or hits inf).
inline OracleResult estimate_best_constant(const CanonicalProblem& c,
                                           const OracleConfig& cfg = {}) {
  std::optional<Weight> vpow;
  if (c.r < 1.0) vpow = Weight::power_of(c.v, 1.0 / (1.0 - c.r)).simplified();
  return detail::estimate_over_ladder(
      c.interval, {&c.u, &c.v, &c.w}, vpow ? &*vpow : nullptr, cfg,
      [&](std::vector<double> grid) { return detail::canonical_sides(c, std::move(grid), cfg.gl_order); });
}

// Same ladder machinery on the original embedding: maximizes
// ||f||_target / ||f||_source over step functions. Works for any pair of
// space kinds with finite exponents (norms themselves, not the canonical
// reduction, are evaluated).
inline OracleResult estimate_original_constant(const EmbeddingProblem& e,
                                               const OracleConfig& cfg = {}) {
  require_same_interval(e);
  for (double ex : {e.source.p, e.source.q, e.target.p, e.target.q})
    if (!std::isfinite(ex) || ex <= 0.0)
      throw ParamError("oracle requires finite positive exponents");
  return detail::estimate_over_ladder(
      e.source.interval, {&e.source.u, &e.source.v, &e.target.u, &e.target.v}, nullptr, cfg,
      [&](std::vector<double> grid) {
        detail::PreparedFunctional L = detail::space_side(e.target, grid, cfg.gl_order);
        detail::PreparedFunctional R = detail::space_side(e.source, grid, cfg.gl_order);
        return detail::RatioSides{std::move(L), std::move(R)};
      });
}

}  // namespace cesembed
