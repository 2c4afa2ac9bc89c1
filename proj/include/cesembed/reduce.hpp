#pragma once

// Rewrites of embedding problems into the canonical weighted inequality
//
//   ( int_a^b ( int_a^t g^r v )^{q/r} u dt )^{1/q}
//       <= C ( int_a^b ( int_a^t g )^p w dt )^{1/p},
//
// where the weights now enter to the first power. An embedding X -> Y asserts
// ||f||_Y <= c ||f||_X; source = X, target = Y.

#include <cmath>
#include <optional>
#include <string>

#include "cesembed/errors.hpp"
#include "cesembed/funcspace.hpp"
#include "cesembed/interval.hpp"
#include "cesembed/weights.hpp"

namespace cesembed {

struct EmbeddingProblem {
  SpaceSpec source;
  SpaceSpec target;
};

inline void require_same_interval(const EmbeddingProblem& e) {
  if (!(e.source.interval == e.target.interval))
    throw ParamError("embedding requires both spaces on the same interval");
}

// Canonical data. p1 is the exponent link: if c is the best constant of the
// original embedding and C of the canonical inequality, then c^{p1} = C.
struct CanonicalProblem {
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;
  Weight u;
  Weight v;
  Weight w;
  Interval interval{0.0, 1.0};
  double p1 = 1.0;
  bool hypothesis_ok = true;  // 0 < int_x^b w < inf for every interior x
};

// Hypothesis of the two-sided estimates: 0 < int_x^b w < inf for all x in
// (a,b). W is decreasing, so finiteness is probed just above a (which also
// catches interior non-integrable singularities) and positivity just below b.
inline bool canonical_hypothesis_holds(const Weight& w, Interval iv) {
  double scale = iv.bounded() ? iv.length() : std::max(1.0, iv.a);
  double x0 = iv.a + 1e-6 * scale;
  if (!w.integrate(1.0, Interval(x0, iv.b)).finite()) return false;
  Interval probe{0.0, 1.0};
  if (iv.bounded()) {
    double lo = iv.b - 0.25 * iv.length();
    for (double br : w.piece_breaks())
      if (br < iv.b) lo = std::max(lo, br);
    probe = Interval(std::max(lo, 0.5 * (iv.a + iv.b)), iv.b);
  } else {
    double t = 2.0 * std::max(1.0, iv.a);
    for (double br : w.piece_breaks()) t = std::max(t, 2.0 * br);
    probe = Interval(t, 2.0 * t);
  }
  return !w.ae_zero(probe);
}

inline CanonicalProblem canonicalize(const EmbeddingProblem& e) {
  require_same_interval(e);
  if (e.source.kind != SpaceKind::ces || e.target.kind != SpaceKind::ces)
    throw ParamError("canonicalize requires a ces -> ces embedding");
  const double p1 = e.source.p, q1 = e.source.q;
  const double p2 = e.target.p, q2 = e.target.q;
  for (double ex : {p1, q1, p2, q2})
    if (!(ex > 0.0) || std::isinf(ex))
      throw ParamError("canonicalize requires finite positive exponents");

  CanonicalProblem c;
  c.r = p2 / p1;
  c.q = q2 / p1;
  c.p = q1 / p1;
  c.u = Weight::power_of(e.target.u, q2).simplified();
  c.v = Weight::product(Weight::power_of(e.source.v, -p2),
                        Weight::power_of(e.target.v, p2))
            .simplified();
  c.w = Weight::power_of(e.source.u, q1).simplified();
  c.interval = e.source.interval;
  c.p1 = p1;
  c.hypothesis_ok = canonical_hypothesis_holds(c.w, c.interval);
  return c;
}

// Change of variables turning tail-integral spaces into head-integral ones:
// reflection t -> a+b-t for b < inf, inversion t -> a + 1/(t-a) for b = inf.
// Kinds flip (cop<->ces on each side). For the inversion each side picks up
// Jacobian factors (t-a)^{-2/q_i} on u_i and (t-a)^{-2/p_i} on v_i, so that
// the norm of f in the old space equals the norm of f composed with the
// substitution in the new one.
inline EmbeddingProblem tilde_transform(const EmbeddingProblem& e) {
  require_same_interval(e);
  const bool cop_cop = e.source.kind == SpaceKind::cop && e.target.kind == SpaceKind::cop;
  const bool ces_cop = e.source.kind == SpaceKind::ces && e.target.kind == SpaceKind::cop;
  if (!cop_cop && !ces_cop)
    throw ParamError("tilde_transform applies to cop->cop or ces->cop embeddings");
  const Interval iv = e.source.interval;

  auto flip = [](SpaceKind k) {
    return k == SpaceKind::cop ? SpaceKind::ces : SpaceKind::cop;
  };

  EmbeddingProblem out = e;
  out.source.kind = flip(e.source.kind);
  out.target.kind = flip(e.target.kind);

  if (iv.bounded()) {
    const double s = iv.a + iv.b;
    out.source.u = Weight::reflect(e.source.u, s);
    out.source.v = Weight::reflect(e.source.v, s);
    out.target.u = Weight::reflect(e.target.u, s);
    out.target.v = Weight::reflect(e.target.v, s);
    return out;
  }

  auto transform = [&](const Weight& w, double expnt, const char* what) {
    auto inv = w.invert_about(iv.a);
    if (!inv)
      throw UnsupportedWeightError(std::string("tilde_transform: ") + what +
                                   " leaves the closed-form family under inversion");
    return Weight::product(Weight::power_at(iv.a, +1, -2.0 / expnt), *inv).simplified();
  };
  out.source.u = transform(e.source.u, e.source.q, "u1");
  out.source.v = transform(e.source.v, e.source.p, "v1");
  out.target.u = transform(e.target.u, e.target.q, "u2");
  out.target.v = transform(e.target.v, e.target.p, "v2");
  return out;
}

// Multiplication operator f -> g f from X to Y has norm equal to the optimal
// constant of X -> Y_g, where Y_g carries inner weight v2 * g.
inline EmbeddingProblem multiplier_to_embedding(const EmbeddingProblem& base, const Weight& g) {
  EmbeddingProblem out = base;
  out.target.v = Weight::product(base.target.v, g).simplified();
  return out;
}

// p = q collapses a ces/cop side to a weighted Lebesgue space. The reduced
// problem is handed to the oracle only; no two-sided estimates are attempted
// for Lebesgue <-> ces/cop embeddings here.
inline std::optional<EmbeddingProblem> detect_degenerate(const EmbeddingProblem& e) {
  auto collapse = [](const SpaceSpec& s) -> std::optional<SpaceSpec> {
    if (s.kind == SpaceKind::leb || s.p != s.q || std::isinf(s.p)) return std::nullopt;
    SpaceSpec out;
    out.kind = SpaceKind::leb;
    out.p = s.p;
    out.q = s.p;
    out.v = pp_weight(s);
    out.u = Weight::constant(1.0);
    out.interval = s.interval;
    return out;
  };
  auto src = collapse(e.source);
  auto tgt = collapse(e.target);
  if (!src && !tgt) return std::nullopt;
  EmbeddingProblem out = e;
  if (src) out.source = *src;
  if (tgt) out.target = *tgt;
  return out;
}

struct TrivialityVerdict {
  bool trivial = false;
  std::string message;
};

inline TrivialityVerdict triviality_check(const CanonicalProblem& c) {
  if (c.r > 1.0)
    return {true, "inequality holds only for f = 0 a.e. (r > 1)"};
  return {false, {}};
}

}  // namespace cesembed
