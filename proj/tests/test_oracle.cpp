#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cesembed/oracle.hpp"
#include "cesembed/reduce.hpp"

using namespace cesembed;

namespace {

CanonicalProblem unit(double p, double q, double r, Interval iv = Interval(0, 1)) {
  CanonicalProblem c;
  c.p = p;
  c.q = q;
  c.r = r;
  c.u = c.v = c.w = Weight::constant(1.0);
  c.interval = iv;
  return c;
}

OracleConfig quick(std::uint64_t seed = 0) {
  OracleConfig cfg;
  cfg.grid_size = 48;
  cfg.restarts = 3;
  cfg.ascent_iters = 120;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("ratio of the constant function on the unit configuration") {
  CanonicalProblem c = unit(1, 1, 1);
  StepFunction f({0.0, 1.0}, {1.0});
  // both sides equal (int_0^1 t dt) = 1/2, ratio exactly 1
  CHECK(ratio(c, f).v == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ratio is invariant under scaling the function") {
  CanonicalProblem c = unit(0.5, 1, 0.5);
  c.v = Weight::power(0.5);
  StepFunction f({0.1, 0.3, 0.7, 0.9}, {2.0, 0.5, 1.25});
  double r1 = ratio(c, f).v;
  double r2 = ratio(c, f.scaled(17.0)).v;
  double r3 = ratio(c, f.scaled(1e-6)).v;
  CHECK(r2 == Catch::Approx(r1).epsilon(1e-12));
  CHECK(r3 == Catch::Approx(r1).epsilon(1e-10));
}

TEST_CASE("ratio rejects functions without support in the domain") {
  CanonicalProblem c = unit(1, 1, 1);
  StepFunction z({0.2, 0.8}, {0.0});
  CHECK_THROWS_AS(ratio(c, z), DomainError);
  StepFunction outside({2.0, 3.0}, {1.0});
  CHECK_THROWS_AS(ratio(c, outside), DomainError);
}

TEST_CASE("ratio never exceeds the sharp constant on a solved configuration") {
  // p=q=r=1, u=w=t^-2, v=1 on (1,inf): best constant is exactly 1
  CanonicalProblem c = unit(1, 1, 1, Interval(1, kInf));
  c.u = Weight::power(-2.0);
  c.w = Weight::power(-2.0);
  for (int k = 0; k < 8; ++k) {
    double a = 1.0 + 0.3 * k;
    StepFunction f({a, a + 0.7, a + 1.1, a + 2.5}, {1.0, 0.2 + 0.3 * k, 0.6});
    CHECK(ratio(c, f).v <= 1.0 + 1e-9);
  }
}

TEST_CASE("grid refinement never lowers the best ratio") {
  CanonicalProblem c = unit(1, 1, 1);
  OracleConfig coarse = quick(11);
  coarse.grid_size = 16;
  coarse.truncation_ladder = {Interval(1e-4, 1.0 - 1e-4)};
  OracleResult lo = estimate_best_constant(c, coarse);
  REQUIRE_FALSE(lo.diverging);

  // splitting every cell in two leaves the function, hence its ratio, intact
  StepFunction f = lo.argmax;
  StepFunction split;
  for (std::size_t i = 0; i + 1 < f.breaks.size(); ++i) {
    split.breaks.push_back(f.breaks[i]);
    split.breaks.push_back(0.5 * (f.breaks[i] + f.breaks[i + 1]));
    split.values.push_back(f.values[i]);
    split.values.push_back(f.values[i]);
  }
  split.breaks.push_back(f.breaks.back());
  split.validate();
  CHECK(ratio(c, split).v == Catch::Approx(ratio(c, f).v).epsilon(1e-12));

  // the coarse argmax stays feasible on the refined grid, so the refined
  // search result can only be higher up to quadrature noise
  OracleConfig fine = coarse;
  fine.grid_size = 64;
  OracleResult hi = estimate_best_constant(c, fine);
  CHECK(hi.best_ratio.v >= lo.best_ratio.v - 1e-9);
}

TEST_CASE("witness bound is positive and below the sharp constant") {
  CanonicalProblem c = unit(1, 1, 1, Interval(1, kInf));
  c.u = Weight::power(-2.0);
  c.w = Weight::power(-2.0);
  ExtReal wb = witness_lower_bound(c);
  CHECK(wb.v > 0.5);
  CHECK(wb.v <= 1.0 + 1e-9);
}

TEST_CASE("estimator reaches the sharp constant on solved configurations") {
  // closed form: best = sup_s v(s) (int_s^b u)/(int_s^b w)
  CanonicalProblem c1 = unit(1, 1, 1);
  OracleResult r1 = estimate_best_constant(c1, quick());
  CHECK_FALSE(r1.diverging);
  CHECK(r1.best_ratio.v == Catch::Approx(1.0).epsilon(0.01));

  CanonicalProblem c2 = unit(1, 1, 1, Interval(1, kInf));
  c2.u = Weight::power(-2.0);
  c2.w = Weight::power(-2.0);
  OracleResult r2 = estimate_best_constant(c2, quick());
  CHECK_FALSE(r2.diverging);
  CHECK(r2.best_ratio.v == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("estimates are reproducible for a fixed seed") {
  CanonicalProblem c = unit(1, 1, 1);
  c.v = Weight::power(0.5);
  OracleResult a = estimate_best_constant(c, quick(99));
  OracleResult b = estimate_best_constant(c, quick(99));
  CHECK(a.best_ratio.v == b.best_ratio.v);
  REQUIRE(a.ladder_trace.size() == b.ladder_trace.size());
  for (std::size_t i = 0; i < a.ladder_trace.size(); ++i)
    CHECK(a.ladder_trace[i].ratio == b.ladder_trace[i].ratio);
  REQUIRE(a.argmax.values.size() == b.argmax.values.size());
  for (std::size_t i = 0; i < a.argmax.values.size(); ++i)
    CHECK(a.argmax.values[i] == b.argmax.values[i]);
}

TEST_CASE("different seeds still agree on solved configurations") {
  CanonicalProblem c = unit(1, 1, 1);
  OracleResult a = estimate_best_constant(c, quick(1));
  OracleResult b = estimate_best_constant(c, quick(2));
  CHECK(a.best_ratio.v == Catch::Approx(b.best_ratio.v).epsilon(0.02));
}

TEST_CASE("trivial exponent range diverges along the ladder") {
  CanonicalProblem c = unit(1, 1, 2);
  OracleResult r = estimate_best_constant(c, quick());
  CHECK(r.diverging);
  // growth by >= x10 across consecutive rungs somewhere in the trace
  bool grew = false;
  for (std::size_t i = 1; i < r.ladder_trace.size(); ++i) {
    double prev = r.ladder_trace[i - 1].ratio, cur = r.ladder_trace[i].ratio;
    if (std::isinf(cur) || (prev > 0 && cur / prev >= 10.0)) grew = true;
  }
  CHECK(grew);
}

TEST_CASE("non-integrable outer weight diverges") {
  CanonicalProblem c = unit(1, 1, 1);
  c.u = Weight::power(-3.0);
  OracleResult r = estimate_best_constant(c, quick());
  CHECK(r.diverging);
}

TEST_CASE("estimate scales by the weight-homogeneity law") {
  CanonicalProblem c = unit(1, 1, 1, Interval(1, kInf));
  c.u = Weight::power(-2.0);
  c.w = Weight::power(-2.0);
  OracleResult base = estimate_best_constant(c, quick());
  CanonicalProblem s = c;
  s.w = Weight::scaled(3.0, c.w);
  s.u = Weight::scaled(5.0, c.u);
  s.v = Weight::scaled(7.0, c.v);
  OracleResult scaled = estimate_best_constant(s, quick());
  double law = std::pow(3.0, -1.0 / c.p) * std::pow(5.0, 1.0 / c.q) * std::pow(7.0, 1.0 / c.r);
  CHECK(scaled.best_ratio.v / base.best_ratio.v == Catch::Approx(law).epsilon(0.02));
}

TEST_CASE("identity embedding has constant one") {
  SpaceSpec s;
  s.kind = SpaceKind::ces;
  s.p = 2.0;
  s.q = 3.0;
  s.u = Weight::power(-2.0);
  s.v = Weight::constant(1.0);
  s.interval = Interval(1, kInf);
  EmbeddingProblem ident{s, s};
  OracleResult r = estimate_original_constant(ident, quick());
  CHECK_FALSE(r.diverging);
  CHECK(r.best_ratio.v == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("original and canonical estimates agree through the exponent link") {
  EmbeddingProblem e;
  e.source.kind = SpaceKind::ces;
  e.source.p = 2.0;
  e.source.q = 2.0;
  e.source.u = Weight::constant(1.0);
  e.source.v = Weight::scaled(1.3, Weight::power(0.0));
  e.source.interval = Interval(0.0, 1.0);
  e.target.kind = SpaceKind::ces;
  e.target.p = 1.0;
  e.target.q = 2.0;
  e.target.u = Weight::constant(1.0);
  e.target.v = Weight::constant(1.0);
  e.target.interval = Interval(0.0, 1.0);
  CanonicalProblem c = canonicalize(e);
  REQUIRE(c.p1 == 2.0);
  OracleConfig cfg = quick(5);
  cfg.restarts = 4;
  cfg.ascent_iters = 150;
  OracleResult orig = estimate_original_constant(e, cfg);
  OracleResult canon = estimate_best_constant(c, cfg);
  CHECK(std::pow(orig.best_ratio.v, c.p1) ==
        Catch::Approx(canon.best_ratio.v).epsilon(0.03));
}

TEST_CASE("matched functions give identical ratios across the rewrite") {
  // the rewrite g = (f v1)^p1 maps the original ratio^p1 to the canonical one
  EmbeddingProblem e;
  e.source.kind = SpaceKind::ces;
  e.source.p = 2.0;
  e.source.q = 2.0;
  e.source.u = Weight::constant(1.0);
  e.source.v = Weight::scaled(1.3, Weight::power(0.0));
  e.source.interval = Interval(0.0, 1.0);
  e.target.kind = SpaceKind::ces;
  e.target.p = 1.0;
  e.target.q = 2.0;
  e.target.u = Weight::constant(1.0);
  e.target.v = Weight::constant(1.0);
  e.target.interval = Interval(0.0, 1.0);
  CanonicalProblem c = canonicalize(e);
  StepFunction f({0.1, 0.3, 0.55, 0.8}, {0.7, 1.9, 0.4});
  double orig = (space_norm(f, e.target) / space_norm(f, e.source)).v;
  StepFunction g = f;
  for (double& v : g.values) v = std::pow(v * 1.3, 2.0);
  CHECK(std::pow(orig, c.p1) == Catch::Approx(ratio(c, g).v).epsilon(1e-9));
}

TEST_CASE("ladder validation") {
  CanonicalProblem c = unit(1, 1, 1);
  OracleConfig cfg = quick();
  cfg.grid_size = 4;  // too small
  CHECK_THROWS_AS(estimate_best_constant(c, cfg), ParamError);
  cfg = quick();
  cfg.truncation_ladder = {Interval(0.1, 0.9), Interval(0.2, 0.8)};  // shrinking
  CHECK_THROWS_AS(estimate_best_constant(c, cfg), ParamError);
  cfg.truncation_ladder = {Interval(0.1, 0.9), Interval(0.05, 0.95)};
  CHECK_NOTHROW(estimate_best_constant(c, cfg));
}

TEST_CASE("zero target outer weight gives ratio zero") {
  SpaceSpec s;
  s.kind = SpaceKind::ces;
  s.p = 1.0;
  s.q = 2.0;
  s.u = Weight::constant(1.0);
  s.v = Weight::constant(1.0);
  s.interval = Interval(0, 1);
  SpaceSpec t = s;
  t.u = Weight::scaled(0.0, Weight::constant(1.0));
  EmbeddingProblem e{s, t};
  OracleResult r = estimate_original_constant(e, quick());
  CHECK_FALSE(r.diverging);
  CHECK(r.best_ratio.v == 0.0);
}

TEST_CASE("oracle on the original pair requires finite exponents") {
  SpaceSpec s;
  s.kind = SpaceKind::ces;
  s.p = 1.0;
  s.q = kInf;
  s.u = Weight::power(-2.0);
  s.v = Weight::constant(1.0);
  s.interval = Interval(1, kInf);
  EmbeddingProblem e{s, s};
  CHECK_THROWS_AS(estimate_original_constant(e, quick()), ParamError);
}
