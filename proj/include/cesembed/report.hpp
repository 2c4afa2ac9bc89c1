#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cesembed/constants.hpp"
#include "cesembed/errors.hpp"
#include "cesembed/oracle.hpp"
#include "cesembed/parse.hpp"
#include "cesembed/reduce.hpp"
#include "cesembed/weights.hpp"

namespace cesembed {

struct EmbeddingReport {
  std::optional<CanonicalProblem> canonical;
  std::optional<Regime> regime;       // set only when the two-sided estimates ran
  std::map<std::string, ExtReal> constants;
  ExtReal estimate{0.0};              // canonical-constant estimate from the regime sum
  bool theorem_ran = false;
  bool finite = false;
  bool trivial = false;
  std::optional<OracleResult> oracle;
  std::optional<double> agreement;    // oracle / theorem, only when both finite
  std::vector<std::string> notes;

  // 0 finite, 1 infinite or diverging, 2 trivial inequality, 3 reserved for
  // errors thrown before a report exists.
  int exit_code() const {
    if (trivial) return 2;
    return finite ? 0 : 1;
  }
};

namespace detail {

constexpr const char* kOutOfScopeNote = "theorem path: out of scope (cited literature)";

inline bool oracle_side_finite(const OracleResult& o) {
  return !o.diverging && o.best_ratio.finite();
}

}  // namespace detail

// Full pipeline: degenerate collapse, tail-to-head transform, canonical
// rewrite, triviality, two-sided estimates, then the search oracle. Which of
// the last two run is controlled by the command (`constants` skips the
// oracle, `oracle` skips the estimates, `check` runs both).
inline EmbeddingReport run_check(const RunRequest& req) {
  const bool want_theorem = req.command != "oracle";
  const bool want_oracle = req.command != "constants";

  EmbeddingProblem e;
  e.source = parse_spec(req.source);
  e.target = parse_spec(req.target);
  require_same_interval(e);

  OracleConfig cfg = req.oracle_cfg;
  if (req.seed != 0) cfg.seed = req.seed;

  EmbeddingReport rep;

  // Sides with p = q collapse to weighted Lebesgue spaces; the two-sided
  // machinery needs genuine inner/outer structure on both sides, so the
  // collapsed problem goes to the oracle directly.
  if (auto deg = detect_degenerate(e)) {
    auto side_note = [&](const SpaceSpec& before, const char* name) {
      if (before.kind != SpaceKind::leb && before.p == before.q && !std::isinf(before.p))
        rep.notes.push_back(std::string("degenerate reduction applied: ") + name +
                            " has p = q, collapsed to a weighted Lebesgue space");
    };
    side_note(e.source, "source");
    side_note(e.target, "target");
    rep.notes.push_back(detail::kOutOfScopeNote);
    if (want_oracle) {
      rep.oracle = estimate_original_constant(*deg, cfg);
      rep.finite = detail::oracle_side_finite(*rep.oracle);
    }
    return rep;
  }

  EmbeddingProblem eff = e;
  const bool ces_ces = e.source.kind == SpaceKind::ces && e.target.kind == SpaceKind::ces;
  const bool cop_cop = e.source.kind == SpaceKind::cop && e.target.kind == SpaceKind::cop;
  if (cop_cop) {
    eff = tilde_transform(e);
    rep.notes.push_back(e.source.interval.bounded()
                            ? "transform applied: reflection turned cop -> cop into ces -> ces"
                            : "transform applied: inversion turned cop -> cop into ces -> ces");
  } else if (!ces_ces) {
    // Mixed kinds (and explicit Lebesgue sides): no two-sided estimates here.
    rep.notes.push_back(detail::kOutOfScopeNote);
    if (want_oracle) {
      rep.oracle = estimate_original_constant(e, cfg);
      rep.finite = detail::oracle_side_finite(*rep.oracle);
    }
    return rep;
  }

  CanonicalProblem c = canonicalize(eff);
  rep.canonical = c;

  TrivialityVerdict tv = triviality_check(c);
  if (tv.trivial) {
    rep.trivial = true;
    rep.notes.push_back(tv.message);
    if (want_oracle) rep.oracle = estimate_best_constant(c, cfg);
    rep.finite = false;
    return rep;
  }

  if (!c.hypothesis_ok) {
    rep.notes.push_back(
        "hypothesis fails: the right-hand weight does not satisfy 0 < int_x^b w < inf; "
        "two-sided estimates do not apply");
    rep.notes.push_back(detail::kOutOfScopeNote);
    if (want_oracle) {
      rep.oracle = estimate_best_constant(c, cfg);
      rep.finite = detail::oracle_side_finite(*rep.oracle);
    }
    return rep;
  }

  if (want_theorem) {
    ConstantsReport cr = theorem_verdict(c);
    rep.regime = cr.regime;
    rep.constants = cr.values;
    rep.estimate = cr.estimate;
    rep.finite = cr.finite;
    rep.theorem_ran = true;
    if (!cr.finite) {
      for (const auto& [name, val] : cr.values)
        if (val.is_inf()) {
          rep.notes.push_back("infinite constant: " + name);
          break;
        }
    }
  }

  if (want_oracle) {
    rep.oracle = estimate_best_constant(c, cfg);
    if (!want_theorem) rep.finite = detail::oracle_side_finite(*rep.oracle);
  }

  if (rep.theorem_ran && rep.oracle && rep.finite && detail::oracle_side_finite(*rep.oracle) &&
      rep.estimate.finite() && rep.estimate.v > 0.0)
    rep.agreement = rep.oracle->best_ratio.v / rep.estimate.v;

  return rep;
}

namespace detail {

inline nlohmann::ordered_json json_of(const ExtReal& x) {
  if (x.is_inf()) return "inf";
  return x.v;
}

inline nlohmann::ordered_json json_of_interval(const Interval& iv) {
  nlohmann::ordered_json j;
  j["a"] = iv.a;
  j["b"] = iv.bounded() ? nlohmann::ordered_json(iv.b) : nlohmann::ordered_json("inf");
  return j;
}

inline nlohmann::ordered_json json_of_oracle(const OracleResult& o) {
  nlohmann::ordered_json j;
  j["best_ratio"] = json_of(o.best_ratio);
  j["diverging"] = o.diverging;
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const auto& rung : o.ladder_trace) {
    nlohmann::ordered_json row;
    row["domain"] = json_of_interval(rung.domain);
    row["grid"] = rung.grid;
    row["ratio"] = std::isinf(rung.ratio) ? nlohmann::ordered_json("inf")
                                          : nlohmann::ordered_json(rung.ratio);
    trace.push_back(row);
  }
  j["ladder_trace"] = trace;
  nlohmann::ordered_json am;
  am["breaks"] = o.argmax.breaks;
  am["values"] = o.argmax.values;
  j["argmax"] = am;
  return j;
}

}  // namespace detail

inline std::string emit_report(const EmbeddingReport& rep, const std::string& fmt) {
  if (fmt == "json") {
    nlohmann::ordered_json j;
    if (rep.canonical) {
      const CanonicalProblem& c = *rep.canonical;
      nlohmann::ordered_json cj;
      cj["p"] = c.p;
      cj["q"] = c.q;
      cj["r"] = c.r;
      cj["u"] = c.u.to_string();
      cj["v"] = c.v.to_string();
      cj["w"] = c.w.to_string();
      cj["interval"] = detail::json_of_interval(c.interval);
      cj["p1"] = c.p1;
      cj["hypothesis_ok"] = c.hypothesis_ok;
      j["canonical"] = cj;
    } else {
      j["canonical"] = nullptr;
    }
    j["regime"] = rep.regime ? nlohmann::ordered_json(to_string(rep.regime->id))
                             : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json cons = nlohmann::ordered_json::object();
    for (const auto& [name, val] : rep.constants) cons[name] = detail::json_of(val);
    j["constants"] = cons;
    j["estimate"] = rep.theorem_ran ? detail::json_of(rep.estimate)
                                    : nlohmann::ordered_json(nullptr);
    j["finite"] = rep.finite;
    j["oracle"] = rep.oracle ? detail::json_of_oracle(*rep.oracle)
                             : nlohmann::ordered_json(nullptr);
    j["agreement"] = rep.agreement ? nlohmann::ordered_json(*rep.agreement)
                                   : nlohmann::ordered_json(nullptr);
    j["notes"] = rep.notes;
    return j.dump(2) + "\n";
  }

  std::string out;
  auto line = [&out](const std::string& s) { out += s + "\n"; };
  auto num = [](const ExtReal& x) { return x.is_inf() ? std::string("inf") : num_str(x.v); };
  if (rep.canonical) {
    const CanonicalProblem& c = *rep.canonical;
    line("canonical: p=" + num_str(c.p) + " q=" + num_str(c.q) + " r=" + num_str(c.r) +
         " p1=" + num_str(c.p1));
    line("  u = " + c.u.to_string());
    line("  v = " + c.v.to_string());
    line("  w = " + c.w.to_string());
  }
  if (rep.regime) line(std::string("regime: ") + to_string(rep.regime->id));
  for (const auto& [name, val] : rep.constants) line("  " + name + " = " + num(val));
  if (rep.theorem_ran) line("estimate: " + num(rep.estimate));
  line(std::string("finite: ") + (rep.finite ? "true" : "false"));
  if (rep.oracle) {
    line("oracle: best_ratio = " + num(rep.oracle->best_ratio) +
         (rep.oracle->diverging ? " (diverging)" : ""));
    for (const auto& rung : rep.oracle->ladder_trace) {
      std::string b = rung.domain.bounded() ? num_str(rung.domain.b) : std::string("inf");
      line("  rung (" + num_str(rung.domain.a) + "," + b + ") grid=" +
           std::to_string(rung.grid) + " ratio=" +
           (std::isinf(rung.ratio) ? std::string("inf") : num_str(rung.ratio)));
    }
  }
  if (rep.agreement) line("agreement: " + num_str(*rep.agreement));
  for (const auto& n : rep.notes) line("note: " + n);
  return out;
}

}  // namespace cesembed
