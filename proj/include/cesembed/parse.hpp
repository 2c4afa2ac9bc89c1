#pragma once

#include <cctype>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "cesembed/errors.hpp"
#include "cesembed/funcspace.hpp"
#include "cesembed/oracle.hpp"
#include "cesembed/weights.hpp"

// Textual form of a space: `ces|cop|leb : p,q : <weight> , <weight> @ (a,b)`.
// Exponents accept decimals, rationals like 3/2 (exact at regime boundaries),
// and `inf`; the weight sublanguage is defined next to Weight.

namespace cesembed {

struct RunRequest {
  std::string command;          // check | constants | oracle | norm
  std::string source;           // textual SpaceSpec
  std::string target;
  std::string space;            // for `norm`
  std::string f_file;           // step function JSON path, for `norm`
  std::string output = "json";  // json | text
  std::uint64_t seed = 0;
  OracleConfig oracle_cfg;
};

namespace dsl {

inline double parse_exponent(std::string_view s, std::size_t& pos) {
  if (s.substr(pos, 3) == "inf") {
    pos += 3;
    return kInf;
  }
  double v = parse_number(s, pos);
  if (!(v > 0.0)) throw ParseError(pos, "exponent must be positive");
  return v;
}

}  // namespace dsl

inline SpaceSpec parse_spec(std::string_view text) {
  std::size_t pos = 0;
  SpaceSpec s;
  if (text.substr(pos, 4) == "ces:") {
    s.kind = SpaceKind::ces;
  } else if (text.substr(pos, 4) == "cop:") {
    s.kind = SpaceKind::cop;
  } else if (text.substr(pos, 4) == "leb:") {
    s.kind = SpaceKind::leb;
  } else {
    throw ParseError(pos, "expected 'ces:', 'cop:' or 'leb:'");
  }
  pos += 4;
  s.p = dsl::parse_exponent(text, pos);
  dsl::expect(text, pos, ',');
  s.q = dsl::parse_exponent(text, pos);
  dsl::expect(text, pos, ':');
  s.u = dsl::parse_weight(text, pos);
  dsl::expect(text, pos, ',');
  s.v = dsl::parse_weight(text, pos);
  dsl::expect(text, pos, '@');
  dsl::expect(text, pos, '(');
  double a = dsl::parse_endpoint(text, pos);
  dsl::expect(text, pos, ',');
  double b = dsl::parse_endpoint(text, pos);
  dsl::expect(text, pos, ')');
  if (pos != text.size()) throw ParseError(pos, "trailing characters after space spec");
  s.interval = Interval(a, b);
  validate_quasinorm(s);
  return s;
}

inline std::string print_spec(const SpaceSpec& s) {
  std::string kind = s.kind == SpaceKind::ces ? "ces" : s.kind == SpaceKind::cop ? "cop" : "leb";
  auto ex = [](double e) { return std::isinf(e) ? std::string("inf") : num_str(e); };
  return kind + ":" + ex(s.p) + "," + ex(s.q) + ":" + s.u.to_string() + "," + s.v.to_string() +
         "@(" + num_str(s.interval.a) + "," +
         (s.interval.bounded() ? num_str(s.interval.b) : std::string("inf")) + ")";
}

// key=value lines mirroring OracleConfig; '#' starts a comment. Unknown keys
// are rejected so typos do not silently fall back to defaults.
inline OracleConfig parse_oracle_config(std::istream& in, OracleConfig base = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (auto h = sv.find('#'); h != std::string_view::npos) sv = sv.substr(0, h);
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.back()))) sv.remove_suffix(1);
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front()))) sv.remove_prefix(1);
    if (sv.empty()) continue;
    auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(0, "config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string_view t) {
      while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
      while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
      return std::string(t);
    };
    std::string key = trim(sv.substr(0, eq));
    std::string val = trim(sv.substr(eq + 1));
    try {
      if (key == "grid_size") {
        base.grid_size = std::stoi(val);
      } else if (key == "restarts") {
        base.restarts = std::stoi(val);
      } else if (key == "ascent_iters") {
        base.ascent_iters = std::stoi(val);
      } else if (key == "growth_factor_infinite") {
        base.growth_factor_infinite = std::stod(val);
      } else if (key == "seed") {
        base.seed = std::stoull(val);
      } else if (key == "gl_order") {
        base.gl_order = std::stoi(val);
      } else if (key == "fd_step") {
        base.fd_step = std::stod(val);
      } else {
        throw ParseError(0, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(0, "config line " + std::to_string(lineno) + ": bad value '" + val + "'");
    }
  }
  return base;
}

inline OracleConfig parse_oracle_config_text(const std::string& text, OracleConfig base = {}) {
  std::istringstream in(text);
  return parse_oracle_config(in, base);
}

}  // namespace cesembed
