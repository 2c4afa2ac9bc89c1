// Command-line front end. Subcommands:
//   check      two-sided estimates plus search oracle, full report
//   constants  two-sided estimates only
//   oracle     search oracle only
//   norm       norm of a step function in a given space
// Exit codes: 0 finite, 1 infinite or diverging, 2 trivial inequality, 3 error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cesembed/cesembed.hpp"

namespace {

cesembed::StepFunction load_step_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cesembed::ParamError("cannot open step function file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  cesembed::StepFunction f;
  f.breaks = j.at("breaks").get<std::vector<double>>();
  f.values = j.at("values").get<std::vector<double>>();
  f.validate();
  return f;
}

std::string fmt_extreal(const cesembed::ExtReal& x) {
  return x.is_inf() ? std::string("inf") : cesembed::num_str(x.v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cesembed;

  CLI::App app{"weighted Cesaro / Copson embedding checker"};
  app.require_subcommand(1);

  std::string source, target, space, f_file, config_file;
  std::string format = "json";
  std::uint64_t seed = 0;
  int oracle_grid = -1, restarts = -1, iters = -1;

  auto add_pair_opts = [&](CLI::App* sub, bool with_oracle) {
    sub->add_option("--source", source, "source space, e.g. ces:1,2:pow:0,pow:0@(0,1)")
        ->required();
    sub->add_option("--target", target, "target space")->required();
    sub->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    if (with_oracle) {
      sub->add_option("--oracle-grid", oracle_grid, "oracle grid cells per rung");
      sub->add_option("--seed", seed, "seed for oracle restarts");
      sub->add_option("--restarts", restarts, "oracle restarts per rung");
      sub->add_option("--iters", iters, "oracle ascent iterations");
      sub->add_option("--config", config_file, "key=value file mirroring the oracle options");
    }
  };

  CLI::App* check = app.add_subcommand("check", "two-sided estimates plus search oracle");
  add_pair_opts(check, true);
  CLI::App* constants = app.add_subcommand("constants", "two-sided estimates only");
  add_pair_opts(constants, false);
  CLI::App* oracle = app.add_subcommand("oracle", "search oracle only");
  add_pair_opts(oracle, true);

  CLI::App* norm = app.add_subcommand("norm", "norm of a step function in a space");
  norm->add_option("--space", space, "space spec")->required();
  norm->add_option("--f", f_file, "step function JSON ({\"breaks\": [...], \"values\": [...]})")
      ->required();
  norm->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every usage mistake folds into the error code.
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (norm->parsed()) {
      SpaceSpec s = parse_spec(space);
      StepFunction f = load_step_function(f_file);
      ExtReal n = space_norm(f, s);
      if (format == "json") {
        nlohmann::ordered_json j;
        j["space"] = print_spec(s);
        j["norm"] = n.is_inf() ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(n.v);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "norm: " << fmt_extreal(n) << "\n";
      }
      return n.finite() ? 0 : 1;
    }

    RunRequest req;
    req.command = check->parsed() ? "check" : constants->parsed() ? "constants" : "oracle";
    req.source = source;
    req.target = target;
    req.output = format;
    req.seed = seed;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ParamError("cannot open config file: " + config_file);
      req.oracle_cfg = parse_oracle_config(in, req.oracle_cfg);
    }
    if (oracle_grid > 0) req.oracle_cfg.grid_size = oracle_grid;
    if (restarts > 0) req.oracle_cfg.restarts = restarts;
    if (iters > 0) req.oracle_cfg.ascent_iters = iters;

    EmbeddingReport rep = run_check(req);
    std::cout << emit_report(rep, format);
    return rep.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
