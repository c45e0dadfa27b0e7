#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "iobt/checks.hpp"
#include "iobt/connectivity.hpp"
#include "iobt/harness.hpp"
#include "json.hpp"

namespace iobt {

namespace {

using json = nlohmann::json;

json policy_json(const StagePolicy& p) {
  json q = json::array();
  for (const auto& [a, prob] : p.q_star.support) q.push_back({{"action", a.str()}, {"p", prob}});
  return {{"q_star", q},
          {"b_star", p.b_star.str()},
          {"omega_a", p.omega_a},
          {"omega_d", p.omega_d}};
}

json report_json(const ConnectivityReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e = {{"a_d", c.a_d.str()}, {"condition", c.condition}};
    if (c.a_n) e["a_n"] = c.a_n->str();
    if (c.w) e["w"] = *c.w;
    if (c.b_m) e["b_m"] = c.b_m->str();
    checks.push_back(e);
  }
  json zd = json::array();
  for (const auto& a : rep.z_d) zd.push_back(a.str());
  return {{"t", rep.t},
          {"b_star", rep.b_star.str()},
          {"z_d", zd},
          {"checks", checks},
          {"verdict", to_string(rep.verdict)}};
}

Mode parse_mode(const std::string& s) {
  if (s == "fse") return Mode::kFSE;
  if (s == "nfse") return Mode::kNFSE;
  if (s == "equal") return Mode::kEqual;
  throw ConfigError("unknown mode: " + s);
}

struct CommonFlags {
  std::string config;
  std::uint64_t seed = 1;
  int runs = 0;
  double scale = 0.0;
  std::string out;
  bool seed_set = false;
};

ExperimentConfig load(const CommonFlags& f) {
  ExperimentConfig ec = f.config.empty() ? default_config() : load_config(f.config);
  if (f.seed_set) ec.seed = f.seed;
  if (f.runs > 0) ec.runs = f.runs;
  if (f.scale > 0.0) ec.scale = f.scale;
  if (ec.scale <= 0.0 || ec.scale > 1.0) throw ConfigError("scale must lie in (0, 1]");
  return ec;
}

int cmd_solve(const CommonFlags& f, const std::string& mode_name, int horizon, bool separable) {
  ExperimentConfig ec = load(f);
  Mode mode = parse_mode(mode_name);
  GameConfig cfg = scaled_game(ec, ec.scale);
  cfg.horizon = horizon;
  cfg.validate();
  NetworkState psi = generate_instance(cfg, scaled_instance(ec, ec.scale), ec.seed);

  ValueCache cache;
  SolverOptions opts;
  opts.continuation = separable ? Continuation::kSeparable : Continuation::kExact;
  StagePolicy policy;
  if (mode == Mode::kFSE) {
    policy = solve_stage(psi, 1, cfg, &cache, opts);
  } else if (mode == Mode::kNFSE) {
    policy = solve_nfse(psi, cfg);
  } else {
    policy.q_star = equal_probability_policy(psi);
  }

  std::cout << "mode " << to_string(mode) << ", T=" << cfg.horizon << ", "
            << psi.devices.size() << " devices, " << psi.sinks.size() << " sinks\n";
  std::cout << "b* = " << policy.b_star.str() << "\n";
  std::cout << "Omega_a = " << policy.omega_a << ", Omega_d = " << policy.omega_d << "\n";
  std::cout << "q*:\n";
  for (const auto& [a, p] : policy.q_star.support) {
    if (p > 1e-12) std::cout << "  " << a.str() << "  " << p << "\n";
  }

  json doc = {{"mode", to_string(mode)}, {"T", cfg.horizon}, {"seed", ec.seed},
              {"policy", policy_json(policy)}};
  if (mode != Mode::kEqual) {
    StageGame g = mode == Mode::kFSE ? build_stage_game(psi, 1, cfg, &cache, opts)
                                     : build_stage_game(psi, cfg.horizon, cfg, &cache, opts);
    ConnectivityReport rep =
        check_prop1(psi, mode == Mode::kFSE ? 1 : cfg.horizon, policy, g, cfg);
    std::cout << "connectivity: " << to_string(rep.verdict) << " (|Z_D| = " << rep.z_d.size()
              << ")\n";
    for (const auto& c : rep.checks) {
      std::cout << "  " << c.a_d.str() << ": "
                << (c.condition > 0 ? "condition " + std::to_string(c.condition) +
                                          " via " + c.a_n->str()
                                    : std::string("no witness"))
                << "\n";
    }
    doc["connectivity"] = report_json(rep);
  }
  if (!f.out.empty()) {
    std::filesystem::create_directories(f.out);
    std::ofstream os(std::filesystem::path(f.out) / "solve.json");
    os << doc.dump(2) << "\n";
  }
  return 0;
}

int cmd_scenario(const CommonFlags& f, int id, const std::string& mode_name, bool exact,
                 bool timing, bool verbose) {
  ExperimentConfig ec = load(f);
  if (id < 1 || id > 3) throw ConfigError("scenario must be 1, 2 or 3");
  ScenarioOptions so;
  so.runs = ec.runs;
  so.seed = ec.seed;
  so.scale = ec.scale;
  so.continuation = exact ? Continuation::kExact : Continuation::kSeparable;
  so.timing = timing;
  so.verbose = verbose;
  if (!mode_name.empty()) so.modes = {parse_mode(mode_name)};
  std::vector<MetricsRow> rows = run_scenario(ec, id, so);

  std::filesystem::path dir = f.out.empty() ? "." : f.out;
  std::filesystem::create_directories(dir);
  std::string stem = "scenario_" + std::to_string(id);
  {
    std::ofstream os(dir / (stem + ".csv"), std::ios::binary);
    write_csv(os, rows);
  }
  {
    std::ofstream os(dir / (stem + ".dat"), std::ios::binary);
    write_dat(os, rows);
  }
  write_csv(std::cout, rows);
  return 0;
}

int cmd_check(const CommonFlags& f, bool quick) {
  std::uint64_t seed = f.seed_set ? f.seed : 2024;
  std::vector<CheckResult> results;
  auto report = [&](CheckResult r) {
    std::cout << format_check(r) << std::endl;
    results.push_back(std::move(r));
  };
  int scale = quick ? 5 : 1;
  report(check_lp_oracle(500 / scale, seed));
  report(check_stage_oracle(200 / scale, seed + 1));
  report(check_tree_oracle());
  report(check_boundary_identity(50 / scale, seed + 3));
  report(check_prop1_soundness(300 / scale, 200 / scale, seed + 4));
  report(check_safety(50 / scale, 1000 / scale, seed + 8));
  for (const auto& r : results) {
    if (!r.pass) return 1;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Dynamic IoBT connectivity game solver"};
  app.require_subcommand(1);
  CommonFlags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--seed", f.seed, "random seed")->each([&](const std::string&) {
      f.seed_set = true;
    });
    sub->add_option("--runs", f.runs, "runs per data point");
    sub->add_option("--scale", f.scale, "fraction of nominal device counts");
    sub->add_option("--out", f.out, "output directory");
  };

  std::string mode = "fse";
  int horizon = 1;
  bool separable = false;
  auto* solve = app.add_subcommand("solve", "solve one instance and print the stage-1 policy");
  add_common(solve);
  solve->add_option("--mode", mode, "fse | nfse | equal");
  solve->add_option("--horizon", horizon, "number of stages T")->check(CLI::PositiveNumber);
  solve->add_flag("--separable", separable, "approximate continuation values");

  int scenario = 1;
  std::string scenario_mode;
  bool exact = false;
  bool timing = false;
  bool verbose = false;
  auto* scen = app.add_subcommand("scenario", "run an experiment scenario and write CSV");
  add_common(scen);
  scen->add_option("--scenario", scenario, "scenario 1, 2 or 3")->required();
  scen->add_option("--mode", scenario_mode, "restrict to one mode");
  scen->add_flag("--exact", exact, "exact continuation values");
  scen->add_flag("--timing", timing, "record wall-clock runtime in the CSV");
  scen->add_flag("--verbose", verbose, "progress on stderr");

  bool quick = false;
  auto* check = app.add_subcommand("check", "run the oracle and property suites");
  add_common(check);
  check->add_flag("--quick", quick, "reduced sample counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return cmd_solve(f, mode, horizon, separable);
    if (*scen) return cmd_scenario(f, scenario, scenario_mode, exact, timing, verbose);
    if (*check) return cmd_check(f, quick);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleInstance& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const EmptyFeasibleSet& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const NoActivatedLS& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace iobt
