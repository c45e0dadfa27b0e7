#include "iobt/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "iobt/connectivity.hpp"
#include "iobt/lp.hpp"
#include "iobt/oracles.hpp"
#include "iobt/payoffs.hpp"

namespace iobt {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

CheckResult named(int id, const char* name) {
  CheckResult r;
  r.id = id;
  r.name = name;
  return r;
}

}  // namespace

std::string format_check(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << " " << r.name << ": "
     << r.detail << " [" << std::fixed << std::setprecision(1) << r.seconds << " s]";
  return os.str();
}

CheckResult check_lp_oracle(int count, std::uint64_t seed) {
  CheckResult r = named(1, "lp-vs-vertex-enumeration");
  auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  int mismatches = 0;
  int optimal = 0;
  double max_err = 0.0;
  for (int k = 0; k < count; ++k) {
    LinearProgram lp = oracle::random_lp(rng);
    LPSolution s = solve_lp(lp);
    LPSolution o = oracle::vertex_enumeration(lp);
    if (s.status != o.status) {
      ++mismatches;
      continue;
    }
    if (s.status != LPStatus::kOptimal) continue;
    ++optimal;
    double err = std::fabs(s.value - o.value);
    max_err = std::max(max_err, err);
    if (err > 1e-7) ++mismatches;
  }
  r.seconds = since(t0);
  r.pass = mismatches == 0 && r.seconds < 30.0;
  r.detail = std::to_string(mismatches) + " mismatches over " + std::to_string(count) +
             " LPs (" + std::to_string(optimal) + " optimal), max |dv| " + num(max_err) +
             ", limit 1e-7 within 30 s";
  return r;
}

CheckResult check_stage_oracle(int count, std::uint64_t seed) {
  CheckResult r = named(2, "stage-vs-grid-search");
  auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  int mismatches = 0;
  double max_err = 0.0;
  for (int k = 0; k < count; ++k) {
    StageGame g = oracle::random_stage_game(rng);
    StageSolution s = solve_stage_game(g);
    double o = oracle::grid_leader_value(g, 1e-3);
    bool s_ok = s.b >= 0;
    bool o_ok = std::isfinite(o);
    if (s_ok != o_ok) {
      ++mismatches;
      continue;
    }
    if (!s_ok) continue;
    double err = std::fabs(s.value_a - o);
    max_err = std::max(max_err, err);
    if (err > 2e-3) ++mismatches;
  }
  r.seconds = since(t0);
  r.pass = mismatches == 0 && r.seconds < 300.0;
  r.detail = std::to_string(mismatches) + " mismatches over " + std::to_string(count) +
             " games, max |dv| " + num(max_err) + ", limit 2e-3 within 300 s";
  return r;
}

CheckResult check_tree_oracle() {
  CheckResult r = named(3, "fse-vs-game-tree");
  auto t0 = Clock::now();
  oracle::SmallInstance inst = oracle::tiny_instance(2);
  ValueCache cache;
  SolverOptions opts;
  opts.continuation = Continuation::kExact;
  auto v = continuation_values(inst.psi, 1, inst.cfg, &cache, opts);
  auto o = oracle::tree_values(inst.psi, 2, inst.cfg);
  double err = std::max(std::fabs(v.first - o.first), std::fabs(v.second - o.second));
  r.seconds = since(t0);
  r.pass = err <= 1e-6 && r.seconds < 60.0;
  r.detail = "Omega_a " + num(v.first) + " vs " + num(o.first) + ", Omega_d " + num(v.second) +
             " vs " + num(o.second) + ", max |dv| " + num(err) + ", limit 1e-6 within 60 s";
  return r;
}

CheckResult check_boundary_identity(int count, std::uint64_t seed) {
  CheckResult r = named(4, "fse-T1-equals-nfse");
  auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  int mismatches = 0;
  for (int k = 0; k < count; ++k) {
    oracle::SmallInstance inst = oracle::random_instance(rng, 1);
    ValueCache cache;
    StagePolicy f = solve_stage(inst.psi, 1, inst.cfg, &cache, SolverOptions{});
    StagePolicy n = solve_nfse(inst.psi, inst.cfg);
    bool same = f.b_star == n.b_star && f.q_star.support.size() == n.q_star.support.size() &&
                std::fabs(f.omega_a - n.omega_a) <= 1e-9 &&
                std::fabs(f.omega_d - n.omega_d) <= 1e-9;
    for (std::size_t i = 0; same && i < f.q_star.support.size(); ++i) {
      same = f.q_star.support[i].first == n.q_star.support[i].first &&
             std::fabs(f.q_star.support[i].second - n.q_star.support[i].second) <= 1e-9;
    }
    if (!same) ++mismatches;
  }
  r.seconds = since(t0);
  r.pass = mismatches == 0;
  r.detail = std::to_string(mismatches) + " differing policies over " + std::to_string(count) +
             " instances";
  return r;
}

CheckResult check_prop1_soundness(int instances, int lps, std::uint64_t seed) {
  CheckResult r = named(5, "connectivity-soundness");
  auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  int guaranteed = 0;
  int skipped = 0;
  int bad_verdicts = 0;
  double worst_mass = 0.0;
  for (int k = 0; k < instances; ++k) {
    oracle::SmallInstance inst = oracle::random_instance(rng, 1 + k % 2);
    ValueCache cache;
    SolverOptions opts;
    StageGame g;
    StagePolicy p;
    try {
      g = build_stage_game(inst.psi, 1, inst.cfg, &cache, opts);
      p = solve_stage(inst.psi, 1, inst.cfg, &cache, opts);
    } catch (const NoFeasibleStage&) {
      ++skipped;
      continue;
    }
    ConnectivityReport rep = check_prop1(inst.psi, 1, p, g, inst.cfg);
    if (!rep.guaranteed()) continue;
    ++guaranteed;
    double mass = 0.0;
    for (const auto& a : rep.z_d) mass += p.q_star.prob(a);
    if (mass > 1e-9) {
      ++bad_verdicts;
      worst_mass = std::max(worst_mass, mass);
    }
  }

  int fired = 0;
  int bad_tests = 0;
  for (int k = 0; k < lps; ++k) {
    LinearProgram lp = oracle::random_lp(rng);
    LPSolution s = solve_lp(lp);
    if (s.status != LPStatus::kOptimal) continue;
    LPSolution o = oracle::vertex_enumeration(lp);
    for (int v = 0; v < lp.num_vars(); ++v) {
      if (!zero_variable_test(lp, v)) continue;
      ++fired;
      bool nonzero = s.x[v] > 1e-9 || (o.status == LPStatus::kOptimal && o.x[v] > 1e-9);
      if (nonzero) ++bad_tests;
    }
  }
  r.seconds = since(t0);
  r.pass = bad_verdicts == 0 && bad_tests == 0;
  r.detail = std::to_string(bad_verdicts) + " of " + std::to_string(guaranteed) +
             " Guaranteed verdicts put mass on Z_D (worst " + num(worst_mass) + ", " +
             std::to_string(instances) + " instances, " + std::to_string(skipped) +
             " without a feasible stage); " + std::to_string(bad_tests) + " of " +
             std::to_string(fired) + " zero-variable claims contradicted by the optimum (" +
             std::to_string(lps) + " LPs)";
  return r;
}

namespace {

const MetricsRow* find_row(const std::vector<MetricsRow>& rows, const std::string& mode,
                           double value, int T) {
  for (const auto& r : rows) {
    if (r.mode == mode && std::fabs(r.value - value) < 1e-9 && r.T == T) return &r;
  }
  return nullptr;
}

constexpr double kSlack = 1e-6;

}  // namespace

CheckResult check_trends(const ExperimentConfig& ec, const std::vector<MetricsRow>& scenario1,
                         int runs, double scale, std::uint64_t seed) {
  CheckResult r = named(6, "desk-scale-trends");
  auto t0 = Clock::now();
  ScenarioOptions so;
  so.runs = runs;
  so.scale = scale;
  so.seed = seed;
  std::ostringstream detail;
  bool all = true;
  auto verdict = [&](const char* tag, bool ok) {
    detail << tag << (ok ? " ok" : " FAIL") << "; ";
    all = all && ok;
  };
  auto p1 = [&](const char* mode, double v, int T) {
    const MetricsRow* row = find_row(scenario1, mode, v, T);
    return row ? row->p_h : std::nan("");
  };

  // (a)
  {
    double p0 = p1("nfse", 0, 1), p50 = p1("nfse", 50, 1), p100 = p1("nfse", 100, 1),
           p150 = p1("nfse", 150, 1), p200 = p1("nfse", 200, 1);
    bool ok = std::fabs(p0 - p50) <= kSlack && p100 < p50 && p150 < p100 && p200 < p150 &&
              p200 <= kSlack;
    detail << "(a) p_H nfse " << num(p0) << "," << num(p50) << "," << num(p100) << ","
           << num(p150) << "," << num(p200) << " ";
    verdict("", ok);
  }
  // (b)
  {
    bool ok = true;
    for (double v : {0.0, 50.0}) {
      ok = ok && p1("fse", v, 3) < p1("fse", v, 2) && p1("fse", v, 2) < p1("nfse", v, 1);
    }
    ok = ok && p1("fse", 200, 3) > p1("fse", 200, 2) && p1("fse", 200, 2) > p1("nfse", 200, 1);
    detail << "(b) p_H at 0: T3 " << num(p1("fse", 0, 3)) << " T2 " << num(p1("fse", 0, 2))
           << " nfse " << num(p1("nfse", 0, 1)) << ", at 200: T3 " << num(p1("fse", 200, 3))
           << " T2 " << num(p1("fse", 200, 2)) << " nfse " << num(p1("nfse", 200, 1)) << " ";
    verdict("", ok);
  }
  // (c)
  {
    ScenarioOptions s2 = so;
    s2.modes = {Mode::kNFSE};
    std::vector<MetricsRow> rows = run_scenario(ec, 2, s2);
    Scenario sc = scenario_definition(2);
    std::vector<double> p;
    for (double v : sc.values) {
      const MetricsRow* row = find_row(rows, "nfse", v, 1);
      p.push_back(row ? row->p_c_max : std::nan(""));
    }
    bool ok = p.back() <= kSlack && p.back() < p.front();
    for (std::size_t i = 1; i < p.size(); ++i) ok = ok && p[i] <= p[i - 1] + kSlack;
    detail << "(c) p_c_max nfse";
    for (double x : p) detail << ' ' << num(x);
    detail << ' ';
    verdict("", ok);
  }
  // (d)
  {
    std::vector<MetricsRow> rows = run_scenario(ec, 3, so);
    auto cum = [&](const char* mode, double v, int T) {
      const MetricsRow* row = find_row(rows, mode, v, T);
      return row ? row->n_d * T : std::nan("");
    };
    bool low = true;
    double prev_n = -1e300, prev_e = -1e300;
    detail << "(d) cumulative N_D at (0,50) fse/nfse/equal";
    for (int T = 2; T <= 5; ++T) {
      double f = cum("fse", 0, T), n = cum("nfse", 0, T), e = cum("equal", 0, T);
      detail << " T" << T << ":" << num(f) << "/" << num(n) << "/" << num(e);
      low = low && f < n && f < e && (n - f) > prev_n && (e - f) > prev_e;
      prev_n = n - f;
      prev_e = e - f;
    }
    bool high = true;
    detail << "; at (150,50)";
    for (int T = 1; T <= 5; ++T) {
      double f = cum("fse", 150, T), n = cum("nfse", 150, T), e = cum("equal", 150, T);
      detail << " T" << T << ":" << num(f) << "/" << num(n) << "/" << num(e);
      high = high && f >= n - kSlack && f < e;
    }
    detail << ' ';
    verdict("", low && high);
  }
  r.seconds = since(t0);
  r.pass = all;
  r.detail = detail.str();
  return r;
}

std::vector<MetricsRow> parse_csv(const std::string& text) {
  std::vector<MetricsRow> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) continue;
    MetricsRow r;
    r.scenario = std::stoi(f[0]);
    r.mode = f[1];
    r.value = std::stod(f[2]);
    r.T = std::stoi(f[3]);
    r.p_h = std::stod(f[4]);
    r.p_c_max = std::stod(f[5]);
    r.n_d = std::stod(f[6]);
    r.runtime = std::stod(f[7]);
    r.seed = std::stoull(f[8]);
    rows.push_back(r);
  }
  return rows;
}

CheckResult check_determinism(const std::string& config_path, const std::string& work_dir,
                              std::string* csv_out) {
  CheckResult r = named(7, "scenario-determinism");
  auto t0 = Clock::now();
  namespace fs = std::filesystem;
  std::string csv[2];
  int codes[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    fs::path dir = fs::path(work_dir) / ("determinism_" + std::to_string(k));
    fs::create_directories(dir);
    std::vector<std::string> args = {"iobt", "scenario", "--scenario", "1", "--scale", "0.1",
                                     "--seed", "7", "--out", dir.string()};
    if (!config_path.empty()) {
      args.push_back("--config");
      args.push_back(config_path);
    }
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    codes[k] = run_cli(static_cast<int>(argv.size()), argv.data());
    std::ifstream in(dir / "scenario_1.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    csv[k] = ss.str();
  }
  r.seconds = since(t0);
  r.pass = codes[0] == 0 && codes[1] == 0 && !csv[0].empty() && csv[0] == csv[1];
  r.detail = "exit codes " + std::to_string(codes[0]) + "/" + std::to_string(codes[1]) + ", " +
             std::to_string(csv[0].size()) + " bytes, " +
             (csv[0] == csv[1] ? "identical" : "different");
  if (csv_out != nullptr) *csv_out = csv[0];
  return r;
}

CheckResult check_safety(int instances, int trajectories, std::uint64_t seed) {
  CheckResult r = named(8, "safety-trajectories");
  auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  int qualified = 0;
  int candidates = 0;
  int violating = 0;
  long violations = 0;
  const int max_candidates = 200 * instances;
  while (qualified < instances && candidates < max_candidates) {
    ++candidates;
    oracle::SmallInstance inst = oracle::random_instance(rng, 2);
    if (DisconnectionFlags::of(inst.psi).any()) continue;
    ValueCache cache;
    SolverOptions opts;
    struct Node {
      StagePolicy policy;
      bool guaranteed;
    };
    std::map<std::pair<int, std::string>, Node> nodes;
    auto node_at = [&](const NetworkState& psi, int t) -> const Node& {
      auto key = std::make_pair(t, exact_key(psi));
      auto it = nodes.find(key);
      if (it != nodes.end()) return it->second;
      StagePolicy p;
      bool ok = false;
      try {
        StageGame g = build_stage_game(psi, t, inst.cfg, &cache, opts);
        p = solve_stage(psi, t, inst.cfg, &cache, opts);
        ok = check_prop1(psi, t, p, g, inst.cfg).guaranteed();
      } catch (const NoFeasibleStage&) {
        ok = false;
      }
      return nodes.emplace(key, Node{p, ok}).first->second;
    };
    bool all_guaranteed = true;
    long local = 0;
    std::mt19937_64 traj_rng(rng());
    for (int n = 0; n < trajectories && all_guaranteed; ++n) {
      NetworkState psi = inst.psi;
      for (int t = 1; t <= inst.cfg.horizon; ++t) {
        const Node& node = node_at(psi, t);
        if (!node.guaranteed) {
          all_guaranteed = false;
          break;
        }
        double u = static_cast<double>(traj_rng() >> 11) * 0x1.0p-53;
        double acc = 0.0;
        Action a = node.policy.q_star.support.back().first;
        for (const auto& [x, p] : node.policy.q_star.support) {
          acc += p;
          if (u < acc) {
            a = x;
            break;
          }
        }
        psi = advance(psi, inst.cfg, a, node.policy.b_star);
        if (DisconnectionFlags::of(psi).any()) {
          ++local;
          break;
        }
      }
    }
    if (!all_guaranteed) continue;
    ++qualified;
    if (local > 0) {
      ++violating;
      violations += local;
    }
  }
  r.seconds = since(t0);
  r.pass = qualified == instances && violating == 0;
  r.detail = std::to_string(qualified) + " qualifying instances of " +
             std::to_string(candidates) + " candidates (need " + std::to_string(instances) +
             "); " + std::to_string(violating) + " of them disconnect in " +
             std::to_string(violations) + " of their trajectories";
  return r;
}

}  // namespace iobt
