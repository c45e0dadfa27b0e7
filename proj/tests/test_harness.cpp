#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "iobt/checks.hpp"
#include "iobt/harness.hpp"

namespace iobt {
namespace {

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "iobt");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

TEST_SUITE("harness") {

TEST_CASE("generated instances meet thresholds") {
  ExperimentConfig ec = default_config();
  GameConfig cfg = scaled_game(ec, 0.5);
  InstanceSpec spec = scaled_instance(ec, 0.5);
  CHECK(spec.devices_per_area == 100);
  NetworkState s = generate_instance(cfg, spec, 3);
  CHECK(s.H == 5);
  s.check_invariants(cfg);
  for (int h = 1; h <= s.H; ++h) {
    for (int j = 1; j <= s.M; ++j) CHECK(s.cluster_size(j, h) >= cfg.threshold(j, h));
    CHECK(s.active_sink(h) != 0);
  }
  for (const auto& d : s.devices) {
    int n = 0;
    for (int j = 1; j <= s.M; ++j) n += s.in_cluster(d.id, j, d.area);
    CHECK(n == cfg.type(d.type_id).sensor_count);
    if (d.type_id == 6) CHECK(n == 4);
  }
}

TEST_CASE("generation is seeded") {
  ExperimentConfig ec = default_config();
  GameConfig cfg = scaled_game(ec, 0.1);
  InstanceSpec spec = scaled_instance(ec, 0.1);
  CHECK(exact_key(generate_instance(cfg, spec, 5)) == exact_key(generate_instance(cfg, spec, 5)));
  CHECK(exact_key(generate_instance(cfg, spec, 5)) != exact_key(generate_instance(cfg, spec, 6)));
}

TEST_CASE("impossible thresholds fail loudly") {
  ExperimentConfig ec = default_config();
  GameConfig cfg = scaled_game(ec, 0.1);
  std::fill(cfg.thresholds.begin(), cfg.thresholds.end(), 500);
  InstanceSpec spec = scaled_instance(ec, 0.1);
  spec.max_attempts = 5;
  CHECK_THROWS_AS(generate_instance(cfg, spec, 1), InfeasibleInstance);
}

TEST_CASE("area and cluster masses") {
  ExperimentConfig ec = default_config();
  GameConfig cfg = scaled_game(ec, 0.1);
  NetworkState s = generate_instance(cfg, scaled_instance(ec, 0.1), 2);
  MixedStrategy eq = equal_probability_policy(s);
  CHECK(heaviest_area_mass(s, cfg, eq) == doctest::Approx(0.2));
  for (const auto& [a, p] : eq.support) {
    MixedStrategy one;
    one.support = {{a, 1.0}};
    double m = heaviest_area_mass(s, cfg, one);
    CHECK((m == 0.0 || m == 1.0));
  }
}

TEST_CASE("metrics are plain means") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<StageRecord> recs(37);
  double ph = 0, pc = 0, nd = 0;
  for (auto& r : recs) {
    r.p_h = u(rng);
    r.p_c_max = u(rng);
    r.expected_nd = 50 * u(rng);
    ph += r.p_h;
    pc += r.p_c_max;
    nd += r.expected_nd;
  }
  Metrics m = extract_metrics(recs);
  CHECK(m.p_h == doctest::Approx(ph / 37));
  CHECK(m.p_c_max == doctest::Approx(pc / 37));
  CHECK(m.n_d == doctest::Approx(nd / 37));
}

TEST_CASE("scenario grids") {
  CHECK(scenario_definition(1).values == std::vector<double>{0, 50, 100, 150, 200});
  CHECK(scenario_definition(2).values == std::vector<double>{0, 20, 40, 60, 80, 100});
  CHECK(scenario_definition(3).horizons == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("config parsing") {
  ExperimentConfig ec = parse_config(R"({"costs": {"c_L": 75}, "scenario": {"runs": 3}})");
  CHECK(ec.game.c_L == 75);
  CHECK(ec.runs == 3);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"costs": {"c_L": -1}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("csv round trip") {
  std::vector<MetricsRow> rows(2);
  rows[0] = {1, "fse", 50, 2, 0.25, 0.5, 12.75, 0, 7};
  rows[1] = {1, "nfse", 100, 1, 1.0 / 3, 0, 20, 0, 7};
  std::ostringstream os;
  write_csv(os, rows);
  std::vector<MetricsRow> back = parse_csv(os.str());
  REQUIRE(back.size() == 2);
  CHECK(back[1].mode == "nfse");
  CHECK(back[1].p_h == doctest::Approx(1.0 / 3));
  CHECK(back[0].n_d == 12.75);
}

TEST_CASE("cli exit codes") {
  CHECK(cli({"solve", "--config", "/nonexistent.json"}) == 2);
  CHECK(cli({"scenario", "--scenario", "9"}) == 2);
  CHECK(cli({"bogus"}) == 2);
}

TEST_CASE("cli solve writes a report") {
  auto dir = std::filesystem::temp_directory_path() / "iobt_cli_solve";
  std::filesystem::remove_all(dir);
  CHECK(cli({"solve", "--scale", "0.1", "--mode", "nfse", "--seed", "3", "--out",
             dir.string()}) == 0);
  CHECK(std::filesystem::exists(dir / "solve.json"));
}

TEST_CASE("cli scenario rows") {
  auto dir = std::filesystem::temp_directory_path() / "iobt_cli_scenario";
  std::filesystem::remove_all(dir);
  CHECK(cli({"scenario", "--scenario", "2", "--scale", "0.1", "--runs", "1", "--mode", "nfse",
             "--out", dir.string()}) == 0);
  std::ifstream in(dir / "scenario_2.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  std::vector<MetricsRow> rows = parse_csv(ss.str());
  CHECK(rows.size() == 6);
  CHECK(std::filesystem::exists(dir / "scenario_2.dat"));
}

}  // TEST_SUITE

}  // namespace
}  // namespace iobt
