#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "iobt/fse.hpp"
#include "iobt/harness.hpp"
#include "iobt/oracles.hpp"

namespace iobt {
namespace {

using testing::simple_config;
using testing::simple_state;

StageGame from_tables(const std::vector<std::vector<double>>& fa,
                      const std::vector<std::vector<double>>& fd) {
  StageGame g;
  g.resize(static_cast<int>(fa.size()), static_cast<int>(fa[0].size()));
  for (int i = 0; i < g.na(); ++i) {
    g.attackers[i] = Action::AttackDevice(i + 1);
    for (int k = 0; k < g.nd(); ++k) {
      g.defenders[k] = Action::DeployLS(k + 1);
      g.fa[i * g.nd() + k] = fa[i][k];
      g.fd[i * g.nd() + k] = fd[i][k];
    }
  }
  return g;
}

TEST_SUITE("fse") {

TEST_CASE("one-by-one game") {
  StageGame g = from_tables({{4.0}}, {{-1.0}});
  StageSolution s = solve_stage_game(g);
  CHECK(s.b == 0);
  CHECK(s.q == std::vector<double>{1.0});
  CHECK(s.value_a == 4.0);
}

TEST_CASE("two-by-two game against the grid search") {
  StageGame g = from_tables({{3, 1}, {2, 2}}, {{0, 1}, {1, 0}});
  StageSolution s = solve_stage_game(g);
  // Leader mixes to keep the follower on column 0: q0 <= 1/2, value 2.5.
  CHECK(s.b == 0);
  CHECK(s.value_a == doctest::Approx(2.5));
  CHECK(s.value_a == doctest::Approx(oracle::grid_leader_value(g, 1e-3)).epsilon(2e-3));
}

TEST_CASE("random games against the grid search") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 25; ++k) {
    StageGame g = oracle::random_stage_game(rng, 4, 4);
    StageSolution s = solve_stage_game(g);
    double o = oracle::grid_leader_value(g, 1e-3);
    REQUIRE((s.b >= 0) == std::isfinite(o));
    if (s.b >= 0) CHECK(std::fabs(s.value_a - o) <= 2e-3);
  }
}

TEST_CASE("stage LP value of an uncoupled column") {
  StageGame g = from_tables({{1, 2}}, {{0, 0}});
  g.coupling[1] = 0;
  CHECK_FALSE(stage_lp_value(g, 1).has_value());
  CHECK(stage_lp_value(g, 0).value() == doctest::Approx(1.0));
}

TEST_CASE("continuation past the horizon is zero") {
  oracle::SmallInstance inst = oracle::tiny_instance(2);
  ValueCache cache;
  auto v = continuation_values(inst.psi, 3, inst.cfg, &cache);
  CHECK(v.first == 0);
  CHECK(v.second == 0);
}

TEST_CASE("horizon one collapses to the one-shot game") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    oracle::SmallInstance inst = oracle::random_instance(rng, 1);
    ValueCache cache;
    StagePolicy f, n;
    try {
      f = solve_stage(inst.psi, 1, inst.cfg, &cache);
    } catch (const NoFeasibleStage&) {
      continue;
    }
    n = solve_nfse(inst.psi, inst.cfg);
    CHECK(f.b_star == n.b_star);
    CHECK(f.omega_a == doctest::Approx(n.omega_a));
    auto v = continuation_values(inst.psi, 1, inst.cfg, &cache);
    CHECK(v.first == doctest::Approx(f.omega_a));
    CHECK(v.second == doctest::Approx(f.omega_d));
  }
}

TEST_CASE("nfse ignores the horizon") {
  oracle::SmallInstance inst = oracle::tiny_instance(1);
  StagePolicy a = solve_nfse(inst.psi, inst.cfg);
  inst.cfg.horizon = 4;
  StagePolicy b = solve_nfse(inst.psi, inst.cfg);
  CHECK(a.b_star == b.b_star);
  CHECK(a.omega_a == b.omega_a);
  CHECK(a.q_star.support.size() == b.q_star.support.size());
}

TEST_CASE("backward induction matches the game tree") {
  oracle::SmallInstance inst = oracle::tiny_instance(2);
  ValueCache cache;
  auto v = continuation_values(inst.psi, 1, inst.cfg, &cache);
  auto o = oracle::tree_values(inst.psi, 2, inst.cfg);
  CHECK(v.first == doctest::Approx(o.first).epsilon(1e-6));
  CHECK(v.second == doctest::Approx(o.second).epsilon(1e-6));
}

TEST_CASE("equal probability policy") {
  GameConfig cfg = simple_config(5, 1);
  NetworkState s = simple_state(cfg, 2);
  MixedStrategy q = equal_probability_policy(s);
  CHECK(q.support.size() == 5);
  for (const auto& [a, p] : q.support) {
    CHECK(a.kind == ActionKind::kAttackLS);
    CHECK(p == doctest::Approx(0.2));
  }
  s.activated[0] = s.activated[1] = 0;
  q = equal_probability_policy(s);
  CHECK(q.support.size() == 3);
  CHECK(q.support[0].second == doctest::Approx(1.0 / 3));
  s.activated[2] = s.activated[3] = 0;
  q = equal_probability_policy(s);
  CHECK(q.prob(Action::AttackLS(s.activated[4], 5)) == doctest::Approx(1.0));
}

TEST_CASE("simulation is reproducible") {
  oracle::SmallInstance inst = oracle::tiny_instance(2);
  auto a = simulate(inst.psi, inst.cfg, Mode::kFSE, 42, 3);
  auto b = simulate(inst.psi, inst.cfg, Mode::kFSE, 42, 3);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() == 6);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].sampled == b[k].sampled);
    CHECK(a[k].played_b == b[k].played_b);
    CHECK(a[k].expected_nd == b[k].expected_nd);
  }
}

TEST_CASE("single-atom simulation") {
  GameConfig cfg = simple_config(1, 1);
  NetworkState s = NetworkState::empty(1, 1);
  s.add_sink(1, 15);
  s.activated[0] = 1;
  auto recs = simulate(s, cfg, Mode::kNFSE, 1, 1);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].sampled == Action::AttackLS(1, 1));
}

TEST_CASE("at zero LS cost the attacker mixes over the activated sinks") {
  ExperimentConfig ec = default_config();
  ec.game.c_L = 0;
  ec.game.c_aL = 0;
  GameConfig cfg = scaled_game(ec, 0.1);
  NetworkState psi = generate_instance(cfg, scaled_instance(ec, 0.1), 7);
  StagePolicy p = solve_nfse(psi, cfg);
  double on_sinks = 0.0;
  for (const auto& [a, q] : p.q_star.support) {
    if (a.kind == ActionKind::kAttackLS && psi.active_sink(a.area) == a.node) on_sinks += q;
  }
  CHECK(on_sinks == doctest::Approx(1.0));
}

}  // TEST_SUITE

}  // namespace
}  // namespace iobt
