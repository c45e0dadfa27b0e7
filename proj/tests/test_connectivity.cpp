#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "iobt/connectivity.hpp"
#include "iobt/oracles.hpp"

namespace iobt {
namespace {

using testing::simple_config;
using testing::simple_state;

bool contains(const std::vector<Action>& v, const Action& a) {
  return std::find(v.begin(), v.end(), a) != v.end();
}

TEST_SUITE("connectivity") {

TEST_CASE("disconnecting actions per defender move") {
  GameConfig cfg = simple_config(2, 2);
  NetworkState s = simple_state(cfg, 3);
  int f11 = s.ch_of(1, 1);

  std::vector<Action> z = disconnecting_actions(Action::SetCH(2, 1, 1), s, cfg);
  CHECK_FALSE(contains(z, Action::AttackDevice(f11)));
  CHECK(contains(z, Action::AttackDevice(s.ch_of(2, 1))));
  CHECK(contains(z, Action::AttackLS(s.active_sink(1), 1)));

  z = disconnecting_actions(Action::DeployLS(1), s, cfg);
  CHECK(contains(z, Action::AttackLS(s.active_sink(1), 1)));
  CHECK(contains(z, Action::AttackDevice(f11)));

  z = disconnecting_actions(Action::ActivateLS(2, 1), s, cfg);
  CHECK_FALSE(contains(z, Action::AttackLS(s.active_sink(1), 1)));
  CHECK(contains(z, Action::AttackLS(s.active_sink(2), 2)));
}

TEST_CASE("nothing to sever") {
  GameConfig cfg = simple_config(2, 2);
  NetworkState s = simple_state(cfg, 2);
  std::fill(s.ch.begin(), s.ch.end(), 0);
  std::fill(s.activated.begin(), s.activated.end(), 0);
  for (const auto& b : full_defender_set(s, cfg)) {
    CHECK(disconnecting_actions(b, s, cfg).empty());
  }
}

TEST_CASE("empty Z_D is vacuously guaranteed") {
  GameConfig cfg = simple_config(1, 1);
  NetworkState s = simple_state(cfg, 2);
  StageGame g;
  g.resize(1, 1);
  g.attackers[0] = Action::AttackDevice(2);
  g.defenders[0] = Action::DeployLS(1);
  StagePolicy p;
  p.b_star = g.defenders[0];
  p.q_star.support = {{g.attackers[0], 1.0}};
  ConnectivityReport r = check_prop1(s, 1, p, g, cfg);
  CHECK(r.z_d.empty());
  CHECK(r.guaranteed());
}

TEST_CASE("condition 5 with no shared comparison columns") {
  GameConfig cfg = simple_config(1, 1);
  NetworkState s = simple_state(cfg, 2);
  StageGame g;
  g.resize(2, 2);
  g.attackers = {Action::AttackDevice(1), Action::AttackDevice(2)};  // CH, then member
  g.defenders = {Action::DeployLS(1), Action::SetCH(2, 1, 1)};
  // Column 1 is better for the defender against a_n and worse against a_d.
  g.fa = {3, 0, 5, 0};
  g.fd = {0, -1, 0, 1};
  StagePolicy p;
  p.b_star = g.defenders[0];
  ConnectivityReport r = check_prop1(s, 1, p, g, cfg);
  REQUIRE(r.z_d == std::vector<Action>{Action::AttackDevice(1)});
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].condition == 5);
  CHECK(r.checks[0].b1.empty());
  CHECK(r.checks[0].b2.empty());
  CHECK(r.checks[0].b3.size() == 1);
  CHECK(r.checks[0].a_n == Action::AttackDevice(2));
  CHECK(r.guaranteed());
}

TEST_CASE("a lone column satisfies condition 1") {
  GameConfig cfg = simple_config(1, 1);
  NetworkState s = simple_state(cfg, 2);
  StageGame g;
  g.resize(2, 1);
  g.attackers = {Action::AttackDevice(1), Action::AttackDevice(2)};
  g.defenders = {Action::DeployLS(1)};
  g.fa = {3, -5};
  g.fd = {0, 0};
  g.coupling = {1, 1};
  StagePolicy p;
  p.b_star = g.defenders[0];
  // Only column is b*, so B1..B3 are empty and F_a(a_n, b*) < 0.
  ConnectivityReport r = check_prop1(s, 1, p, g, cfg);
  CHECK(r.checks.at(0).condition == 1);
}

TEST_CASE("reports cover every attack in Z_D") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 30; ++k) {
    oracle::SmallInstance inst = oracle::random_instance(rng, 1);
    ValueCache cache;
    StagePolicy p;
    StageGame g;
    try {
      g = build_stage_game(inst.psi, 1, inst.cfg, &cache, {});
      p = solve_stage(inst.psi, 1, inst.cfg, &cache);
    } catch (const NoFeasibleStage&) {
      continue;
    }
    ConnectivityReport r = check_prop1(inst.psi, 1, p, g, inst.cfg);
    CHECK(r.checks.size() == r.z_d.size());
    bool all = std::all_of(r.checks.begin(), r.checks.end(),
                           [](const WitnessCheck& w) { return w.condition > 0; });
    CHECK(r.guaranteed() == all);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace iobt
