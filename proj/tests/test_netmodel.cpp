#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "iobt/netmodel.hpp"

namespace iobt {
namespace {

using testing::simple_config;
using testing::simple_state;

bool contains(const std::vector<Action>& v, const Action& a) {
  return std::find(v.begin(), v.end(), a) != v.end();
}

TEST_SUITE("netmodel") {

TEST_CASE("attacker set lists alive devices and sinks") {
  GameConfig cfg = simple_config(1, 2);
  NetworkState s = NetworkState::empty(1, 2);
  s.add_device(cfg, 1, 1);
  s.add_device(cfg, 2, 1);
  for (int k = 0; k < 5; ++k) s.add_sink(1, 15.0);
  for (int k = 0; k < 4; ++k) s.sinks[k].alive = false;
  std::vector<Action> want = {Action::AttackDevice(1), Action::AttackDevice(2),
                              Action::AttackLS(5, 1)};
  CHECK(attacker_strategy_set(s) == want);

  s.devices[0].alive = false;
  s.devices[1].alive = false;
  CHECK(attacker_strategy_set(s) == std::vector<Action>{Action::AttackLS(5, 1)});
}

TEST_CASE("attacker set matches a direct re-enumeration") {
  std::mt19937_64 rng(3);
  GameConfig cfg = simple_config(3, 2);
  NetworkState s = simple_state(cfg, 1);
  for (auto& d : s.devices) d.alive = rng() % 3 != 0;
  for (auto& l : s.sinks) l.alive = rng() % 2 != 0;
  std::vector<Action> got = attacker_strategy_set(s);
  std::size_t n = 0;
  for (const auto& d : s.devices) n += d.alive;
  for (const auto& l : s.sinks) n += l.alive;
  CHECK(got.size() == n);
  for (const auto& a : got) {
    if (a.kind == ActionKind::kAttackDevice) CHECK(s.device_alive(a.node));
    if (a.kind == ActionKind::kAttackLS) CHECK(s.sink_alive(a.node));
  }
}

TEST_CASE("defender set after an attack") {
  GameConfig cfg = simple_config(1, 2, {{1, 2}});
  cfg.thresholds = {2, 2};
  NetworkState s = simple_state(cfg, 5);  // N = N_th + 3
  std::vector<Action> full = full_defender_set(s, cfg);

  SUBCASE("slack cluster gives the full set") {
    CHECK(defender_strategy_set(s, cfg, Action::AttackDevice(2)) == full);
  }
  SUBCASE("sink attack gives the full set") {
    CHECK(defender_strategy_set(s, cfg, Action::AttackLS(1, 1)) == full);
  }
  SUBCASE("cluster at threshold forces a covering deployment") {
    cfg.thresholds = {5, 2};
    std::vector<Action> got = defender_strategy_set(s, cfg, Action::AttackDevice(2));
    std::vector<Action> want = {Action::DeployDevice(1, 1), Action::DeployDevice(3, 1)};
    CHECK(got == want);
  }
}

TEST_CASE("restricted attacker set") {
  GameConfig cfg = simple_config(1, 2);
  cfg.thresholds = {3, 1};
  NetworkState s = simple_state(cfg, 3);
  std::vector<Action> all = attacker_strategy_set(s);

  SUBCASE("no cluster at threshold") {
    cfg.thresholds = {1, 1};
    CHECK(restricted_attacker_set(Action::ActivateLS(2, 1), s, cfg) == all);
  }
  SUBCASE("non-restoring move drops attacks on the tight cluster") {
    std::vector<Action> got = restricted_attacker_set(Action::ActivateLS(2, 1), s, cfg);
    CHECK(got.size() == all.size() - 3);
    for (int i : s.cluster(1, 1)) CHECK_FALSE(contains(got, Action::AttackDevice(i)));
  }
  SUBCASE("restoring deployment keeps the full set") {
    CHECK(restricted_attacker_set(Action::DeployDevice(1, 1), s, cfg) == all);
  }
}

TEST_CASE("transitions") {
  GameConfig cfg = simple_config(1, 2);
  NetworkState s = simple_state(cfg, 3);

  SUBCASE("device replaced by a fresh deployment") {
    NetworkState n = advance(s, cfg, Action::AttackDevice(3), Action::DeployDevice(2, 1));
    CHECK_FALSE(n.device_alive(3));
    CHECK(n.total_deployed == 7);
    CHECK(n.device_alive(7));
    CHECK(n.cluster(1, 1) == std::vector<int>{1, 2});
    CHECK(n.cluster(2, 1) == std::vector<int>{4, 5, 6, 7});
    n.check_invariants(cfg);
  }
  SUBCASE("sink attack with a sink deployment") {
    // The attacked sink survives when the defender deploys a sink.
    NetworkState n = advance(s, cfg, Action::AttackLS(2, 1), Action::DeployLS(1));
    CHECK(n.sink_alive(2));
    CHECK(n.sinks.size() == 3);
    CHECK(n.sink_alive(3));
    CHECK(n.active_sink(1) == 1);
  }
  SUBCASE("sink attack otherwise removes the sink") {
    NetworkState n = advance(s, cfg, Action::AttackLS(2, 1), Action::SetCH(2, 1, 1));
    CHECK_FALSE(n.sink_alive(2));
  }
  SUBCASE("non-CH loss with a sink activation") {
    NetworkState n = advance(s, cfg, Action::AttackDevice(2), Action::ActivateLS(2, 1));
    CHECK(n.cluster_size(1, 1) == 2);
    CHECK(n.ch_of(1, 1) == 1);
    CHECK(n.active_sink(1) == 2);
  }
  SUBCASE("losing the CH leaves the cluster headless") {
    NetworkState n = advance(s, cfg, Action::AttackDevice(1), Action::ActivateLS(1, 1));
    CHECK(n.ch_of(1, 1) == 0);
  }
}

TEST_CASE("canonical key") {
  GameConfig cfg = simple_config(1, 2);
  NetworkState s = simple_state(cfg, 3);

  NetworkState swapped = s;
  swapped.devices[1].alive = false;  // drop 2, keep 3
  NetworkState other = s;
  other.devices[2].alive = false;  // drop 3, keep 2
  for (NetworkState* p : {&swapped, &other}) {
    auto& c = p->clusters[p->cidx(1, 1)];
    c.erase(std::remove_if(c.begin(), c.end(), [&](int i) { return !p->device_alive(i); }),
            c.end());
  }
  CHECK(canonical_key(swapped) == canonical_key(other));
  CHECK(exact_key(swapped) != exact_key(other));

  NetworkState moved = s;
  moved.ch[moved.cidx(1, 1)] = 0;
  CHECK(canonical_key(moved) != canonical_key(s));
}

TEST_CASE("canonical key ignores insertion order") {
  GameConfig cfg = simple_config(2, 2, {{1, 2}});
  std::mt19937_64 rng(9);
  std::vector<std::pair<int, int>> devs;
  for (int k = 0; k < 10; ++k) devs.emplace_back(1 + rng() % 3, 1 + rng() % 2);
  std::string first;
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(devs.begin(), devs.end(), rng);
    NetworkState s = NetworkState::empty(2, 2);
    for (auto [tau, h] : devs) s.add_device(cfg, tau, h);
    for (int h = 1; h <= 2; ++h) s.add_sink(h, 15.0);
    std::string key = canonical_key(s);
    if (trial == 0) first = key;
    CHECK(key == first);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace iobt
