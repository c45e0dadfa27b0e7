#include "doctest.h"
#include "fixtures.hpp"
#include "iobt/payoffs.hpp"

namespace iobt {
namespace {

using testing::simple_config;
using testing::simple_state;

TEST_SUITE("payoffs") {

TEST_CASE("attack costs") {
  GameConfig cfg = simple_config(1, 4, {{1, 2, 3, 4}});
  NetworkState s = simple_state(cfg, 2);
  CHECK(attack_cost(Action::AttackDevice(2), s, cfg) == doctest::Approx(0.5));

  cfg.c_aL = 100;
  cfg.c_L = 50;
  CHECK(attack_cost(Action::AttackLS(1, 1), s, cfg) == doctest::Approx(150));
  CHECK(attack_cost(Action::AttackLS(2, 1), s, cfg) == doctest::Approx(50));

  // A four-sensor device heading two clusters.
  int id = s.add_device(cfg, 5, 1);
  s.ch[s.cidx(1, 1)] = id;
  s.ch[s.cidx(3, 1)] = id;
  CHECK(attack_cost(Action::AttackDevice(id), s, cfg) == doctest::Approx(2 + 2 * 20));
}

TEST_CASE("deployment cost and utility") {
  GameConfig cfg = simple_config(1, 4, {{1, 2, 3, 4}});
  cfg.ls_target = 3;
  NetworkState s = simple_state(cfg, 2);
  auto ls = deploy_cost_and_utility(Action::DeployLS(1), s, cfg);
  CHECK(ls.first == doctest::Approx(50));
  CHECK(ls.second == doctest::Approx(1));

  cfg.thresholds = {3, 3, 1, 1};
  auto dev = deploy_cost_and_utility(Action::DeployDevice(5, 1), s, cfg);
  CHECK(dev.first == doctest::Approx(cfg.d_type[4]));
  CHECK(dev.second == doctest::Approx(2));

  auto none = deploy_cost_and_utility(Action::SetCH(2, 1, 1), s, cfg);
  CHECK(none.first == 0);
  CHECK(none.second == 0);
}

TEST_CASE("disconnected weight") {
  GameConfig cfg = simple_config(1, 2);
  cfg.sink_weight = 15;

  SUBCASE("plain device loss") {
    NetworkState s = simple_state(cfg, 3);
    DisconnectionFlags f = DisconnectionFlags::of(s);
    CHECK(disconnected_weight(Action::AttackDevice(2), Action::SetCH(5, 2, 1), s, cfg, f) ==
          doctest::Approx(1));
  }
  SUBCASE("CH of a fifteen-device cluster") {
    NetworkState s = simple_state(cfg, 15);
    DisconnectionFlags f = DisconnectionFlags::of(s);
    CHECK(disconnected_weight(Action::AttackDevice(1), Action::DeployLS(1), s, cfg, f) ==
          doctest::Approx(15));
  }
  SUBCASE("active sink replaced inside its own area") {
    NetworkState s = simple_state(cfg, 10);
    DisconnectionFlags f = DisconnectionFlags::of(s);
    CHECK(disconnected_weight(Action::AttackLS(1, 1), Action::ActivateLS(2, 1), s, cfg, f) ==
          doctest::Approx(0));
  }
  SUBCASE("active sink lost while another area is served") {
    GameConfig two = simple_config(2, 2);
    NetworkState s = simple_state(two, 10);
    DisconnectionFlags f = DisconnectionFlags::of(s);
    PayoffEvaluator ev(s, two);
    CHECK(ev.area_weight(1) == doctest::Approx(35));
    CHECK(disconnected_weight(Action::AttackLS(1, 1), Action::ActivateLS(4, 2), s, two, f) ==
          doctest::Approx(35));
    CHECK(disconnected_weight(Action::AttackLS(2, 1), Action::ActivateLS(4, 2), s, two, f) ==
          doctest::Approx(15));
  }
}

TEST_CASE("latency of a single cluster") {
  GameConfig cfg = simple_config(1, 1);
  cfg.link.packet_size = 1;
  cfg.link.capacity = 1;
  cfg.link.gs_delay = 1;
  NetworkState s = simple_state(cfg, 3);
  DisconnectionFlags f = DisconnectionFlags::of(s);
  CHECK(latency(Action::AttackDevice(2), Action::SetCH(1, 1, 1), s, cfg, f) ==
        doctest::Approx(3));
}

TEST_CASE("fully disconnected network has no latency") {
  GameConfig cfg = simple_config(1, 2);
  NetworkState s = simple_state(cfg, 2);
  s.activated[0] = 0;
  DisconnectionFlags f = DisconnectionFlags::of(s);
  CHECK(f.any());
  CHECK(latency(Action::AttackDevice(2), Action::DeployLS(1), s, cfg, f) == 0);
}

TEST_CASE("payoff composition") {
  GameConfig cfg = simple_config(1, 2);
  cfg.c_CH = 0;
  cfg.nu = 1;
  NetworkState s = simple_state(cfg, 15);
  PayoffEvaluator ev(s, cfg);
  Action a = Action::AttackDevice(1);
  Action b = Action::DeployLS(1);
  PayoffTerms t = ev.terms(a, b);
  CHECK(t.s_d == doctest::Approx(15));
  CHECK(t.c_a == doctest::Approx(0.5));
  CHECK(ev.attacker_payoff(a, b) == doctest::Approx(14.5));
  CHECK(ev.defender_payoff(a, b) ==
        doctest::Approx(t.u_d - cfg.eta * t.s_d - cfg.mu * t.latency - cfg.lambda * t.c_d));

  cfg.nu = 0;
  PayoffEvaluator ev0(s, cfg);
  CHECK(ev0.attacker_payoff(a, b) == doctest::Approx(15));

  cfg.mu = 0;
  PayoffEvaluator ev1(s, cfg);
  CHECK(ev1.defender_payoff(a, b) ==
        doctest::Approx(t.u_d - cfg.eta * t.s_d - cfg.lambda * t.c_d));
}

TEST_CASE("evaluator agrees with the free functions") {
  GameConfig cfg = simple_config(2, 2, {{1, 2}});
  NetworkState s = simple_state(cfg, 3);
  s.add_device(cfg, 3, 2);
  PayoffEvaluator ev(s, cfg);
  for (const auto& a : attacker_strategy_set(s)) {
    for (const auto& b : full_defender_set(s, cfg)) {
      CHECK(ev.attacker_payoff(a, b) == doctest::Approx(attacker_payoff(a, b, s, cfg)));
      CHECK(ev.defender_payoff(a, b) == doctest::Approx(defender_payoff(a, b, s, cfg)));
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace iobt
