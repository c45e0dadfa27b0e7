#ifndef IOBT_CONNECTIVITY_HPP_
#define IOBT_CONNECTIVITY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "iobt/fse.hpp"
#include "iobt/netmodel.hpp"

namespace iobt {

// Attacks that disconnect a cluster or an area when the defender plays b,
// restricted to S'_a(b, psi).
std::vector<Action> disconnecting_actions(const Action& b, const NetworkState& psi,
                                          const GameConfig& cfg);

struct WitnessCheck {
  Action a_d;
  std::optional<Action> a_n;
  int condition = 0;  // 1..5, 0 when no witness was found
  std::vector<Action> b1;
  std::vector<Action> b2;
  std::vector<Action> b3;
  std::optional<double> w;
  std::optional<Action> b_m;
};

enum class Verdict { kGuaranteed, kNotGuaranteed };

struct ConnectivityReport {
  int t = 0;
  std::string state;
  Action b_star;
  std::vector<Action> z_d;
  std::vector<WitnessCheck> checks;
  Verdict verdict = Verdict::kGuaranteed;

  bool guaranteed() const { return verdict == Verdict::kGuaranteed; }
};

const char* to_string(Verdict v);

// Conditions for the attacks in Z_D(b*) to carry no probability. g holds
// the payoff-plus-continuation tables of the stage; policy.b_star must be
// one of its columns.
ConnectivityReport check_prop1(const NetworkState& psi, int t, const StagePolicy& policy,
                               const StageGame& g, const GameConfig& cfg);

}  // namespace iobt

#endif  // IOBT_CONNECTIVITY_HPP_
