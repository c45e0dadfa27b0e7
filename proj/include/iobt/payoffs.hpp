#ifndef IOBT_PAYOFFS_HPP_
#define IOBT_PAYOFFS_HPP_

#include <stdexcept>
#include <utility>
#include <vector>

#include "iobt/netmodel.hpp"

namespace iobt {

class UnhandledCase : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PayoffTerms {
  double s_d = 0.0;
  double latency = 0.0;
  double c_a = 0.0;
  double c_d = 0.0;
  double u_d = 0.0;
};

// z_h = 1 when area h has no activated sink; z_jh = 1 when cluster (j,h)
// has no CH or its area is disconnected.
struct DisconnectionFlags {
  std::vector<int> z_h;   // index h - 1
  std::vector<int> z_jh;  // index (j - 1) * H + (h - 1)

  static DisconnectionFlags of(const NetworkState& psi);
  bool any() const;
};

// Stage payoff terms for every (a, b) pair of one state. Per-cluster
// quantities are computed once so that filling a payoff table stays cheap.
class PayoffEvaluator {
 public:
  PayoffEvaluator(const NetworkState& psi, const GameConfig& cfg);
  PayoffEvaluator(const NetworkState& psi, const GameConfig& cfg,
                  const DisconnectionFlags& flags);

  double disconnected_weight(const Action& a, const Action& b) const;
  // Same case table with sink weights and reconnection credits removed.
  double disconnected_sensors(const Action& a, const Action& b) const;
  double latency(const Action& a, const Action& b) const;
  double attack_cost(const Action& a) const;
  // Cost and utility of b. When an observed attack is given, cluster and
  // sink counts are those of the defender's view after that attack.
  std::pair<double, double> deploy_cost_and_utility(const Action& b,
                                                    const Action* observed = nullptr) const;

  PayoffTerms terms(const Action& a, const Action& b) const;
  double attacker_payoff(const Action& a, const Action& b) const;
  double defender_payoff(const Action& a, const Action& b) const;
  std::pair<double, double> payoffs(const Action& a, const Action& b) const;

  const DisconnectionFlags& flags() const { return flags_; }
  double cluster_weight(int j, int h) const;  // W_jh
  double area_weight(int h) const;            // W_h

 private:
  struct ClusterInfo {
    int ch = 0;
    int top_arg = 0;  // member with the largest delay towards the CH
    double top1 = 0.0;
    double top2 = 0.0;
  };

  struct LatencyPlan {
    std::vector<signed char> area_mode;  // -1 follows z_h, 0 off, 1 on
    std::vector<int> sink;
    int removed = 0;
    int plus_area = 0;
    int plus_type = 0;
    int rehead_c = -1;
    int rehead_k = 0;
  };

  void init();
  LatencyPlan base_plan(int removed) const;
  double evaluate(const LatencyPlan& plan) const;
  double cluster_latency(int c, int ch, int sink, int removed, bool plus) const;
  bool member(int i, int j, int h) const;
  bool is_ch(int i, int j, int h) const { return psi_.ch_of(j, h) == i; }

  double sd_device(const Action& a, const Action& b, bool sensors) const;
  double sd_sink(const Action& a, const Action& b, bool sensors) const;
  double lat_device(const Action& a, const Action& b) const;
  double lat_sink(const Action& a, const Action& b) const;

  const NetworkState& psi_;
  const GameConfig& cfg_;
  DisconnectionFlags flags_;
  std::vector<ClusterInfo> clusters_;
  std::vector<double> area_sensor_weight_;
  int new_id_ = 0;
};

DisconnectionFlags disconnection_flags(const NetworkState& psi);

double attack_cost(const Action& a, const NetworkState& psi, const GameConfig& cfg);
std::pair<double, double> deploy_cost_and_utility(const Action& b, const NetworkState& psi,
                                                  const GameConfig& cfg);
double disconnected_weight(const Action& a, const Action& b, const NetworkState& psi,
                           const GameConfig& cfg, const DisconnectionFlags& flags);
double latency(const Action& a, const Action& b, const NetworkState& psi,
               const GameConfig& cfg, const DisconnectionFlags& flags);
double attacker_payoff(const Action& a, const Action& b, const NetworkState& psi,
                       const GameConfig& cfg);
double defender_payoff(const Action& a, const Action& b, const NetworkState& psi,
                       const GameConfig& cfg);

}  // namespace iobt

#endif  // IOBT_PAYOFFS_HPP_
