#ifndef IOBT_NETMODEL_HPP_
#define IOBT_NETMODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iobt {

class EmptyFeasibleSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DeviceType {
  int type_id = 0;
  int sensor_count = 0;   // N_tau
  std::vector<int> info;  // H_tau, sorted, 1-based info ids

  bool senses(int j) const;
};

struct Device {
  int id = 0;
  int type_id = 0;
  int area = 0;
  bool alive = true;
};

struct LocalSink {
  int id = 0;
  int area = 0;
  double weight = 0.0;
  bool alive = true;
};

// Single-hop delay model. Uniform values apply unless an override is
// present. Node codes: device i -> i, sink l -> -l.
struct LinkModel {
  double packet_size = 1.0;
  double capacity = 100.0;
  double gs_delay = 0.01;
  std::map<int, double> packet_size_override;
  std::map<std::pair<int, int>, double> capacity_override;
  std::map<int, double> gs_delay_override;

  static int device_node(int id) { return id; }
  static int sink_node(int id) { return -id; }

  // Lambda(from, to) = m_from / R_(from,to); zero for a node to itself.
  double hop(int from, int to) const;
  double to_gs(int sink_id) const;
  bool uniform() const;
};

struct GameConfig {
  int H = 0;
  int M = 0;
  std::vector<DeviceType> types;  // index tau - 1
  std::vector<int> thresholds;    // index (j - 1) * H + (h - 1)
  std::vector<double> c_type;     // attack cost per type
  std::vector<double> d_type;     // deployment cost per type
  double c_L = 0.0;
  double c_CH = 0.0;
  double c_aL = 0.0;
  double d_L = 0.0;
  double nu = 1.0;
  double eta = 1.0;
  double mu = 100.0;
  double lambda = 1.0;
  double sink_weight = 15.0;  // w_L given to deployed sinks
  int ls_target = 3;          // B
  int horizon = 1;            // T
  LinkModel link;

  int K() const { return static_cast<int>(types.size()); }
  int threshold(int j, int h) const { return thresholds[(j - 1) * H + (h - 1)]; }
  const DeviceType& type(int tau) const { return types[tau - 1]; }

  // Throws ConfigError on inconsistent dimensions or degenerate settings.
  void validate() const;
};

enum class ActionKind : std::uint8_t {
  kAttackDevice = 0,
  kAttackLS = 1,
  kSetCH = 2,
  kDeployDevice = 3,
  kActivateLS = 4,
  kDeployLS = 5,
};

// node holds the device id, sink id or type id depending on the kind.
struct Action {
  ActionKind kind = ActionKind::kAttackDevice;
  int node = 0;
  int info = 0;
  int area = 0;

  static Action AttackDevice(int i) { return {ActionKind::kAttackDevice, i, 0, 0}; }
  static Action AttackLS(int l, int h) { return {ActionKind::kAttackLS, l, 0, h}; }
  static Action SetCH(int i, int j, int h) { return {ActionKind::kSetCH, i, j, h}; }
  static Action DeployDevice(int tau, int h) {
    return {ActionKind::kDeployDevice, tau, 0, h};
  }
  static Action ActivateLS(int l, int h) { return {ActionKind::kActivateLS, l, 0, h}; }
  static Action DeployLS(int h) { return {ActionKind::kDeployLS, 0, 0, h}; }

  bool is_attack() const {
    return kind == ActionKind::kAttackDevice || kind == ActionKind::kAttackLS;
  }
  std::string str() const;

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

struct NetworkState {
  int H = 0;
  int M = 0;
  std::vector<Device> devices;            // index id - 1
  std::vector<std::vector<int>> clusters;  // index (j - 1) * H + (h - 1), sorted ids
  std::vector<int> ch;                     // f_jh, 0 when none
  std::vector<LocalSink> sinks;            // index id - 1
  std::vector<int> activated;              // s_h, index h - 1
  int total_deployed = 0;                  // N(t)

  int cidx(int j, int h) const { return (j - 1) * H + (h - 1); }
  const std::vector<int>& cluster(int j, int h) const { return clusters[cidx(j, h)]; }
  int cluster_size(int j, int h) const {
    return static_cast<int>(clusters[cidx(j, h)].size());
  }
  int ch_of(int j, int h) const { return ch[cidx(j, h)]; }
  int active_sink(int h) const { return activated[h - 1]; }
  const Device& device(int id) const { return devices[id - 1]; }
  const LocalSink& sink(int id) const { return sinks[id - 1]; }
  bool device_alive(int id) const {
    return id >= 1 && id <= static_cast<int>(devices.size()) && devices[id - 1].alive;
  }
  bool sink_alive(int id) const {
    return id >= 1 && id <= static_cast<int>(sinks.size()) && sinks[id - 1].alive;
  }
  bool in_cluster(int i, int j, int h) const;
  std::vector<int> alive_sinks(int h) const;
  int num_sinks(int h) const;
  std::vector<int> alive_devices() const;

  // Empty network with the given dimensions.
  static NetworkState empty(int H, int M);
  // Adds a device with a fresh id N(t)+1 and places it in its clusters.
  int add_device(const GameConfig& cfg, int tau, int h);
  // Adds an alive, non-activated sink with id max+1.
  int add_sink(int h, double weight);

  // Throws std::logic_error if the cluster, CH or sink invariants fail.
  void check_invariants(const GameConfig& cfg) const;
};

struct ViewPair {
  NetworkState attacker_view;
  NetworkState defender_view;
};

std::vector<Action> attacker_strategy_set(const NetworkState& psi);

// Q_d: every defender move available in psi, in canonical order.
std::vector<Action> full_defender_set(const NetworkState& psi, const GameConfig& cfg);

std::vector<Action> defender_strategy_set(const NetworkState& psi, const GameConfig& cfg,
                                          const Action& a);

bool defender_action_allowed(const NetworkState& psi, const GameConfig& cfg,
                             const Action& a, const Action& b);

// Clusters at exactly their threshold.
std::vector<std::pair<int, int>> threshold_clusters(const NetworkState& psi,
                                                    const GameConfig& cfg);

// True when b is a deployment that restores the clusters of some attacked
// member of a cluster at threshold.
bool is_threshold_restoring(const NetworkState& psi, const GameConfig& cfg,
                            const Action& b);

std::vector<Action> restricted_attacker_set(const Action& b, const NetworkState& psi,
                                            const GameConfig& cfg);

// Ground-truth stage update. Does not check legality of b.
NetworkState advance(const NetworkState& psi, const GameConfig& cfg, const Action& a,
                     const Action& b);

// State after only the attacker's move or only the defender's move.
NetworkState advance_attack_only(const NetworkState& psi, const Action& a);
NetworkState advance_defense_only(const NetworkState& psi, const GameConfig& cfg,
                                  const Action& b);

ViewPair make_views(const NetworkState& psi);

ViewPair apply_transition(const ViewPair& views, const GameConfig& cfg, const Action& a,
                          const Action& b, const std::optional<Action>& a_next);

// Identical for states equal up to relabeling of exchangeable devices.
std::string canonical_key(const NetworkState& psi);

// Identity-preserving key, for link models with per-node overrides.
std::string exact_key(const NetworkState& psi);

}  // namespace iobt

#endif  // IOBT_NETMODEL_HPP_
