#include "iobt/netmodel.hpp"

#include <algorithm>
#include <sstream>

namespace iobt {

bool DeviceType::senses(int j) const {
  return std::binary_search(info.begin(), info.end(), j);
}

double LinkModel::hop(int from, int to) const {
  if (from == to) return 0.0;
  if (packet_size_override.empty() && capacity_override.empty()) return packet_size / capacity;
  double m = packet_size;
  if (auto it = packet_size_override.find(from); it != packet_size_override.end()) {
    m = it->second;
  }
  double r = capacity;
  if (auto it = capacity_override.find({from, to}); it != capacity_override.end()) {
    r = it->second;
  }
  return m / r;
}

double LinkModel::to_gs(int sink_id) const {
  if (auto it = gs_delay_override.find(sink_id); it != gs_delay_override.end()) {
    return it->second;
  }
  return gs_delay;
}

bool LinkModel::uniform() const {
  return packet_size_override.empty() && capacity_override.empty() &&
         gs_delay_override.empty();
}

void GameConfig::validate() const {
  if (H < 1 || M < 1) throw ConfigError("areas and info types must be positive");
  if (types.empty()) throw ConfigError("device type catalog is empty");
  int max_sensors = 0;
  std::vector<bool> covered(M + 1, false);
  for (int k = 0; k < K(); ++k) {
    const DeviceType& t = types[k];
    if (t.type_id != k + 1) throw ConfigError("type ids must be 1..K in order");
    if (t.info.empty()) throw ConfigError("type " + std::to_string(t.type_id) +
                                          " senses nothing");
    if (!std::is_sorted(t.info.begin(), t.info.end()) ||
        std::adjacent_find(t.info.begin(), t.info.end()) != t.info.end()) {
      throw ConfigError("type info sets must be sorted and distinct");
    }
    for (int j : t.info) {
      if (j < 1 || j > M) throw ConfigError("info id out of range");
      covered[j] = true;
    }
    if (t.sensor_count != static_cast<int>(t.info.size())) {
      throw ConfigError("sensor count must equal the number of sensed info types");
    }
    max_sensors = std::max(max_sensors, t.sensor_count);
  }
  for (int j = 1; j <= M; ++j) {
    if (!covered[j]) {
      throw ConfigError("info type " + std::to_string(j) + " has no deployable type");
    }
  }
  if (static_cast<int>(thresholds.size()) != H * M) {
    throw ConfigError("threshold table must have H*M entries");
  }
  for (int v : thresholds) {
    if (v < 0) throw ConfigError("thresholds must be nonnegative");
  }
  if (static_cast<int>(c_type.size()) != K() || static_cast<int>(d_type.size()) != K()) {
    throw ConfigError("per-type cost tables must have K entries");
  }
  for (double v : c_type) {
    if (v < 0) throw ConfigError("costs must be nonnegative");
  }
  for (double v : d_type) {
    if (v < 0) throw ConfigError("costs must be nonnegative");
  }
  if (c_L < 0 || c_CH < 0 || c_aL < 0 || d_L < 0) {
    throw ConfigError("costs must be nonnegative");
  }
  if (nu < 0 || eta < 0 || mu < 0 || lambda < 0) {
    throw ConfigError("normalizers must be nonnegative");
  }
  if (ls_target < 1) throw ConfigError("ls_target must be at least 1");
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (!(sink_weight > max_sensors)) {
    throw ConfigError("sink weight must exceed every device weight");
  }
  if (!(link.packet_size > 0) || !(link.capacity > 0) || !(link.gs_delay > 0)) {
    throw ConfigError("link parameters must be positive");
  }
}

std::string Action::str() const {
  std::ostringstream os;
  switch (kind) {
    case ActionKind::kAttackDevice:
      os << "AttackDevice(" << node << ")";
      break;
    case ActionKind::kAttackLS:
      os << "AttackLS(" << node << "," << area << ")";
      break;
    case ActionKind::kSetCH:
      os << "SetCH(" << node << "," << info << "," << area << ")";
      break;
    case ActionKind::kDeployDevice:
      os << "DeployDevice(" << node << "," << area << ")";
      break;
    case ActionKind::kActivateLS:
      os << "ActivateLS(" << node << "," << area << ")";
      break;
    case ActionKind::kDeployLS:
      os << "DeployLS(" << area << ")";
      break;
  }
  return os.str();
}

bool NetworkState::in_cluster(int i, int j, int h) const {
  const auto& c = clusters[cidx(j, h)];
  return std::binary_search(c.begin(), c.end(), i);
}

std::vector<int> NetworkState::alive_sinks(int h) const {
  std::vector<int> out;
  for (const auto& s : sinks) {
    if (s.alive && s.area == h) out.push_back(s.id);
  }
  return out;
}

int NetworkState::num_sinks(int h) const {
  int n = 0;
  for (const auto& s : sinks) n += (s.alive && s.area == h) ? 1 : 0;
  return n;
}

std::vector<int> NetworkState::alive_devices() const {
  std::vector<int> out;
  for (const auto& d : devices) {
    if (d.alive) out.push_back(d.id);
  }
  return out;
}

NetworkState NetworkState::empty(int H, int M) {
  NetworkState s;
  s.H = H;
  s.M = M;
  s.clusters.assign(H * M, {});
  s.ch.assign(H * M, 0);
  s.activated.assign(H, 0);
  return s;
}

int NetworkState::add_device(const GameConfig& cfg, int tau, int h) {
  int id = total_deployed + 1;
  total_deployed = id;
  devices.resize(id);
  devices[id - 1] = Device{id, tau, h, true};
  for (int j : cfg.type(tau).info) {
    auto& c = clusters[cidx(j, h)];
    c.insert(std::upper_bound(c.begin(), c.end(), id), id);
  }
  return id;
}

int NetworkState::add_sink(int h, double weight) {
  int id = static_cast<int>(sinks.size()) + 1;
  sinks.push_back(LocalSink{id, h, weight, true});
  return id;
}

void NetworkState::check_invariants(const GameConfig& cfg) const {
  auto fail = [](const std::string& m) { throw std::logic_error(m); };
  if (static_cast<int>(clusters.size()) != H * M) fail("cluster table size");
  if (total_deployed < static_cast<int>(devices.size())) fail("N(t) below max id");
  for (int k = 0; k < static_cast<int>(devices.size()); ++k) {
    if (devices[k].id != k + 1) fail("device ids not dense");
  }
  for (int h = 1; h <= H; ++h) {
    for (int j = 1; j <= M; ++j) {
      std::vector<int> expect;
      for (const auto& d : devices) {
        if (d.alive && d.area == h && cfg.type(d.type_id).senses(j)) expect.push_back(d.id);
      }
      if (expect != cluster(j, h)) fail("cluster membership mismatch");
      int f = ch_of(j, h);
      if (f != 0 && !in_cluster(f, j, h)) fail("CH outside its cluster");
    }
    int s = active_sink(h);
    if (s != 0 && (!sink_alive(s) || sink(s).area != h)) fail("activated sink invalid");
  }
}

std::vector<Action> attacker_strategy_set(const NetworkState& psi) {
  std::vector<Action> out;
  for (const auto& d : psi.devices) {
    if (d.alive) out.push_back(Action::AttackDevice(d.id));
  }
  for (const auto& s : psi.sinks) {
    if (s.alive) out.push_back(Action::AttackLS(s.id, s.area));
  }
  return out;
}

std::vector<Action> full_defender_set(const NetworkState& psi, const GameConfig& cfg) {
  std::vector<Action> out;
  for (int j = 1; j <= psi.M; ++j) {
    for (int h = 1; h <= psi.H; ++h) {
      for (int i : psi.cluster(j, h)) out.push_back(Action::SetCH(i, j, h));
    }
  }
  for (int tau = 1; tau <= cfg.K(); ++tau) {
    for (int h = 1; h <= psi.H; ++h) out.push_back(Action::DeployDevice(tau, h));
  }
  for (const auto& s : psi.sinks) {
    if (s.alive) out.push_back(Action::ActivateLS(s.id, s.area));
  }
  for (int h = 1; h <= psi.H; ++h) out.push_back(Action::DeployLS(h));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Y_ih: info types of clusters containing i that fall below threshold once
// the defender observes the loss of i.
std::vector<int> deficient_info(const NetworkState& psi, const GameConfig& cfg, int i) {
  std::vector<int> y;
  int h = psi.device(i).area;
  for (int j : cfg.type(psi.device(i).type_id).info) {
    int n_d = psi.cluster_size(j, h) - 1;
    if (n_d < cfg.threshold(j, h)) y.push_back(j);
  }
  return y;
}

bool e1_holds(const NetworkState& psi, const GameConfig& cfg, const Action& a) {
  if (a.kind != ActionKind::kAttackDevice || !psi.device_alive(a.node)) return false;
  const Device& d = psi.device(a.node);
  for (int j : cfg.type(d.type_id).info) {
    if (psi.cluster_size(j, d.area) <= cfg.threshold(j, d.area)) return true;
  }
  return false;
}

bool covers(const DeviceType& t, const std::vector<int>& y) {
  return std::includes(t.info.begin(), t.info.end(), y.begin(), y.end());
}

void kill_device(NetworkState& s, int i) {
  Device& d = s.devices[i - 1];
  d.alive = false;
  for (int j = 1; j <= s.M; ++j) {
    auto& c = s.clusters[s.cidx(j, d.area)];
    auto it = std::lower_bound(c.begin(), c.end(), i);
    if (it != c.end() && *it == i) c.erase(it);
  }
}

void apply_attack(NetworkState& s, const Action& a, const Action* b) {
  if (a.kind == ActionKind::kAttackDevice) {
    int i = a.node;
    int h = s.device(i).area;
    kill_device(s, i);
    for (int j = 1; j <= s.M; ++j) {
      if (s.ch_of(j, h) == i) s.ch[s.cidx(j, h)] = 0;
    }
  } else if (a.kind == ActionKind::kAttackLS) {
    int l = a.node;
    int h = a.area;
    bool replaced = b != nullptr && b->kind == ActionKind::kDeployLS && b->area == h;
    if (!replaced) s.sinks[l - 1].alive = false;
    if (s.active_sink(h) == l) s.activated[h - 1] = 0;
  }
}

void apply_defense(NetworkState& s, const GameConfig& cfg, const Action& b) {
  switch (b.kind) {
    case ActionKind::kSetCH:
      if (s.device_alive(b.node) && s.in_cluster(b.node, b.info, b.area)) {
        s.ch[s.cidx(b.info, b.area)] = b.node;
      }
      break;
    case ActionKind::kDeployDevice:
      s.add_device(cfg, b.node, b.area);
      break;
    case ActionKind::kActivateLS:
      if (s.sink_alive(b.node) && s.sink(b.node).area == b.area) {
        s.activated[b.area - 1] = b.node;
      }
      break;
    case ActionKind::kDeployLS:
      s.add_sink(b.area, cfg.sink_weight);
      break;
    default:
      throw InvalidAction("not a defender action: " + b.str());
  }
}

}  // namespace

std::vector<Action> defender_strategy_set(const NetworkState& psi, const GameConfig& cfg,
                                          const Action& a) {
  if (!e1_holds(psi, cfg, a)) return full_defender_set(psi, cfg);
  int i = a.node;
  int h = psi.device(i).area;
  std::vector<int> y = deficient_info(psi, cfg, i);
  std::vector<Action> out;
  for (const auto& t : cfg.types) {
    if (covers(t, y)) out.push_back(Action::DeployDevice(t.type_id, h));
  }
  if (out.empty()) {
    throw EmptyFeasibleSet("no device type restores the clusters of device " +
                           std::to_string(i));
  }
  return out;
}

bool defender_action_allowed(const NetworkState& psi, const GameConfig& cfg,
                             const Action& a, const Action& b) {
  if (b.is_attack()) return false;
  if (e1_holds(psi, cfg, a)) {
    if (b.kind != ActionKind::kDeployDevice) return false;
    if (b.area != psi.device(a.node).area) return false;
    return covers(cfg.type(b.node), deficient_info(psi, cfg, a.node));
  }
  switch (b.kind) {
    case ActionKind::kSetCH:
      return b.info >= 1 && b.info <= psi.M && b.area >= 1 && b.area <= psi.H &&
             psi.device_alive(b.node) && psi.in_cluster(b.node, b.info, b.area);
    case ActionKind::kDeployDevice:
      return b.node >= 1 && b.node <= cfg.K() && b.area >= 1 && b.area <= psi.H;
    case ActionKind::kActivateLS:
      return psi.sink_alive(b.node) && psi.sink(b.node).area == b.area;
    case ActionKind::kDeployLS:
      return b.area >= 1 && b.area <= psi.H;
    default:
      return false;
  }
}

std::vector<std::pair<int, int>> threshold_clusters(const NetworkState& psi,
                                                    const GameConfig& cfg) {
  std::vector<std::pair<int, int>> out;
  for (int j = 1; j <= psi.M; ++j) {
    for (int h = 1; h <= psi.H; ++h) {
      if (psi.cluster_size(j, h) == cfg.threshold(j, h)) out.emplace_back(j, h);
    }
  }
  return out;
}

bool is_threshold_restoring(const NetworkState& psi, const GameConfig& cfg,
                            const Action& b) {
  if (b.kind != ActionKind::kDeployDevice) return false;
  const DeviceType& t = cfg.type(b.node);
  for (auto [j, h] : threshold_clusters(psi, cfg)) {
    if (h != b.area) continue;
    for (int i : psi.cluster(j, h)) {
      if (covers(t, deficient_info(psi, cfg, i))) return true;
    }
  }
  return false;
}

std::vector<Action> restricted_attacker_set(const Action& b, const NetworkState& psi,
                                            const GameConfig& cfg) {
  std::vector<Action> all = attacker_strategy_set(psi);
  auto at_threshold = threshold_clusters(psi, cfg);
  if (at_threshold.empty() || is_threshold_restoring(psi, cfg, b)) return all;
  std::vector<bool> excluded(psi.devices.size() + 1, false);
  for (auto [j, h] : at_threshold) {
    for (int i : psi.cluster(j, h)) excluded[i] = true;
  }
  std::vector<Action> out;
  for (const auto& a : all) {
    if (a.kind == ActionKind::kAttackDevice && excluded[a.node]) continue;
    out.push_back(a);
  }
  return out;
}

NetworkState advance(const NetworkState& psi, const GameConfig& cfg, const Action& a,
                     const Action& b) {
  NetworkState s = psi;
  apply_attack(s, a, &b);
  apply_defense(s, cfg, b);
  return s;
}

NetworkState advance_attack_only(const NetworkState& psi, const Action& a) {
  NetworkState s = psi;
  apply_attack(s, a, nullptr);
  return s;
}

NetworkState advance_defense_only(const NetworkState& psi, const GameConfig& cfg,
                                  const Action& b) {
  NetworkState s = psi;
  apply_defense(s, cfg, b);
  return s;
}

ViewPair make_views(const NetworkState& psi) { return ViewPair{psi, psi}; }

ViewPair apply_transition(const ViewPair& views, const GameConfig& cfg, const Action& a,
                          const Action& b, const std::optional<Action>& a_next) {
  const NetworkState& psi = views.attacker_view;
  if (!a.is_attack()) throw InvalidAction("not an attacker action: " + a.str());
  bool legal = a.kind == ActionKind::kAttackDevice ? psi.device_alive(a.node)
                                                    : psi.sink_alive(a.node);
  if (!legal) throw InvalidAction("target is not alive: " + a.str());
  if (!defender_action_allowed(psi, cfg, a, b)) {
    throw InvalidAction(b.str() + " is not available after " + a.str());
  }
  ViewPair out;
  out.attacker_view = advance(psi, cfg, a, b);
  out.defender_view = out.attacker_view;
  if (a_next.has_value()) {
    NetworkState& d = out.defender_view;
    if (a_next->kind == ActionKind::kAttackDevice && d.device_alive(a_next->node)) {
      kill_device(d, a_next->node);
    } else if (a_next->kind == ActionKind::kAttackLS && d.sink_alive(a_next->node)) {
      d.sinks[a_next->node - 1].alive = false;
    }
  }
  return out;
}

std::string canonical_key(const NetworkState& psi) {
  std::ostringstream os;
  os << psi.H << ':' << psi.M;
  for (int h = 1; h <= psi.H; ++h) {
    std::vector<std::pair<int, std::uint32_t>> devs;
    for (const auto& d : psi.devices) {
      if (!d.alive || d.area != h) continue;
      std::uint32_t roles = 0;
      for (int j = 1; j <= psi.M; ++j) {
        if (psi.ch_of(j, h) == d.id) roles |= 1u << (j - 1);
      }
      devs.emplace_back(d.type_id, roles);
    }
    std::sort(devs.begin(), devs.end());
    os << "|A";
    for (std::size_t k = 0; k < devs.size();) {
      std::size_t e = k;
      while (e < devs.size() && devs[e] == devs[k]) ++e;
      os << ' ' << devs[k].first << '.' << devs[k].second << 'x' << (e - k);
      k = e;
    }
    std::vector<std::pair<double, int>> sinks;
    for (const auto& s : psi.sinks) {
      if (s.alive && s.area == h) {
        sinks.emplace_back(s.weight, psi.active_sink(h) == s.id ? 1 : 0);
      }
    }
    std::sort(sinks.begin(), sinks.end());
    os << " L";
    for (const auto& [w, act] : sinks) os << ' ' << w << '.' << act;
  }
  return os.str();
}

std::string exact_key(const NetworkState& psi) {
  std::ostringstream os;
  os << psi.H << ':' << psi.M << ':' << psi.total_deployed << "|D";
  for (const auto& d : psi.devices) {
    if (d.alive) os << ' ' << d.id << '.' << d.type_id << '.' << d.area;
  }
  os << "|F";
  for (int f : psi.ch) os << ' ' << f;
  os << "|L";
  for (const auto& s : psi.sinks) {
    if (s.alive) os << ' ' << s.id << '.' << s.area << '.' << s.weight;
  }
  os << "|S";
  for (int s : psi.activated) os << ' ' << s;
  return os.str();
}

}  // namespace iobt
