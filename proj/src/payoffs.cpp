#include "iobt/payoffs.hpp"

#include <algorithm>

namespace iobt {

DisconnectionFlags DisconnectionFlags::of(const NetworkState& psi) {
  DisconnectionFlags f;
  f.z_h.assign(psi.H, 0);
  f.z_jh.assign(psi.H * psi.M, 0);
  for (int h = 1; h <= psi.H; ++h) f.z_h[h - 1] = psi.active_sink(h) == 0 ? 1 : 0;
  for (int j = 1; j <= psi.M; ++j) {
    for (int h = 1; h <= psi.H; ++h) {
      int c = psi.cidx(j, h);
      f.z_jh[c] = (psi.ch[c] == 0 || f.z_h[h - 1]) ? 1 : 0;
    }
  }
  return f;
}

bool DisconnectionFlags::any() const {
  return std::any_of(z_h.begin(), z_h.end(), [](int z) { return z != 0; }) ||
         std::any_of(z_jh.begin(), z_jh.end(), [](int z) { return z != 0; });
}

DisconnectionFlags disconnection_flags(const NetworkState& psi) {
  return DisconnectionFlags::of(psi);
}

PayoffEvaluator::PayoffEvaluator(const NetworkState& psi, const GameConfig& cfg)
    : psi_(psi), cfg_(cfg), flags_(DisconnectionFlags::of(psi)) {
  init();
}

PayoffEvaluator::PayoffEvaluator(const NetworkState& psi, const GameConfig& cfg,
                                 const DisconnectionFlags& flags)
    : psi_(psi), cfg_(cfg), flags_(flags) {
  init();
}

void PayoffEvaluator::init() {
  new_id_ = psi_.total_deployed + 1;
  const LinkModel& link = cfg_.link;
  clusters_.assign(psi_.H * psi_.M, {});
  for (int j = 1; j <= psi_.M; ++j) {
    for (int h = 1; h <= psi_.H; ++h) {
      int c = psi_.cidx(j, h);
      ClusterInfo& ci = clusters_[c];
      ci.ch = psi_.ch[c];
      if (ci.ch == 0) continue;
      for (int n : psi_.clusters[c]) {
        double d = link.hop(n, ci.ch);
        if (d > ci.top1 || ci.top_arg == 0) {
          ci.top2 = ci.top1;
          ci.top1 = d;
          ci.top_arg = n;
        } else if (d > ci.top2) {
          ci.top2 = d;
        }
      }
    }
  }
  area_sensor_weight_.assign(psi_.H, 0.0);
  for (const auto& d : psi_.devices) {
    if (d.alive) area_sensor_weight_[d.area - 1] += cfg_.type(d.type_id).sensor_count;
  }
}

bool PayoffEvaluator::member(int i, int j, int h) const {
  if (!psi_.device_alive(i)) return false;
  const Device& d = psi_.device(i);
  return d.area == h && cfg_.type(d.type_id).senses(j);
}

double PayoffEvaluator::cluster_weight(int j, int h) const {
  return static_cast<double>(psi_.cluster_size(j, h));
}

double PayoffEvaluator::area_weight(int h) const {
  int s = psi_.active_sink(h);
  return area_sensor_weight_[h - 1] + (s != 0 ? psi_.sink(s).weight : 0.0);
}

double PayoffEvaluator::attack_cost(const Action& a) const {
  if (a.kind == ActionKind::kAttackDevice) {
    const Device& d = psi_.device(a.node);
    int heads = 0;
    for (int j = 1; j <= psi_.M; ++j) heads += is_ch(a.node, j, d.area) ? 1 : 0;
    return cfg_.c_type[d.type_id - 1] + heads * cfg_.c_CH;
  }
  if (a.kind == ActionKind::kAttackLS) {
    double y = psi_.active_sink(a.area) == a.node ? 1.0 : 0.0;
    return cfg_.c_L + y * cfg_.c_aL;
  }
  throw UnhandledCase("attack cost of " + a.str());
}

std::pair<double, double> PayoffEvaluator::deploy_cost_and_utility(
    const Action& b, const Action* observed) const {
  const bool lost_device = observed != nullptr && observed->kind == ActionKind::kAttackDevice;
  const bool lost_sink = observed != nullptr && observed->kind == ActionKind::kAttackLS;
  if (b.kind == ActionKind::kDeployDevice) {
    const DeviceType& t = cfg_.type(b.node);
    int restored = 0;
    for (int j : t.info) {
      int n = psi_.cluster_size(j, b.area);
      if (lost_device && member(observed->node, j, b.area)) --n;
      if (n < cfg_.threshold(j, b.area)) ++restored;
    }
    return {cfg_.d_type[b.node - 1], static_cast<double>(restored)};
  }
  if (b.kind == ActionKind::kDeployLS) {
    int l = psi_.num_sinks(b.area);
    if (lost_sink && observed->area == b.area) --l;
    return {cfg_.d_L, static_cast<double>(std::max(0, cfg_.ls_target - l))};
  }
  return {0.0, 0.0};
}

// ---- S_D ------------------------------------------------------------------

double PayoffEvaluator::sd_device(const Action& a, const Action& b, bool sensors) const {
  const int i = a.node;
  const Device& dev = psi_.device(i);
  const int hi = dev.area;
  const DeviceType& ti = cfg_.type(dev.type_id);

  // sum over clusters containing i of x W_jh + (1 - x)
  auto destroyed = [&]() {
    double s = 0.0;
    for (int j : ti.info) {
      double x = is_ch(i, j, hi) ? 1.0 : 0.0;
      s += x * cluster_weight(j, hi) + (1.0 - x);
    }
    return s;
  };

  switch (b.kind) {
    case ActionKind::kSetCH: {
      double credit = flags_.z_jh[psi_.cidx(b.info, b.area)] * cluster_weight(b.info, b.area);
      return destroyed() - (sensors ? 0.0 : credit);
    }
    case ActionKind::kDeployDevice: {
      const int hp = b.area;
      if (hp != hi) return destroyed();
      const DeviceType& tk = cfg_.type(b.node);
      double s = 0.0;
      for (int j : ti.info) {
        double x = is_ch(i, j, hp) ? 1.0 : 0.0;
        if (!tk.senses(j)) {
          s += x * cluster_weight(j, hp);
        } else {
          s += x * (cluster_weight(j, hp) + 1.0);
        }
        s += 1.0 - x;
      }
      return s;
    }
    case ActionKind::kActivateLS: {
      double credit = flags_.z_h[b.area - 1] * area_weight(b.area);
      return destroyed() - (sensors ? 0.0 : credit);
    }
    case ActionKind::kDeployLS:
      return destroyed();
    default:
      throw UnhandledCase(a.str() + " vs " + b.str());
  }
}

double PayoffEvaluator::sd_sink(const Action& a, const Action& b, bool sensors) const {
  const int m = a.node;
  const int hp = a.area;
  const double y = psi_.active_sink(hp) == m ? 1.0 : 0.0;
  const double w_area = sensors ? area_sensor_weight_[hp - 1] : area_weight(hp);
  const double w_sink = sensors ? 0.0 : psi_.sink(m).weight;
  const double lost = y * w_area + (1.0 - y) * w_sink;

  switch (b.kind) {
    case ActionKind::kActivateLS: {
      const int hpp = b.area;
      double credit = sensors ? 0.0 : flags_.z_h[hpp - 1] * area_weight(hpp);
      if (hpp == hp) {
        // Activating the sink that is being destroyed restores nothing.
        if (b.node == m) return lost;
        return -credit;
      }
      return lost - credit;
    }
    case ActionKind::kDeployLS:
      return lost;
    case ActionKind::kDeployDevice: {
      if (b.area != hp) return lost;
      return y * (w_area + cfg_.type(b.node).sensor_count) + (1.0 - y) * w_sink;
    }
    case ActionKind::kSetCH:
      return lost;
    default:
      throw UnhandledCase(a.str() + " vs " + b.str());
  }
}

double PayoffEvaluator::disconnected_weight(const Action& a, const Action& b) const {
  if (a.kind == ActionKind::kAttackDevice) return sd_device(a, b, false);
  if (a.kind == ActionKind::kAttackLS) return sd_sink(a, b, false);
  throw UnhandledCase(a.str() + " vs " + b.str());
}

double PayoffEvaluator::disconnected_sensors(const Action& a, const Action& b) const {
  if (a.kind == ActionKind::kAttackDevice) return sd_device(a, b, true);
  if (a.kind == ActionKind::kAttackLS) return sd_sink(a, b, true);
  throw UnhandledCase(a.str() + " vs " + b.str());
}

// ---- latency ----------------------------------------------------------------

double PayoffEvaluator::cluster_latency(int c, int ch, int sink, int removed,
                                        bool plus) const {
  const LinkModel& link = cfg_.link;
  double inner = 0.0;
  const ClusterInfo& ci = clusters_[c];
  if (ch == ci.ch && ch != 0) {
    if (removed != 0 && removed == ci.top_arg) {
      inner = ci.top2;
    } else {
      inner = ci.top1;
    }
  } else {
    for (int n : psi_.clusters[c]) {
      if (n != removed) inner = std::max(inner, link.hop(n, ch));
    }
  }
  if (plus) inner = std::max(inner, link.hop(new_id_, ch));
  return link.hop(ch, LinkModel::sink_node(sink)) + inner;
}

PayoffEvaluator::LatencyPlan PayoffEvaluator::base_plan(int removed) const {
  LatencyPlan p;
  p.area_mode.assign(psi_.H, -1);
  p.sink.assign(psi_.activated.begin(), psi_.activated.end());
  p.removed = removed;
  return p;
}

// max over areas of (max over clusters of Lambda_jh) + Lambda_g, with the
// gating described by the plan.
double PayoffEvaluator::evaluate(const LatencyPlan& p) const {
  double best = 0.0;
  for (int h = 1; h <= psi_.H; ++h) {
    int mode = p.area_mode[h - 1];
    bool on = mode < 0 ? flags_.z_h[h - 1] == 0 : mode == 1;
    int sink = p.sink[h - 1];
    if (!on || sink == 0) continue;
    double inner = 0.0;
    for (int j = 1; j <= psi_.M; ++j) {
      int c = psi_.cidx(j, h);
      bool removed_here = p.removed != 0 && member(p.removed, j, h);
      bool plus = p.plus_area == h && cfg_.type(p.plus_type).senses(j);
      if (c == p.rehead_c) {
        if (p.rehead_k == p.removed) continue;
        inner = std::max(inner, cluster_latency(c, p.rehead_k, sink,
                                                removed_here ? p.removed : 0, plus));
        continue;
      }
      int f = psi_.ch[c];
      if (f == 0) continue;
      if (removed_here && f == p.removed) continue;
      inner = std::max(inner,
                       cluster_latency(c, f, sink, removed_here ? p.removed : 0, plus));
    }
    best = std::max(best, inner + cfg_.link.to_gs(sink));
  }
  return best;
}

double PayoffEvaluator::lat_device(const Action& a, const Action& b) const {
  LatencyPlan p = base_plan(a.node);
  switch (b.kind) {
    case ActionKind::kSetCH:
      // The re-headed cluster reports through its new CH k.
      p.rehead_c = psi_.cidx(b.info, b.area);
      p.rehead_k = b.node;
      return evaluate(p);
    case ActionKind::kDeployDevice:
      // Both area placements: the new device joins the clusters of H_k in h'.
      p.plus_area = b.area;
      p.plus_type = b.node;
      return evaluate(p);
    case ActionKind::kActivateLS:
      // Area h'' reports through sink k whether or not it was disconnected.
      p.area_mode[b.area - 1] = 1;
      p.sink[b.area - 1] = b.node;
      return evaluate(p);
    case ActionKind::kDeployLS:
      return evaluate(p);
    default:
      throw UnhandledCase(a.str() + " vs " + b.str());
  }
}

double PayoffEvaluator::lat_sink(const Action& a, const Action& b) const {
  const int m = a.node;
  const int hp = a.area;
  LatencyPlan p = base_plan(0);
  // The attacked area stays connected only if m was not its activated sink.
  if (psi_.active_sink(hp) == m) p.area_mode[hp - 1] = 0;
  switch (b.kind) {
    case ActionKind::kActivateLS:
      if (b.node != m) {
        p.area_mode[b.area - 1] = 1;
        p.sink[b.area - 1] = b.node;
      }
      return evaluate(p);
    case ActionKind::kDeployLS:
      return evaluate(p);
    case ActionKind::kDeployDevice:
      p.plus_area = b.area;
      p.plus_type = b.node;
      return evaluate(p);
    case ActionKind::kSetCH:
      p.rehead_c = psi_.cidx(b.info, b.area);
      p.rehead_k = b.node;
      return evaluate(p);
    default:
      throw UnhandledCase(a.str() + " vs " + b.str());
  }
}

double PayoffEvaluator::latency(const Action& a, const Action& b) const {
  if (a.kind == ActionKind::kAttackDevice) return lat_device(a, b);
  if (a.kind == ActionKind::kAttackLS) return lat_sink(a, b);
  throw UnhandledCase(a.str() + " vs " + b.str());
}

PayoffTerms PayoffEvaluator::terms(const Action& a, const Action& b) const {
  PayoffTerms t;
  t.s_d = disconnected_weight(a, b);
  t.latency = latency(a, b);
  t.c_a = attack_cost(a);
  auto [c_d, u_d] = deploy_cost_and_utility(b, &a);
  t.c_d = c_d;
  t.u_d = u_d;
  return t;
}

double PayoffEvaluator::attacker_payoff(const Action& a, const Action& b) const {
  return disconnected_weight(a, b) - cfg_.nu * attack_cost(a);
}

double PayoffEvaluator::defender_payoff(const Action& a, const Action& b) const {
  PayoffTerms t = terms(a, b);
  return t.u_d - cfg_.eta * t.s_d - cfg_.mu * t.latency - cfg_.lambda * t.c_d;
}

std::pair<double, double> PayoffEvaluator::payoffs(const Action& a, const Action& b) const {
  PayoffTerms t = terms(a, b);
  return {t.s_d - cfg_.nu * t.c_a,
          t.u_d - cfg_.eta * t.s_d - cfg_.mu * t.latency - cfg_.lambda * t.c_d};
}

double attack_cost(const Action& a, const NetworkState& psi, const GameConfig& cfg) {
  return PayoffEvaluator(psi, cfg).attack_cost(a);
}

std::pair<double, double> deploy_cost_and_utility(const Action& b, const NetworkState& psi,
                                                  const GameConfig& cfg) {
  return PayoffEvaluator(psi, cfg).deploy_cost_and_utility(b);
}

double disconnected_weight(const Action& a, const Action& b, const NetworkState& psi,
                           const GameConfig& cfg, const DisconnectionFlags& flags) {
  return PayoffEvaluator(psi, cfg, flags).disconnected_weight(a, b);
}

double latency(const Action& a, const Action& b, const NetworkState& psi,
               const GameConfig& cfg, const DisconnectionFlags& flags) {
  return PayoffEvaluator(psi, cfg, flags).latency(a, b);
}

double attacker_payoff(const Action& a, const Action& b, const NetworkState& psi,
                       const GameConfig& cfg) {
  return PayoffEvaluator(psi, cfg).attacker_payoff(a, b);
}

double defender_payoff(const Action& a, const Action& b, const NetworkState& psi,
                       const GameConfig& cfg) {
  return PayoffEvaluator(psi, cfg).defender_payoff(a, b);
}

}  // namespace iobt
