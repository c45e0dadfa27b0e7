#include "iobt/connectivity.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace iobt {

std::vector<Action> disconnecting_actions(const Action& b, const NetworkState& psi,
                                          const GameConfig& cfg) {
  std::vector<Action> v;
  for (int j = 1; j <= psi.M; ++j) {
    for (int h = 1; h <= psi.H; ++h) {
      int f = psi.ch_of(j, h);
      if (f == 0) continue;
      if (b.kind == ActionKind::kSetCH && b.info == j && b.area == h) continue;
      v.push_back(Action::AttackDevice(f));
    }
  }
  for (int h = 1; h <= psi.H; ++h) {
    int s = psi.active_sink(h);
    if (s == 0) continue;
    if (b.kind == ActionKind::kActivateLS && b.area == h) continue;
    v.push_back(Action::AttackLS(s, h));
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<Action> allowed = restricted_attacker_set(b, psi, cfg);
  std::vector<Action> out;
  std::set_intersection(v.begin(), v.end(), allowed.begin(), allowed.end(),
                        std::back_inserter(out));
  return out;
}

const char* to_string(Verdict v) {
  return v == Verdict::kGuaranteed ? "Guaranteed" : "NotGuaranteed";
}

namespace {

// Conditions 1-5 for one (a_d, a_n) pair; fills the sets and returns the
// first condition that holds, 0 if none.
int evaluate_pair(const StageGame& g, int ks, int d, int n, WitnessCheck& w) {
  const double inf = std::numeric_limits<double>::infinity();
  w.b1.clear();
  w.b2.clear();
  w.b3.clear();
  w.w.reset();
  w.b_m.reset();
  int arg1 = -1;
  int arg2 = -1;
  double min1 = inf;
  double max2 = -inf;
  bool any_b1 = false;
  bool any_b2 = false;
  for (int k = 0; k < g.nd(); ++k) {
    if (k == ks || !g.coupled(d, k) || !g.coupled(n, k)) continue;
    double dn = g.Fd(n, k) - g.Fd(n, ks);
    double dd = g.Fd(d, k) - g.Fd(d, ks);
    if (dn >= 0 && dd >= 0) {
      any_b1 = true;
      w.b1.push_back(g.defenders[k]);
      if (dn != 0 && dd / dn < min1) {
        min1 = dd / dn;
        arg1 = k;
      }
    } else if (dn < 0 && dd <= 0) {
      any_b2 = true;
      w.b2.push_back(g.defenders[k]);
      if (dd / dn > max2) {
        max2 = dd / dn;
        arg2 = k;
      }
    } else if (dn >= 0 && dd < 0) {
      w.b3.push_back(g.defenders[k]);
    }
  }
  int bm = -1;
  if (any_b1 && !any_b2) bm = arg1;
  if (any_b2) bm = arg2;
  if (bm >= 0) {
    w.b_m = g.defenders[bm];
    w.w = (g.Fd(d, bm) - g.Fd(d, ks)) / (g.Fd(n, bm) - g.Fd(n, ks));
  }

  if (w.b3.empty()) return 1;
  if ((any_b1 || any_b2) && w.w && *w.w * g.Fa(n, ks) > g.Fa(d, ks)) return 2;
  if (any_b1 && any_b2 && arg1 >= 0 && min1 < 1 && min1 <= max2) return 3;
  if (any_b1 && any_b2 && arg1 >= 0 && min1 >= 1 && max2 >= 1) return 4;
  if (!any_b1 && !any_b2 && g.Fa(n, ks) > 0) return 5;
  return 0;
}

}  // namespace

ConnectivityReport check_prop1(const NetworkState& psi, int t, const StagePolicy& policy,
                               const StageGame& g, const GameConfig& cfg) {
  ConnectivityReport rep;
  rep.t = t;
  rep.state = state_key(psi, cfg);
  rep.b_star = policy.b_star;
  auto kit = std::find(g.defenders.begin(), g.defenders.end(), policy.b_star);
  if (kit == g.defenders.end()) throw std::invalid_argument("b* is not a column of the game");
  const int ks = static_cast<int>(kit - g.defenders.begin());

  std::vector<Action> zd = disconnecting_actions(policy.b_star, psi, cfg);
  std::vector<char> in_z(g.na(), 0);
  for (int i = 0; i < g.na(); ++i) {
    if (!g.coupled(i, ks)) continue;
    if (std::binary_search(zd.begin(), zd.end(), g.attackers[i])) {
      in_z[i] = 1;
      rep.z_d.push_back(g.attackers[i]);
    }
  }

  for (int d = 0; d < g.na(); ++d) {
    if (!in_z[d]) continue;
    WitnessCheck w;
    w.a_d = g.attackers[d];
    for (int n = 0; n < g.na(); ++n) {
      if (in_z[n] || !g.coupled(n, ks)) continue;
      int c = evaluate_pair(g, ks, d, n, w);
      if (c != 0) {
        w.a_n = g.attackers[n];
        w.condition = c;
        break;
      }
    }
    if (w.condition == 0) {
      w.b1.clear();
      w.b2.clear();
      w.b3.clear();
      w.w.reset();
      w.b_m.reset();
      rep.verdict = Verdict::kNotGuaranteed;
    }
    rep.checks.push_back(std::move(w));
  }
  return rep;
}

}  // namespace iobt
