#include "iobt/fse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "iobt/lp.hpp"
#include "iobt/payoffs.hpp"

namespace iobt {

double MixedStrategy::prob(const Action& a) const {
  double p = 0.0;
  for (const auto& [x, q] : support) {
    if (x == a) p += q;
  }
  return p;
}

double MixedStrategy::total() const {
  double s = 0.0;
  for (const auto& e : support) s += e.second;
  return s;
}

void StageGame::resize(int num_attackers, int num_defenders) {
  std::size_t n = static_cast<std::size_t>(num_attackers) * num_defenders;
  attackers.resize(num_attackers);
  defenders.resize(num_defenders);
  fa.assign(n, 0.0);
  fd.assign(n, 0.0);
  coupling.assign(n, 1);
}

namespace {

constexpr double kTieEps = 1e-9;
constexpr double kRowTol = 1e-9;
constexpr int kRowsPerRound = 8;

struct ColumnLp {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> q;  // per attacker row
};

// LP for column k with follower rows added lazily. The returned point
// satisfies every follower row within kRowTol, so it is optimal for the
// full LP as well.
ColumnLp solve_column(const StageGame& g, int k) {
  ColumnLp out;
  const int nd = g.nd();
  std::vector<int> vars;
  for (int i = 0; i < g.na(); ++i) {
    if (g.coupled(i, k)) vars.push_back(i);
  }
  if (vars.empty()) return out;
  const int nv = static_cast<int>(vars.size());

  auto row_of = [&](int k2) {
    std::vector<double> row(nv);
    for (int v = 0; v < nv; ++v) {
      int i = vars[v];
      row[v] = (g.coupled(i, k2) ? g.Fd(i, k2) : 0.0) - g.Fd(i, k);
    }
    return row;
  };

  LinearProgram lp;
  lp.c.resize(nv);
  for (int v = 0; v < nv; ++v) lp.c[v] = g.Fa(vars[v], k);
  lp.add_row(std::vector<double>(nv, 1.0), 1.0, true);
  std::vector<char> active(nd, 0);
  active[k] = 1;

  for (;;) {
    LPSolution sol = solve_lp(lp);
    if (sol.status != LPStatus::kOptimal) return out;
    std::vector<std::pair<int, double>> support;
    double base = 0.0;
    for (int v = 0; v < nv; ++v) {
      if (sol.x[v] == 0.0) continue;
      support.emplace_back(vars[v], sol.x[v]);
      base += sol.x[v] * g.Fd(vars[v], k);
    }
    std::vector<std::pair<double, int>> violated;
    for (int k2 = 0; k2 < nd; ++k2) {
      if (active[k2]) continue;
      double lhs = -base;
      for (const auto& [i, x] : support) {
        if (g.coupled(i, k2)) lhs += x * g.Fd(i, k2);
      }
      if (lhs > kRowTol) violated.emplace_back(-lhs, k2);
    }
    if (violated.empty()) {
      out.feasible = true;
      out.value = sol.value;
      out.q.assign(g.na(), 0.0);
      for (int v = 0; v < nv; ++v) out.q[vars[v]] = sol.x[v];
      return out;
    }
    std::sort(violated.begin(), violated.end());
    int take = std::min<int>(kRowsPerRound, static_cast<int>(violated.size()));
    for (int r = 0; r < take; ++r) {
      int k2 = violated[r].second;
      active[k2] = 1;
      lp.add_row(row_of(k2), 0.0);
    }
  }
}

}  // namespace

std::optional<double> stage_lp_value(const StageGame& g, int k) {
  ColumnLp c = solve_column(g, k);
  if (!c.feasible) return std::nullopt;
  return c.value;
}

StageSolution solve_stage_game(const StageGame& g) {
  StageSolution out;
  const int nd = g.nd();
  std::vector<double> bound(nd, -std::numeric_limits<double>::infinity());
  std::vector<int> order;
  for (int k = 0; k < nd; ++k) {
    bool any = false;
    for (int i = 0; i < g.na(); ++i) {
      if (!g.coupled(i, k)) continue;
      any = true;
      bound[k] = std::max(bound[k], g.Fa(i, k));
    }
    if (any) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return bound[x] > bound[y]; });

  double best = -std::numeric_limits<double>::infinity();
  std::vector<ColumnLp> solved(nd);
  for (int k : order) {
    if (bound[k] < best - kTieEps) break;
    solved[k] = solve_column(g, k);
    ++out.lps_solved;
    if (solved[k].feasible) best = std::max(best, solved[k].value);
  }
  for (int k = 0; k < nd; ++k) {
    if (solved[k].feasible && solved[k].value >= best - kTieEps) {
      out.b = k;
      out.q = solved[k].q;
      out.value_a = solved[k].value;
      out.value_d = 0.0;
      for (int i = 0; i < g.na(); ++i) out.value_d += out.q[i] * g.Fd(i, k);
      break;
    }
  }
  return out;
}

std::optional<std::pair<double, double>> ValueCache::find(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void ValueCache::insert(const std::string& key, std::pair<double, double> v) {
  std::lock_guard<std::mutex> lock(mu_);
  map_.emplace(key, v);
}

std::size_t ValueCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

void ValueCache::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  map_.clear();
}

std::string state_key(const NetworkState& psi, const GameConfig& cfg) {
  return cfg.link.uniform() ? canonical_key(psi) : exact_key(psi);
}

namespace {

std::vector<Action> prune_deployments(std::vector<Action> ds, const NetworkState& psi,
                                      const GameConfig& cfg) {
  PayoffEvaluator ev(psi, cfg);
  std::vector<std::pair<double, double>> cu(ds.size());
  for (std::size_t k = 0; k < ds.size(); ++k) cu[k] = ev.deploy_cost_and_utility(ds[k]);
  auto deployment = [](const Action& b) {
    return b.kind == ActionKind::kDeployDevice || b.kind == ActionKind::kDeployLS;
  };
  std::vector<Action> out;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    bool dominated = false;
    if (deployment(ds[k])) {
      for (std::size_t o = 0; o < ds.size() && !dominated; ++o) {
        if (o == k || ds[o].kind != ds[k].kind || ds[o].area != ds[k].area) continue;
        bool weak = cu[o].first <= cu[k].first && cu[o].second >= cu[k].second;
        bool strict = cu[o].first < cu[k].first || cu[o].second > cu[k].second;
        dominated = weak && strict;
      }
    }
    if (!dominated) out.push_back(ds[k]);
  }
  return out;
}

std::pair<double, double> stage_value(const NetworkState& psi, int remaining,
                                      const GameConfig& cfg, ValueCache* cache,
                                      const SolverOptions& opts);

std::string cache_key(const NetworkState& psi, int remaining, const GameConfig& cfg,
                      const SolverOptions& opts) {
  char mode = 'x';
  if (remaining > 1) mode = opts.continuation == Continuation::kSeparable ? 's' : 'x';
  return std::string(1, mode) + std::to_string(remaining) + '|' + state_key(psi, cfg);
}

StageGame build_tables(const NetworkState& psi, int remaining, const GameConfig& cfg,
                       ValueCache* cache, const SolverOptions& opts) {
  StageGame g;
  g.attackers = attacker_strategy_set(psi);
  g.defenders = full_defender_set(psi, cfg);
  if (opts.prune_deployments) g.defenders = prune_deployments(g.defenders, psi, cfg);
  const int na = g.na();
  const int nd = g.nd();
  g.fa.assign(static_cast<std::size_t>(na) * nd, 0.0);
  g.fd.assign(static_cast<std::size_t>(na) * nd, 0.0);
  g.coupling.assign(static_cast<std::size_t>(na) * nd, 0);

  for (int k = 0; k < nd; ++k) {
    std::vector<Action> allowed = restricted_attacker_set(g.defenders[k], psi, cfg);
    for (int i = 0; i < na; ++i) {
      bool in = std::binary_search(allowed.begin(), allowed.end(), g.attackers[i]) &&
                defender_action_allowed(psi, cfg, g.attackers[i], g.defenders[k]);
      g.coupling[i * nd + k] = in ? 1 : 0;
    }
  }

  PayoffEvaluator ev(psi, cfg);
  for (int i = 0; i < na; ++i) {
    for (int k = 0; k < nd; ++k) {
      if (!g.coupled(i, k)) continue;
      auto [pa, pd] = ev.payoffs(g.attackers[i], g.defenders[k]);
      g.fa[i * nd + k] = pa;
      g.fd[i * nd + k] = pd;
    }
  }

  const int rest = remaining - 1;
  if (rest <= 0 || opts.continuation == Continuation::kNone) return g;

  if (opts.continuation == Continuation::kExact) {
    for (int i = 0; i < na; ++i) {
      for (int k = 0; k < nd; ++k) {
        if (!g.coupled(i, k)) continue;
        NetworkState child = advance(psi, cfg, g.attackers[i], g.defenders[k]);
        auto [oa, od] = stage_value(child, rest, cfg, cache, opts);
        g.fa[i * nd + k] += oa;
        g.fd[i * nd + k] += od;
      }
    }
    return g;
  }

  // Separable: rest * [V1(after a) + V1(after b) - V1(psi)].
  SolverOptions one = opts;
  one.continuation = Continuation::kNone;
  auto base = stage_value(psi, 1, cfg, cache, one);
  std::vector<std::pair<double, double>> va(na), vb(nd);
  std::vector<char> need_a(na, 0), need_b(nd, 0);
  for (int i = 0; i < na; ++i) {
    for (int k = 0; k < nd; ++k) {
      if (g.coupled(i, k)) need_a[i] = need_b[k] = 1;
    }
  }
  for (int i = 0; i < na; ++i) {
    if (need_a[i]) va[i] = stage_value(advance_attack_only(psi, g.attackers[i]), 1, cfg, cache, one);
  }
  for (int k = 0; k < nd; ++k) {
    if (need_b[k]) {
      vb[k] = stage_value(advance_defense_only(psi, cfg, g.defenders[k]), 1, cfg, cache, one);
    }
  }
  for (int i = 0; i < na; ++i) {
    for (int k = 0; k < nd; ++k) {
      if (!g.coupled(i, k)) continue;
      g.fa[i * nd + k] += rest * (va[i].first + vb[k].first - base.first);
      g.fd[i * nd + k] += rest * (va[i].second + vb[k].second - base.second);
    }
  }
  return g;
}

StagePolicy policy_from(const StageGame& g, const StageSolution& sol) {
  if (sol.b < 0) throw NoFeasibleStage("every stage LP is infeasible");
  StagePolicy p;
  p.b_star = g.defenders[sol.b];
  p.omega_a = sol.value_a;
  p.omega_d = sol.value_d;
  for (int i = 0; i < g.na(); ++i) {
    if (sol.q[i] > 1e-12) p.q_star.support.emplace_back(g.attackers[i], sol.q[i]);
  }
  return p;
}

std::pair<double, double> stage_value(const NetworkState& psi, int remaining,
                                      const GameConfig& cfg, ValueCache* cache,
                                      const SolverOptions& opts) {
  if (remaining <= 0) return {0.0, 0.0};
  std::string key;
  if (cache != nullptr && opts.use_cache) {
    key = cache_key(psi, remaining, cfg, opts);
    if (auto v = cache->find(key)) return *v;
  }
  StageGame g = build_tables(psi, remaining, cfg, cache, opts);
  StageSolution sol = solve_stage_game(g);
  if (sol.b < 0) throw NoFeasibleStage("every stage LP is infeasible");
  std::pair<double, double> v{sol.value_a, sol.value_d};
  if (cache != nullptr && opts.use_cache) cache->insert(key, v);
  return v;
}

int remaining_at(int t, const GameConfig& cfg) { return cfg.horizon - t + 1; }

}  // namespace

StageGame build_stage_game(const NetworkState& psi, int t, const GameConfig& cfg,
                           ValueCache* cache, const SolverOptions& opts) {
  return build_tables(psi, remaining_at(t, cfg), cfg, cache, opts);
}

StagePolicy solve_stage(const NetworkState& psi, int t, const GameConfig& cfg,
                        ValueCache* cache, const SolverOptions& opts) {
  if (t < 1 || t > cfg.horizon) throw std::invalid_argument("stage out of range");
  StageGame g = build_stage_game(psi, t, cfg, cache, opts);
  StagePolicy p = policy_from(g, solve_stage_game(g));
  if (cache != nullptr && opts.use_cache) {
    cache->insert(cache_key(psi, remaining_at(t, cfg), cfg, opts), {p.omega_a, p.omega_d});
  }
  return p;
}

std::pair<double, double> continuation_values(const NetworkState& psi, int t,
                                              const GameConfig& cfg, ValueCache* cache,
                                              const SolverOptions& opts) {
  if (t < 1 || t > cfg.horizon + 1) throw std::invalid_argument("stage out of range");
  return stage_value(psi, remaining_at(t, cfg), cfg, cache, opts);
}

StagePolicy solve_nfse(const NetworkState& psi, const GameConfig& cfg) {
  SolverOptions opts;
  opts.continuation = Continuation::kNone;
  StageGame g = build_tables(psi, 1, cfg, nullptr, opts);
  return policy_from(g, solve_stage_game(g));
}

MixedStrategy equal_probability_policy(const NetworkState& psi) {
  MixedStrategy q;
  std::vector<Action> targets;
  for (int h = 1; h <= psi.H; ++h) {
    int s = psi.active_sink(h);
    if (s != 0) targets.push_back(Action::AttackLS(s, h));
  }
  if (targets.empty()) throw NoActivatedLS("no activated local sink");
  for (const auto& a : targets) {
    q.support.emplace_back(a, 1.0 / static_cast<double>(targets.size()));
  }
  return q;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::kFSE:
      return "fse";
    case Mode::kNFSE:
      return "nfse";
    case Mode::kEqual:
      return "equal";
  }
  return "?";
}

double heaviest_area_mass(const NetworkState& psi, const GameConfig& cfg,
                          const MixedStrategy& q) {
  PayoffEvaluator ev(psi, cfg);
  int best = 1;
  for (int h = 2; h <= psi.H; ++h) {
    if (ev.area_weight(h) > ev.area_weight(best)) best = h;
  }
  int s = psi.active_sink(best);
  if (s == 0) return 0.0;
  return q.prob(Action::AttackLS(s, best));
}

double largest_cluster_mass(const NetworkState& psi, const MixedStrategy& q) {
  int best = 0;
  for (int c = 1; c < psi.H * psi.M; ++c) {
    if (psi.clusters[c].size() > psi.clusters[best].size()) best = c;
  }
  int f = psi.ch[best];
  if (f == 0) return 0.0;
  return q.prob(Action::AttackDevice(f));
}

namespace {

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Pure defender reply maximizing the expected one-shot payoff against q
// among actions available after every supported attack.
Action best_reply(const NetworkState& psi, const GameConfig& cfg, const MixedStrategy& q,
                  const PayoffEvaluator& ev) {
  std::optional<Action> best;
  double best_v = -std::numeric_limits<double>::infinity();
  for (const auto& b : full_defender_set(psi, cfg)) {
    bool ok = true;
    double v = 0.0;
    for (const auto& [a, p] : q.support) {
      if (!defender_action_allowed(psi, cfg, a, b)) {
        ok = false;
        break;
      }
      v += p * ev.defender_payoff(a, b);
    }
    if (ok && v > best_v + kTieEps) {
      best_v = v;
      best = b;
    }
  }
  if (!best) throw EmptyFeasibleSet("no defender action fits the attack support");
  return *best;
}

}  // namespace

std::vector<StageRecord> simulate(const NetworkState& psi1, const GameConfig& cfg, Mode mode,
                                  std::uint64_t seed, int num_runs, const SolverOptions& opts,
                                  ValueCache* cache) {
  if (num_runs < 1) throw std::invalid_argument("num_runs must be positive");
  SolverOptions stage_opts = opts;
  if (mode == Mode::kNFSE) stage_opts.continuation = Continuation::kNone;
  std::map<std::pair<int, std::string>, StagePolicy> policies;
  std::vector<StageRecord> out;

  for (int run = 0; run < num_runs; ++run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run)};
    std::mt19937_64 rng(seq);
    NetworkState psi = psi1;
    for (int t = 1; t <= cfg.horizon; ++t) {
      PayoffEvaluator ev(psi, cfg);
      StagePolicy pol;
      if (mode == Mode::kEqual) {
        pol.q_star = equal_probability_policy(psi);
        pol.b_star = best_reply(psi, cfg, pol.q_star, ev);
        for (const auto& [a, p] : pol.q_star.support) {
          auto [pa, pd] = ev.payoffs(a, pol.b_star);
          pol.omega_a += p * pa;
          pol.omega_d += p * pd;
        }
      } else {
        int stage = mode == Mode::kNFSE ? cfg.horizon : t;
        auto key = std::make_pair(stage, exact_key(psi));
        auto it = policies.find(key);
        if (it == policies.end()) {
          it = policies.emplace(key, solve_stage(psi, stage, cfg, cache, stage_opts)).first;
        }
        pol = it->second;
      }

      StageRecord rec;
      rec.run = run;
      rec.t = t;
      rec.q = pol.q_star;
      rec.b_star = pol.b_star;
      rec.omega_a = pol.omega_a;
      rec.omega_d = pol.omega_d;
      rec.p_h = heaviest_area_mass(psi, cfg, pol.q_star);
      rec.p_c_max = largest_cluster_mass(psi, pol.q_star);
      for (const auto& [a, p] : pol.q_star.support) {
        rec.expected_nd += p * ev.disconnected_sensors(a, pol.b_star);
      }

      double u = uniform53(rng);
      double acc = 0.0;
      rec.sampled = pol.q_star.support.back().first;
      for (const auto& [a, p] : pol.q_star.support) {
        acc += p;
        if (u < acc) {
          rec.sampled = a;
          break;
        }
      }
      rec.played_b = pol.b_star;
      if (!defender_action_allowed(psi, cfg, rec.sampled, pol.b_star)) {
        MixedStrategy point;
        point.support.emplace_back(rec.sampled, 1.0);
        rec.played_b = best_reply(psi, cfg, point, ev);
      }
      rec.sampled_nd = ev.disconnected_sensors(rec.sampled, rec.played_b);
      psi = advance(psi, cfg, rec.sampled, rec.played_b);
      rec.disconnected_after = DisconnectionFlags::of(psi).any();
      out.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace iobt
