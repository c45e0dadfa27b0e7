#include "iobt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "iobt/payoffs.hpp"

namespace iobt::oracle {

namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Row {
  std::vector<double> a;
  double b;
  bool eq;
};

// Solves the square system; false when singular.
bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs,
                  std::vector<double>& x) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    }
    if (std::fabs(m[piv][col]) < 1e-11) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = col + 1; r < n; ++r) {
      double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < n; ++c) s -= m[r][c] * x[c];
    x[r] = s / m[r][r];
  }
  return true;
}

// Best vertex of the polytope, or status infeasible.
LPSolution best_vertex(const LinearProgram& lp, double box) {
  const int n = lp.num_vars();
  std::vector<Row> rows;
  for (int i = 0; i < lp.num_rows(); ++i) rows.push_back({lp.A[i], lp.b[i], lp.equality(i)});
  for (int j = 0; j < n; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = -1.0;
    rows.push_back({a, 0.0, false});
  }
  rows.push_back({std::vector<double>(n, 1.0), box, false});

  std::vector<int> eqs, ineqs;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    (rows[i].eq ? eqs : ineqs).push_back(i);
  }
  auto feasible = [&](const std::vector<double>& x) {
    for (const Row& r : rows) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += r.a[j] * x[j];
      double scale = std::max(1.0, std::fabs(r.b));
      if (r.eq ? std::fabs(s - r.b) > kFeasTol * scale : s > r.b + kFeasTol * scale) {
        return false;
      }
    }
    return true;
  };

  LPSolution best;
  best.status = LPStatus::kInfeasible;
  best.value = kNegInf;
  std::vector<int> pool;
  std::vector<int> fixed;
  int pick = n;
  if (static_cast<int>(eqs.size()) <= n) {
    fixed = eqs;
    pool = ineqs;
    pick = n - static_cast<int>(eqs.size());
  } else {
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) pool.push_back(i);
  }
  if (pick > static_cast<int>(pool.size())) return best;

  std::vector<int> choice(pick);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == pick) {
      std::vector<std::vector<double>> m;
      std::vector<double> rhs;
      for (int i : fixed) {
        m.push_back(rows[i].a);
        rhs.push_back(rows[i].b);
      }
      for (int i : choice) {
        m.push_back(rows[i].a);
        rhs.push_back(rows[i].b);
      }
      std::vector<double> x;
      if (n == 0 || !solve_square(m, rhs, x)) return;
      if (!feasible(x)) return;
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += lp.c[j] * x[j];
      if (v > best.value) {
        best.value = v;
        best.x = x;
        best.status = LPStatus::kOptimal;
      }
      return;
    }
    for (int k = start; k <= static_cast<int>(pool.size()) - (pick - depth); ++k) {
      choice[depth] = pool[k];
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

LPSolution vertex_enumeration(const LinearProgram& lp) {
  LPSolution a = best_vertex(lp, 1e6);
  if (a.status != LPStatus::kOptimal) return a;
  LPSolution b = best_vertex(lp, 2e6);
  if (b.value > a.value + 1e-6 * std::max(1.0, std::fabs(a.value))) {
    LPSolution u;
    u.status = LPStatus::kUnbounded;
    return u;
  }
  return a;
}

namespace {

// Leader value at q and the column attaining it (-1 when none fits).
double best_column(const StageGame& g, const std::vector<double>& q, int* arg) {
  const int na = g.na();
  const int nd = g.nd();
  std::vector<double> val(nd, 0.0);
  double top = kNegInf;
  for (int k = 0; k < nd; ++k) {
    for (int i = 0; i < na; ++i) {
      if (q[i] > 0 && g.coupled(i, k)) val[k] += q[i] * g.Fd(i, k);
    }
    top = std::max(top, val[k]);
  }
  double best = kNegInf;
  *arg = -1;
  for (int k = 0; k < nd; ++k) {
    if (val[k] < top - 1e-12) continue;
    bool fits = true;
    double v = 0.0;
    for (int i = 0; i < na && fits; ++i) {
      if (q[i] <= 0) continue;
      fits = g.coupled(i, k);
      v += q[i] * g.Fa(i, k);
    }
    if (fits && v > best) {
      best = v;
      *arg = k;
    }
  }
  return best;
}

// Primal active-set ascent on {q : k is a best response, support coupled
// to k} from a point inside it. Walks along tie facets that no grid point
// reaches; returns the refined point.
std::vector<double> refine_on_column(const StageGame& g, std::vector<double> q, int k) {
  const int na = g.na();
  const int nd = g.nd();
  std::vector<int> vars;
  for (int i = 0; i < na; ++i) {
    if (g.coupled(i, k)) vars.push_back(i);
  }
  const int nv = static_cast<int>(vars.size());
  auto fd = [&](int i, int c) { return g.coupled(i, c) ? g.Fd(i, c) : 0.0; };
  // Constraint gradient rows over vars: follower rows r.q <= 0, bounds -q_i <= 0.
  auto follower_row = [&](int c) {
    Eigen::VectorXd r(nv);
    for (int v = 0; v < nv; ++v) r[v] = fd(vars[v], c) - g.Fd(vars[v], k);
    return r;
  };
  Eigen::VectorXd x(nv), cvec(nv);
  for (int v = 0; v < nv; ++v) {
    x[v] = q[vars[v]];
    cvec[v] = g.Fa(vars[v], k);
  }
  std::vector<Eigen::VectorXd> frows;
  for (int c = 0; c < nd; ++c) frows.push_back(follower_row(c));

  std::vector<char> dropped_f(nd, 0), dropped_b(nv, 0);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<int> act_f, act_b;
    for (int c = 0; c < nd; ++c) {
      if (c != k && !dropped_f[c] && frows[c].dot(x) >= -1e-10) act_f.push_back(c);
    }
    for (int v = 0; v < nv; ++v) {
      if (!dropped_b[v] && x[v] <= 1e-13) act_b.push_back(v);
    }
    const int m = 1 + static_cast<int>(act_f.size() + act_b.size());
    Eigen::MatrixXd mt(nv, m);
    mt.col(0).setOnes();
    int col = 1;
    for (int c : act_f) mt.col(col++) = frows[c];
    for (int v : act_b) {
      mt.col(col).setZero();
      mt(v, col++) = -1.0;
    }
    Eigen::VectorXd y = mt.completeOrthogonalDecomposition().solve(cvec);
    Eigen::VectorXd d = cvec - mt * y;
    if (d.lpNorm<Eigen::Infinity>() < 1e-12) {
      // Stationary on this face: release the constraint with the most
      // negative multiplier, or stop at a KKT point.
      int worst = -1;
      double most = -1e-10;
      for (int j = 1; j < m; ++j) {
        if (y[j] < most) {
          most = y[j];
          worst = j;
        }
      }
      if (worst < 0) break;
      int idx = worst - 1;
      if (idx < static_cast<int>(act_f.size())) {
        dropped_f[act_f[idx]] = 1;
      } else {
        dropped_b[act_b[idx - act_f.size()]] = 1;
      }
      continue;
    }
    double t = std::numeric_limits<double>::infinity();
    for (int v = 0; v < nv; ++v) {
      if (d[v] < -1e-15) t = std::min(t, x[v] / -d[v]);
    }
    for (int c = 0; c < nd; ++c) {
      if (c == k) continue;
      double rd = frows[c].dot(d);
      if (rd > 1e-15) t = std::min(t, std::max(0.0, -frows[c].dot(x)) / rd);
    }
    if (!std::isfinite(t)) break;
    x += t * d;
    for (int v = 0; v < nv; ++v) x[v] = std::max(0.0, x[v]);
    x /= x.sum();
    std::fill(dropped_f.begin(), dropped_f.end(), 0);
    std::fill(dropped_b.begin(), dropped_b.end(), 0);
  }
  std::fill(q.begin(), q.end(), 0.0);
  for (int v = 0; v < nv; ++v) q[vars[v]] = x[v];
  return q;
}

}  // namespace

double leader_value_at(const StageGame& g, const std::vector<double>& q) {
  int k;
  return best_column(g, q, &k);
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls f on every composition of `total` into `parts` nonnegative parts.
void for_each_composition(int total, int parts,
                          const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> c(parts, 0);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == parts - 1) {
      c[idx] = left;
      f(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, total);
}

}  // namespace

double grid_leader_value(const StageGame& g, double step) {
  const int na = g.na();
  const int total = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> q(na);
  auto value_of = [&](const std::vector<long>& c, long units) {
    for (int i = 0; i < na; ++i) q[i] = static_cast<double>(c[i]) / units;
    return leader_value_at(g, q);
  };

  // Seeds: the full grid when it is small enough, else a coarse grid on a
  // divisor of `total`.
  int coarse = total;
  if (binom(total + na - 1, na - 1) > 6e6) {
    coarse = 1;
    for (int d = 1; d <= total; ++d) {
      if (total % d == 0 && binom(d + na - 1, na - 1) <= 2e6) coarse = d;
    }
  }
  std::vector<std::pair<double, std::vector<int>>> seeds;
  double best = kNegInf;
  for_each_composition(coarse, na, [&](const std::vector<int>& c) {
    std::vector<long> cl(c.begin(), c.end());
    double v = value_of(cl, coarse);
    if (v == kNegInf) return;
    best = std::max(best, v);
    seeds.emplace_back(v, c);
  });
  if (seeds.empty()) return kNegInf;
  const std::size_t keep = std::min<std::size_t>(seeds.size(), 64);
  std::partial_sort(seeds.begin(), seeds.begin() + keep, seeds.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });

  // Pairwise mass transfers, halving from the seed spacing down to
  // step / kSub. Mixes that need an exact follower tie lie off the grid.
  constexpr long kSub = 1024;
  const long units = static_cast<long>(total) * kSub;
  const long first = static_cast<long>(total / coarse) * kSub;
  for (std::size_t s = 0; s < keep; ++s) {
    std::vector<long> c(na);
    for (int i = 0; i < na; ++i) c[i] = seeds[s].second[i] * first;
    double cur = value_of(c, units);
    for (long move = first; move >= 1; move /= 2) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int i = 0; i < na; ++i) {
          for (int j = 0; j < na; ++j) {
            if (j == i || c[i] < move) continue;
            c[i] -= move;
            c[j] += move;
            double v = value_of(c, units);
            if (v > cur + 1e-15) {
              cur = v;
              improved = true;
            } else {
              c[i] += move;
              c[j] -= move;
            }
          }
        }
      }
    }
    best = std::max(best, cur);
    for (int i = 0; i < na; ++i) q[i] = static_cast<double>(c[i]) / units;
    int k;
    if (best_column(g, q, &k) == kNegInf) continue;
    best = std::max(best, leader_value_at(g, refine_on_column(g, q, k)));
  }
  return best;
}

std::pair<double, double> tree_values(const NetworkState& psi, int remaining,
                                      const GameConfig& cfg) {
  if (remaining <= 0) return {0.0, 0.0};
  std::vector<Action> as = attacker_strategy_set(psi);
  std::vector<Action> ds = full_defender_set(psi, cfg);
  const int na = static_cast<int>(as.size());
  const int nd = static_cast<int>(ds.size());
  std::vector<std::vector<char>> ok(na, std::vector<char>(nd, 0));
  std::vector<std::vector<double>> fa(na, std::vector<double>(nd, 0.0));
  std::vector<std::vector<double>> fd(na, std::vector<double>(nd, 0.0));
  for (int k = 0; k < nd; ++k) {
    std::vector<Action> sk = restricted_attacker_set(ds[k], psi, cfg);
    for (int i = 0; i < na; ++i) {
      ok[i][k] = std::find(sk.begin(), sk.end(), as[i]) != sk.end() &&
                 defender_action_allowed(psi, cfg, as[i], ds[k]);
      if (!ok[i][k]) continue;
      auto child = tree_values(advance(psi, cfg, as[i], ds[k]), remaining - 1, cfg);
      fa[i][k] = attacker_payoff(as[i], ds[k], psi, cfg) + child.first;
      fd[i][k] = defender_payoff(as[i], ds[k], psi, cfg) + child.second;
    }
  }

  double best = kNegInf;
  std::vector<std::pair<double, double>> vals(nd, {kNegInf, 0.0});
  for (int k = 0; k < nd; ++k) {
    std::vector<int> vars;
    for (int i = 0; i < na; ++i) {
      if (ok[i][k]) vars.push_back(i);
    }
    if (vars.empty()) continue;
    LinearProgram lp;
    for (int i : vars) lp.c.push_back(fa[i][k]);
    lp.add_row(std::vector<double>(vars.size(), 1.0), 1.0, true);
    for (int k2 = 0; k2 < nd; ++k2) {
      if (k2 == k) continue;
      std::vector<double> row;
      for (int i : vars) row.push_back((ok[i][k2] ? fd[i][k2] : 0.0) - fd[i][k]);
      lp.add_row(row, 0.0);
    }
    LPSolution sol = vertex_enumeration(lp);
    if (sol.status != LPStatus::kOptimal) continue;
    double vd = 0.0;
    for (std::size_t v = 0; v < vars.size(); ++v) vd += sol.x[v] * fd[vars[v]][k];
    vals[k] = {sol.value, vd};
    best = std::max(best, sol.value);
  }
  for (int k = 0; k < nd; ++k) {
    if (vals[k].first >= best - 1e-9) return vals[k];
  }
  throw NoFeasibleStage("tree node without a feasible column");
}

LinearProgram random_lp(std::mt19937_64& rng, int max_vars, int max_rows) {
  std::uniform_int_distribution<int> nv(1, max_vars);
  std::uniform_int_distribution<int> nr(0, max_rows);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(-5, 5);
  bool integral = u(rng) < 0.5;
  auto coef = [&]() {
    return integral ? static_cast<double>(small(rng)) : std::round((u(rng) * 10 - 5) * 1e6) / 1e6;
  };
  LinearProgram lp;
  int n = nv(rng);
  int m = nr(rng);
  for (int j = 0; j < n; ++j) lp.c.push_back(coef());
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(n);
    for (double& a : row) a = coef();
    double rhs = integral ? static_cast<double>(small(rng) + 3) : coef() + 3.0;
    lp.add_row(row, rhs, u(rng) < 0.1);
  }
  return lp;
}

StageGame random_stage_game(std::mt19937_64& rng, int max_attackers, int max_defenders) {
  std::uniform_int_distribution<int> na(1, max_attackers);
  std::uniform_int_distribution<int> nd(1, max_defenders);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StageGame g;
  g.resize(na(rng), nd(rng));
  for (int i = 0; i < g.na(); ++i) g.attackers[i] = Action::AttackDevice(i + 1);
  for (int k = 0; k < g.nd(); ++k) g.defenders[k] = Action::DeployLS(k + 1);
  bool integral = u(rng) < 0.3;
  for (double& v : g.fa) v = integral ? std::floor(u(rng) * 4) : u(rng);
  for (double& v : g.fd) v = integral ? std::floor(u(rng) * 4) : u(rng);
  for (auto& c : g.coupling) c = u(rng) < 0.75 ? 1 : 0;
  bool any = std::any_of(g.coupling.begin(), g.coupling.end(), [](char c) { return c != 0; });
  if (!any) g.coupling[0] = 1;
  return g;
}

SmallInstance random_instance(std::mt19937_64& rng, int horizon) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(u(rng) * (hi - lo + 1)) % (hi - lo + 1);
  };
  SmallInstance out;
  GameConfig& g = out.cfg;
  g.H = pick(1, 2);
  g.M = pick(2, 3);
  for (int j = 1; j <= g.M; ++j) g.types.push_back(DeviceType{j, 1, {j}});
  std::vector<int> multi;
  for (int j = 1; j <= g.M; ++j) {
    if (u(rng) < 0.6) multi.push_back(j);
  }
  if (multi.size() >= 2) {
    g.types.push_back(DeviceType{g.M + 1, static_cast<int>(multi.size()), multi});
  }
  for (std::size_t k = 0; k < g.types.size(); ++k) {
    g.c_type.push_back(std::round(u(rng) * 6) / 2);
    g.d_type.push_back(std::round(u(rng) * 6) / 2);
  }
  g.c_L = std::round(u(rng) * 20);
  g.c_aL = std::round(u(rng) * 10);
  g.c_CH = std::round(u(rng) * 10);
  g.d_L = std::round(u(rng) * 20);
  g.sink_weight = 4 + pick(1, 10);
  g.ls_target = pick(1, 3);
  g.horizon = horizon;

  NetworkState s = NetworkState::empty(g.H, g.M);
  std::vector<int> per_area;
  for (int h = 1; h <= g.H; ++h) {
    int n = pick(2, 4);
    for (int k = 0; k < n; ++k) s.add_device(g, pick(1, g.K()), h);
  }
  g.thresholds.assign(g.H * g.M, 0);
  for (int c = 0; c < g.H * g.M; ++c) {
    int size = static_cast<int>(s.clusters[c].size());
    g.thresholds[c] = pick(0, size);
    s.ch[c] = size > 0 ? s.clusters[c].front() : 0;
  }
  for (int h = 1; h <= g.H; ++h) {
    int nl = pick(1, 2);
    for (int k = 0; k < nl; ++k) {
      int id = s.add_sink(h, g.sink_weight);
      if (k == 0) s.activated[h - 1] = id;
    }
  }
  g.validate();
  s.check_invariants(g);
  out.psi = std::move(s);
  return out;
}

SmallInstance tiny_instance(int horizon) {
  SmallInstance out;
  GameConfig& g = out.cfg;
  g.H = 1;
  g.M = 2;
  g.types = {DeviceType{1, 1, {1}}, DeviceType{2, 1, {2}}};
  g.c_type = {0.5, 0.5};
  g.d_type = {0.5, 0.5};
  g.thresholds = {2, 2};
  g.c_L = 3.0;
  g.c_aL = 1.0;
  g.c_CH = 1.0;
  g.d_L = 4.0;
  g.sink_weight = 5.0;
  g.ls_target = 3;
  g.horizon = horizon;
  NetworkState s = NetworkState::empty(1, 2);
  for (int k = 0; k < 3; ++k) s.add_device(g, 1, 1);
  for (int k = 0; k < 3; ++k) s.add_device(g, 2, 1);
  s.ch = {s.clusters[0].front(), s.clusters[1].front()};
  s.activated[0] = s.add_sink(1, g.sink_weight);
  s.add_sink(1, g.sink_weight);
  g.validate();
  s.check_invariants(g);
  out.psi = std::move(s);
  return out;
}

}  // namespace iobt::oracle
