#ifndef IOBT_FSE_HPP_
#define IOBT_FSE_HPP_

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iobt/netmodel.hpp"

namespace iobt {

class NoFeasibleStage : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NoActivatedLS : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MixedStrategy {
  std::vector<std::pair<Action, double>> support;

  double prob(const Action& a) const;
  double total() const;
};

struct StagePolicy {
  MixedStrategy q_star;
  Action b_star;
  double omega_a = 0.0;
  double omega_d = 0.0;
};

// Bimatrix stage game. Rows are attacker actions, columns defender actions.
// coupled(i, k) marks a_i as playable alongside b_k.
struct StageGame {
  std::vector<Action> attackers;
  std::vector<Action> defenders;  // canonical order
  std::vector<double> fa;         // [i * nd + k]
  std::vector<double> fd;
  std::vector<char> coupling;

  int na() const { return static_cast<int>(attackers.size()); }
  int nd() const { return static_cast<int>(defenders.size()); }
  double Fa(int i, int k) const { return fa[i * nd() + k]; }
  double Fd(int i, int k) const { return fd[i * nd() + k]; }
  bool coupled(int i, int k) const { return coupling[i * nd() + k] != 0; }

  // Allocates tables for the given sizes, all pairs coupled, payoffs 0.
  void resize(int num_attackers, int num_defenders);
};

struct StageSolution {
  int b = -1;             // winning defender column
  std::vector<double> q;  // per attacker row
  double value_a = 0.0;
  double value_d = 0.0;
  int lps_solved = 0;
};

// Multiple-LPs method. The winner is the first column in canonical order
// whose LP value is within 1e-9 of the best LP value.
StageSolution solve_stage_game(const StageGame& g);

// Value of the LP for column k alone; nullopt when infeasible.
std::optional<double> stage_lp_value(const StageGame& g, int k);

enum class Continuation {
  kExact,      // full backward induction over reachable states
  kNone,       // no continuation (one-shot game)
  kSeparable,  // remaining stages times the one-shot values of partial moves
};

struct SolverOptions {
  Continuation continuation = Continuation::kExact;
  bool use_cache = true;
  bool prune_deployments = false;
};

// Stage values keyed by remaining stages and state key. Values depend only
// on the config, so one cache must not be shared across configs.
class ValueCache {
 public:
  std::optional<std::pair<double, double>> find(const std::string& key) const;
  void insert(const std::string& key, std::pair<double, double> v);
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::pair<double, double>> map_;
};

std::string state_key(const NetworkState& psi, const GameConfig& cfg);

// Payoff-plus-continuation tables for stage t of cfg.horizon.
StageGame build_stage_game(const NetworkState& psi, int t, const GameConfig& cfg,
                           ValueCache* cache, const SolverOptions& opts);

StagePolicy solve_stage(const NetworkState& psi, int t, const GameConfig& cfg,
                        ValueCache* cache, const SolverOptions& opts = {});

// (Omega_a, Omega_d) at stage t; zero at t = T + 1.
std::pair<double, double> continuation_values(const NetworkState& psi, int t,
                                              const GameConfig& cfg, ValueCache* cache,
                                              const SolverOptions& opts = {});

StagePolicy solve_nfse(const NetworkState& psi, const GameConfig& cfg);

MixedStrategy equal_probability_policy(const NetworkState& psi);

enum class Mode { kFSE, kNFSE, kEqual };

const char* to_string(Mode m);

struct StageRecord {
  int run = 0;
  int t = 0;
  MixedStrategy q;
  Action b_star;
  Action sampled;
  Action played_b;
  double expected_nd = 0.0;
  double sampled_nd = 0.0;
  double p_h = 0.0;
  double p_c_max = 0.0;
  double omega_a = 0.0;
  double omega_d = 0.0;
  bool disconnected_after = false;
};

// q mass on the active sink of the heaviest area, and on the CH of the
// largest cluster. Ties go to the lowest index.
double heaviest_area_mass(const NetworkState& psi, const GameConfig& cfg,
                          const MixedStrategy& q);
double largest_cluster_mass(const NetworkState& psi, const MixedStrategy& q);

std::vector<StageRecord> simulate(const NetworkState& psi1, const GameConfig& cfg, Mode mode,
                                  std::uint64_t seed, int num_runs,
                                  const SolverOptions& opts = {}, ValueCache* cache = nullptr);

}  // namespace iobt

#endif  // IOBT_FSE_HPP_
