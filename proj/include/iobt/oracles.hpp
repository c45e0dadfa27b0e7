#ifndef IOBT_ORACLES_HPP_
#define IOBT_ORACLES_HPP_

#include <cstdint>
#include <random>
#include <utility>

#include "iobt/fse.hpp"
#include "iobt/lp.hpp"
#include "iobt/netmodel.hpp"

// Brute-force reference solvers used by the test suites and `check`.
// None of them calls solve_lp or the stage solver.
namespace iobt::oracle {

// Enumerates every vertex of {x >= 0, A x <= b, equality rows tight}.
// Unboundedness is detected by a large bounding box.
LPSolution vertex_enumeration(const LinearProgram& lp);

// Leader value of the committed-mixed-strategy game by grid search over the
// attacker simplex. Small games use the full grid with the given step,
// larger ones a coarse grid. The best grid points are then refined by local
// search below `step`.
// Returns -inf when no column is ever a best response.
double grid_leader_value(const StageGame& g, double step = 1e-3);

// Leader value at one attacker mix; -inf if no column fits.
double leader_value_at(const StageGame& g, const std::vector<double>& q);

// Stage values by full game-tree search without memoization, with every
// node's LPs solved by vertex enumeration.
std::pair<double, double> tree_values(const NetworkState& psi, int remaining,
                                      const GameConfig& cfg);

// Random LP with mixed-sign coefficients; some are infeasible or unbounded.
LinearProgram random_lp(std::mt19937_64& rng, int max_vars = 6, int max_rows = 10);

// Random bimatrix stage game with a random coupling pattern.
StageGame random_stage_game(std::mt19937_64& rng, int max_attackers = 6,
                            int max_defenders = 6);

struct SmallInstance {
  GameConfig cfg;
  NetworkState psi;
};

// Random small network: 1-2 areas, 2-3 info types, a handful of devices.
SmallInstance random_instance(std::mt19937_64& rng, int horizon);

// One area, two info types with three single-type devices each, two sinks.
SmallInstance tiny_instance(int horizon);

}  // namespace iobt::oracle

#endif  // IOBT_ORACLES_HPP_
