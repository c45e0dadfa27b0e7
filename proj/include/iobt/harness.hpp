#ifndef IOBT_HARNESS_HPP_
#define IOBT_HARNESS_HPP_

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iobt/fse.hpp"
#include "iobt/netmodel.hpp"

namespace iobt {

class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceSpec {
  int devices_per_area = 200;
  int sinks_per_area = 2;
  std::vector<double> type_weights;  // index tau - 1
  int max_attempts = 1000;
};

struct ExperimentConfig {
  GameConfig game;  // nominal (unscaled) parameters
  InstanceSpec instance;
  int threshold = 15;  // nominal N_th for every cluster
  int runs = 10;
  std::uint64_t seed = 1;
  double scale = 1.0;
};

// Seven-type catalog, five areas, two sinks per area.
ExperimentConfig default_config();
// Throws ConfigError on unreadable files, bad JSON or invalid values.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Device counts and thresholds scale by `scale` (rounded up); LS, CH and
// LS-deployment costs scale linearly. Per-device costs stay as given.
GameConfig scaled_game(const ExperimentConfig& ec, double scale);
InstanceSpec scaled_instance(const ExperimentConfig& ec, double scale);

NetworkState generate_instance(const GameConfig& cfg, const InstanceSpec& spec,
                               std::uint64_t seed);

struct Scenario {
  int id = 1;
  std::string param;            // swept parameter
  std::vector<double> values;   // nominal values
  std::vector<int> horizons;    // FSE horizons
};

Scenario scenario_definition(int id);

struct MetricsRow {
  int scenario = 0;
  std::string mode;
  double value = 0.0;
  int T = 1;
  double p_h = 0.0;
  double p_c_max = 0.0;
  double n_d = 0.0;
  double runtime = 0.0;
  std::uint64_t seed = 0;
};

struct Metrics {
  double p_h = 0.0;
  double p_c_max = 0.0;
  double n_d = 0.0;
};

// Means over every stage of every run.
Metrics extract_metrics(const std::vector<StageRecord>& records);

struct ScenarioOptions {
  int runs = 10;
  std::uint64_t seed = 1;
  double scale = 1.0;
  Continuation continuation = Continuation::kSeparable;
  bool timing = false;
  bool verbose = false;
  std::vector<Mode> modes;  // empty runs every mode
};

// Each run uses its own instance, drawn with seed + run. Rows sorted by
// (value, mode, T).
std::vector<MetricsRow> run_scenario(const ExperimentConfig& ec, int id,
                                     const ScenarioOptions& opts);

void write_csv(std::ostream& os, const std::vector<MetricsRow>& rows);
// gnuplot-ready blocks, one per (mode, T), separated by blank lines.
void write_dat(std::ostream& os, const std::vector<MetricsRow>& rows);

// Exit codes: 0 success, 1 failed checks, 2 config error, 3 infeasible.
int run_cli(int argc, char** argv);

}  // namespace iobt

#endif  // IOBT_HARNESS_HPP_
