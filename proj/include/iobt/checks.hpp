#ifndef IOBT_CHECKS_HPP_
#define IOBT_CHECKS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "iobt/harness.hpp"

namespace iobt {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string format_check(const CheckResult& r);

// 1. solve_lp against vertex enumeration.
CheckResult check_lp_oracle(int count, std::uint64_t seed);
// 2. Stage solver against the simplex grid search.
CheckResult check_stage_oracle(int count, std::uint64_t seed);
// 3. Backward induction against the full game tree on the tiny instance.
CheckResult check_tree_oracle();
// 4. Horizon-one FSE against NFSE.
CheckResult check_boundary_identity(int count, std::uint64_t seed);
// 5. Connectivity verdicts and the zero-variable test against the solver.
CheckResult check_prop1_soundness(int instances, int lps, std::uint64_t seed);
// 6. Metric trends at desk scale. scenario1 holds the rows of scenario 1.
CheckResult check_trends(const ExperimentConfig& ec, const std::vector<MetricsRow>& scenario1,
                         int runs, double scale, std::uint64_t seed);
// 7. Two CLI scenario runs give identical CSV bytes. The first CSV is
// returned through csv_out.
CheckResult check_determinism(const std::string& config_path, const std::string& work_dir,
                              std::string* csv_out);
// 8. Trajectories through verified stages never disconnect.
CheckResult check_safety(int instances, int trajectories, std::uint64_t seed);

// Parses a CSV written by write_csv.
std::vector<MetricsRow> parse_csv(const std::string& text);

}  // namespace iobt

#endif  // IOBT_CHECKS_HPP_
