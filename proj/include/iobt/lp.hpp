#ifndef IOBT_LP_HPP_
#define IOBT_LP_HPP_

#include <vector>

namespace iobt {

// maximize c.x subject to A_i.x <= b_i (or == b_i when is_equality[i]), x >= 0
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<bool> is_equality;  // empty means all rows are inequalities

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(A.size()); }
  bool equality(int i) const { return !is_equality.empty() && is_equality[i]; }
  void add_row(std::vector<double> row, double rhs, bool eq = false);
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

struct LPSolution {
  std::vector<double> x;
  double value = 0.0;
  LPStatus status = LPStatus::kInfeasible;
  long iterations = 0;
};

constexpr double kLpEps = 1e-9;

// Two-phase dense simplex with Bland's rule.
LPSolution solve_lp(const LinearProgram& lp);

// Sufficient test for x_r = 0 in every optimal solution, via a column q
// compared against r on the rows of the LP. Equality rows are split into two
// opposite inequalities.
bool zero_variable_test(const LinearProgram& lp, int r);

const char* to_string(LPStatus s);

}  // namespace iobt

#endif  // IOBT_LP_HPP_
