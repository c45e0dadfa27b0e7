#include <random>

#include "doctest.h"
#include "iobt/lp.hpp"
#include "iobt/oracles.hpp"

namespace iobt {
namespace {

TEST_SUITE("lp") {

TEST_CASE("single variable bound") {
  LinearProgram lp;
  lp.c = {1.0};
  lp.add_row({1.0}, 1.0);
  LPSolution s = solve_lp(lp);
  REQUIRE(s.status == LPStatus::kOptimal);
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.x[0] == doctest::Approx(1.0));
}

TEST_CASE("degenerate face") {
  LinearProgram lp;
  lp.c = {1.0, 1.0};
  lp.add_row({1.0, 1.0}, 1.0);
  LPSolution s = solve_lp(lp);
  REQUIRE(s.status == LPStatus::kOptimal);
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.x[0] + s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded") {
  LinearProgram inf;
  inf.c = {1.0};
  inf.add_row({1.0}, 1.0);
  inf.add_row({-1.0}, -2.0);
  CHECK(solve_lp(inf).status == LPStatus::kInfeasible);

  LinearProgram unb;
  unb.c = {1.0, 0.0};
  unb.add_row({-1.0, 1.0}, 1.0);
  CHECK(solve_lp(unb).status == LPStatus::kUnbounded);
}

TEST_CASE("equality rows") {
  LinearProgram lp;
  lp.c = {3.0, 1.0, 2.0};
  lp.add_row({1.0, 1.0, 1.0}, 1.0, true);
  lp.add_row({1.0, -1.0, 0.0}, 0.0);
  LPSolution s = solve_lp(lp);
  REQUIRE(s.status == LPStatus::kOptimal);
  // Best is x0 = x1 = 0.5 (value 2) vs x2 = 1 (value 2): both give 2.
  CHECK(s.value == doctest::Approx(2.0));
}

TEST_CASE("matches vertex enumeration on random programs") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    LinearProgram lp = oracle::random_lp(rng, 5, 8);
    LPSolution s = solve_lp(lp);
    LPSolution o = oracle::vertex_enumeration(lp);
    REQUIRE(s.status == o.status);
    if (s.status == LPStatus::kOptimal) {
      CHECK(s.value == doctest::Approx(o.value).epsilon(1e-7));
      for (int i = 0; i < lp.num_rows(); ++i) {
        double lhs = 0.0;
        for (int v = 0; v < lp.num_vars(); ++v) lhs += lp.A[i][v] * s.x[v];
        if (lp.equality(i)) {
          CHECK(lhs == doctest::Approx(lp.b[i]).epsilon(1e-7));
        } else {
          CHECK(lhs <= lp.b[i] + 1e-7);
        }
      }
    }
  }
}

TEST_CASE("identical input gives identical output") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    LinearProgram lp = oracle::random_lp(rng);
    LPSolution a = solve_lp(lp);
    LPSolution b = solve_lp(lp);
    CHECK(a.status == b.status);
    CHECK(a.x == b.x);
  }
}

TEST_CASE("zero variable test, negative objective and no rows") {
  LinearProgram lp;
  lp.c = {1.0, -1.0};
  CHECK(zero_variable_test(lp, 1));
  lp.add_row({1.0, 1.0}, 5.0);
  LPSolution s = solve_lp(lp);
  CHECK(s.x[1] == doctest::Approx(0.0));
}

TEST_CASE("zero variable test, shared row with larger c_q") {
  // x_q + x_r <= 1 puts the row in I1; H c_q = 2 > c_r = 1, so condition 2
  // does not fire; condition 3 needs I2 and condition 4 needs no rows.
  LinearProgram lp;
  lp.c = {2.0, 1.0};
  lp.add_row({1.0, 1.0}, 1.0);
  CHECK_FALSE(zero_variable_test(lp, 1));
  LPSolution s = solve_lp(lp);
  CHECK(s.x[1] == doctest::Approx(0.0));
}

}  // TEST_SUITE

}  // namespace
}  // namespace iobt
