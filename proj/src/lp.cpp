#include "iobt/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace iobt {

void LinearProgram::add_row(std::vector<double> row, double rhs, bool eq) {
  if (is_equality.size() < A.size()) is_equality.resize(A.size(), false);
  A.push_back(std::move(row));
  b.push_back(rhs);
  is_equality.push_back(eq);
}

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::kOptimal:
      return "optimal";
    case LPStatus::kInfeasible:
      return "infeasible";
    case LPStatus::kUnbounded:
      return "unbounded";
  }
  return "?";
}

namespace {

constexpr long kIterationCap = 1000000;

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), w_(cols + 1), t_(rows * (cols + 1), 0.0) {}

  double& at(int i, int j) { return t_[i * w_ + j]; }
  double at(int i, int j) const { return t_[i * w_ + j]; }
  double& rhs(int i) { return t_[i * w_ + w_ - 1]; }
  double rhs(int i) const { return t_[i * w_ + w_ - 1]; }
  int cols() const { return w_ - 1; }
  int rows() const { return m_; }

  void pivot(int r, int e) {
    double* pr = &t_[r * w_];
    double inv = 1.0 / pr[e];
    for (int j = 0; j < w_; ++j) pr[j] *= inv;
    pr[e] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = &t_[i * w_];
      double f = pi[e];
      if (f == 0.0) continue;
      for (int j = 0; j < w_; ++j) pi[j] -= f * pr[j];
      pi[e] = 0.0;
    }
  }

 private:
  int m_;
  int w_;
  std::vector<double> t_;
};

enum class Outcome { kOptimal, kUnbounded };

// Maximizes cost.x over the tableau's current basis. Columns at or beyond
// `limit` never enter.
Outcome run_simplex(Tableau& t, std::vector<int>& basis, const std::vector<double>& cost,
                    int limit, long& iterations) {
  const int m = t.rows();
  const int n = t.cols();
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) {
    double z = 0.0;
    for (int i = 0; i < m; ++i) z += cost[basis[i]] * t.at(i, j);
    d[j] = cost[j] - z;
  }
  for (;;) {
    if (++iterations > kIterationCap) throw std::runtime_error("simplex iteration cap hit");
    int e = -1;
    for (int j = 0; j < limit; ++j) {
      if (d[j] > kLpEps) {
        e = j;
        break;
      }
    }
    if (e < 0) return Outcome::kOptimal;
    int r = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double a = t.at(i, e);
      if (a <= kLpEps) continue;
      double ratio = t.rhs(i) / a;
      if (r < 0 || ratio < best - 1e-12) {
        best = ratio;
        r = i;
      } else if (ratio <= best + 1e-12 && basis[i] < basis[r]) {
        best = std::min(best, ratio);
        r = i;
      }
    }
    if (r < 0) return Outcome::kUnbounded;
    t.pivot(r, e);
    basis[r] = e;
    double de = d[e];
    for (int j = 0; j < n; ++j) d[j] -= de * t.at(r, j);
    d[e] = 0.0;
  }
}

}  // namespace

LPSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  LPSolution sol;
  sol.x.assign(n, 0.0);

  // Column layout: x | slack or surplus per inequality row | artificials.
  int n_slack = 0;
  int n_art = 0;
  std::vector<int> slack_col(m, -1);
  std::vector<int> art_col(m, -1);
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(lp.A[i].size()) != n) throw std::invalid_argument("row width");
    if (lp.b[i] < 0) sign[i] = -1.0;
    if (!lp.equality(i)) slack_col[i] = n_slack++;
  }
  for (int i = 0; i < m; ++i) {
    bool needs_art = lp.equality(i) || sign[i] < 0;
    if (needs_art) art_col[i] = n_art++;
  }
  const int art_start = n + n_slack;
  const int cols = art_start + n_art;
  Tableau t(m, cols);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.at(i, j) = sign[i] * lp.A[i][j];
    t.rhs(i) = sign[i] * lp.b[i];
    if (slack_col[i] >= 0) t.at(i, n + slack_col[i]) = sign[i];
    if (art_col[i] >= 0) {
      t.at(i, art_start + art_col[i]) = 1.0;
      basis[i] = art_start + art_col[i];
    } else {
      basis[i] = n + slack_col[i];
    }
  }

  if (n_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (int k = 0; k < n_art; ++k) phase1[art_start + k] = -1.0;
    run_simplex(t, basis, phase1, cols, sol.iterations);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (basis[i] >= art_start) infeas += t.rhs(i);
    }
    if (infeas > kLpEps) {
      sol.status = LPStatus::kInfeasible;
      return sol;
    }
    for (int i = 0; i < m; ++i) {
      if (basis[i] < art_start) continue;
      for (int j = 0; j < art_start; ++j) {
        if (std::fabs(t.at(i, j)) > kLpEps) {
          t.pivot(i, j);
          basis[i] = j;
          break;
        }
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = lp.c[j];
  if (run_simplex(t, basis, phase2, art_start, sol.iterations) == Outcome::kUnbounded) {
    sol.status = LPStatus::kUnbounded;
    return sol;
  }
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) sol.x[basis[i]] = std::max(0.0, t.rhs(i));
  }
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += lp.c[j] * sol.x[j];
  sol.status = LPStatus::kOptimal;
  return sol;
}

bool zero_variable_test(const LinearProgram& lp, int r) {
  const int n = lp.num_vars();
  std::vector<const std::vector<double>*> rows;
  std::vector<std::vector<double>> negated;
  negated.reserve(lp.num_rows());
  for (int i = 0; i < lp.num_rows(); ++i) {
    rows.push_back(&lp.A[i]);
    if (lp.equality(i)) {
      std::vector<double> neg(lp.A[i]);
      for (double& v : neg) v = -v;
      negated.push_back(std::move(neg));
    }
  }
  for (const auto& row : negated) rows.push_back(&row);

  for (int q = 0; q < n; ++q) {
    if (q == r) continue;
    std::vector<int> i1, i2, i3;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      double aq = (*rows[i])[q];
      double ar = (*rows[i])[r];
      if (aq > 0 && ar >= 0) i1.push_back(i);
      if (aq < 0 && ar <= 0) i2.push_back(i);
      if (aq >= 0 && ar < 0) i3.push_back(i);
    }
    auto ratio = [&](int i) { return (*rows[i])[r] / (*rows[i])[q]; };

    // condition 1
    if (!i3.empty()) return true;

    // condition 2
    if (!i1.empty() || !i2.empty()) {
      double h_factor;
      if (!i1.empty()) {
        int k = i1[0];
        for (int i : i1) {
          if (ratio(i) < ratio(k)) k = i;
        }
        h_factor = std::floor(ratio(k));
      } else {
        int k = i2[0];
        for (int i : i2) {
          if (ratio(i) > ratio(k)) k = i;
        }
        h_factor = ratio(k);
      }
      if (h_factor * lp.c[q] <= lp.c[r]) return true;
    }

    // condition 3
    if (!i1.empty() && !i2.empty()) {
      double lo = std::numeric_limits<double>::infinity();
      for (int i : i1) lo = std::min(lo, std::floor(ratio(i)));
      double hi = -std::numeric_limits<double>::infinity();
      for (int i : i2) hi = std::max(hi, ratio(i));
      if (lo >= hi) return true;
    }

    // condition 4
    if (i1.empty() && i2.empty() && lp.c[q] > 0) return true;
  }
  return false;
}

}  // namespace iobt
