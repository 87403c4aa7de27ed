#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spotcheck {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kPhase1Tol = 1e-8;
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const LinearProgram& lp) {
  size_t n = lp.num_vars();
  if (n == 0) raise(Errc::invalid_argument, "empty linear program");
  if (lp.lower.size() != n || lp.upper.size() != n) {
    raise(Errc::dimension_mismatch, "bounds must match variable count");
  }
  if (lp.constraint_matrix.size() != lp.rhs.size()) {
    raise(Errc::dimension_mismatch, "constraint rows must match rhs length");
  }
  for (const auto& row : lp.constraint_matrix) {
    if (row.size() != n) raise(Errc::dimension_mismatch, "constraint row of wrong width");
  }
  for (size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j])) raise(Errc::invalid_argument, "lower bounds must be finite");
    if (lp.lower[j] > lp.upper[j]) raise(Errc::invalid_argument, "lower bound exceeds upper bound");
  }
}

// Equality-form tableau: rows of [E | d] with d >= 0 plus a basis map.
struct Tableau {
  std::vector<std::vector<double>> rows;  // m x (cols+1), last entry is rhs
  std::vector<int> basis;                 // basic variable per row
  size_t cols = 0;

  double& at(size_t r, size_t c) { return rows[r][c]; }
  double rhs(size_t r) const { return rows[r][cols]; }

  void pivot(size_t pr, size_t pc) {
    double pv = rows[pr][pc];
    for (double& v : rows[pr]) v /= pv;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == pr) continue;
      double factor = rows[r][pc];
      if (factor == 0.0) continue;
      for (size_t c = 0; c <= cols; ++c) rows[r][c] -= factor * rows[pr][c];
    }
    basis[pr] = static_cast<int>(pc);
  }
};

// Minimize cost . z over the tableau with Bland's rule. `allowed(j)` gates
// which columns may enter. Returns true on optimal, false on unbounded.
// Assumes the tableau is canonical for the current basis.
bool run_simplex(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed) {
  size_t m = t.rows.size();
  std::vector<double> reduced(cost);
  for (size_t r = 0; r < m; ++r) {
    double cb = cost[static_cast<size_t>(t.basis[r])];
    if (cb == 0.0) continue;
    for (size_t c = 0; c < t.cols; ++c) reduced[c] -= cb * t.rows[r][c];
  }

  const size_t max_iterations = 2000 + 200 * (m + t.cols);
  for (size_t iter = 0; iter < max_iterations; ++iter) {
    // Bland: smallest-index column with negative reduced cost.
    size_t entering = t.cols;
    for (size_t c = 0; c < t.cols; ++c) {
      if (allowed[c] && reduced[c] < -kPivotTol) {
        entering = c;
        break;
      }
    }
    if (entering == t.cols) return true;  // optimal

    double best_ratio = kInf;
    for (size_t r = 0; r < m; ++r) {
      double a = t.rows[r][entering];
      if (a > kPivotTol) best_ratio = std::min(best_ratio, t.rhs(r) / a);
    }
    if (best_ratio == kInf) return false;  // unbounded

    // Bland again: among rows attaining the minimum ratio, leave on the one
    // whose basic variable has the smallest index.
    size_t leaving = m;
    for (size_t r = 0; r < m; ++r) {
      double a = t.rows[r][entering];
      if (a > kPivotTol && t.rhs(r) / a <= best_ratio + kPivotTol) {
        if (leaving == m || t.basis[r] < t.basis[leaving]) leaving = r;
      }
    }

    double factor = reduced[entering];
    t.pivot(leaving, entering);
    for (size_t c = 0; c < t.cols; ++c) reduced[c] -= factor * t.rows[leaving][c];
  }
  raise(Errc::solver_failure, "simplex iteration limit reached");
}

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  validate(lp);
  size_t n = lp.num_vars();
  size_t m_ge = lp.num_constraints();

  // Shift to y = x - lower; collect finite upper-bound rows.
  std::vector<size_t> bounded;
  for (size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) bounded.push_back(j);
  }
  size_t m = m_ge + bounded.size();
  size_t surplus0 = n;
  size_t slack0 = n + m_ge;
  size_t cols = n + m_ge + bounded.size();

  Tableau t;
  t.cols = cols;  // artificials appended below
  t.rows.assign(m, std::vector<double>(cols + 1, 0.0));
  t.basis.assign(m, -1);

  for (size_t r = 0; r < m_ge; ++r) {
    double b = lp.rhs[r];
    for (size_t j = 0; j < n; ++j) {
      t.rows[r][j] = lp.constraint_matrix[r][j];
      b -= lp.constraint_matrix[r][j] * lp.lower[j];
    }
    t.rows[r][surplus0 + r] = -1.0;
    t.rows[r][cols] = b;
  }
  for (size_t k = 0; k < bounded.size(); ++k) {
    size_t r = m_ge + k;
    size_t j = bounded[k];
    t.rows[r][j] = 1.0;
    t.rows[r][slack0 + k] = 1.0;
    t.rows[r][cols] = lp.upper[j] - lp.lower[j];
  }

  // Flip rows to make every rhs nonnegative; flipping a >=-row with rhs <= 0
  // also turns its surplus column into a ready-made basic column.
  for (size_t r = 0; r < m; ++r) {
    if (t.rows[r][cols] < 0.0 || (r < m_ge && t.rows[r][cols] <= 0.0)) {
      for (double& v : t.rows[r]) v = -v;
    }
  }
  std::vector<size_t> artificial_rows;
  for (size_t r = 0; r < m; ++r) {
    int unit = -1;
    size_t candidate = r < m_ge ? surplus0 + r : slack0 + (r - m_ge);
    if (t.rows[r][candidate] == 1.0) unit = static_cast<int>(candidate);
    if (unit >= 0) {
      t.basis[r] = unit;
    } else {
      artificial_rows.push_back(r);
    }
  }
  size_t art0 = cols;
  if (!artificial_rows.empty()) {
    size_t new_cols = cols + artificial_rows.size();
    for (size_t r = 0; r < m; ++r) {
      auto& row = t.rows[r];
      double b = row.back();
      row.back() = 0.0;
      row.resize(new_cols + 1, 0.0);
      row[new_cols] = b;
    }
    for (size_t k = 0; k < artificial_rows.size(); ++k) {
      size_t r = artificial_rows[k];
      t.rows[r][art0 + k] = 1.0;
      t.basis[r] = static_cast<int>(art0 + k);
    }
    t.cols = new_cols;
  }

  LpSolution solution;

  if (!artificial_rows.empty()) {
    std::vector<double> phase1(t.cols, 0.0);
    for (size_t k = 0; k < artificial_rows.size(); ++k) phase1[art0 + k] = 1.0;
    std::vector<bool> allowed(t.cols, true);
    if (!run_simplex(t, phase1, allowed)) {
      raise(Errc::solver_failure, "phase-1 reported unbounded");
    }
    double infeasibility = 0.0;
    for (size_t r = 0; r < m; ++r) {
      if (static_cast<size_t>(t.basis[r]) >= art0) infeasibility += t.rhs(r);
    }
    if (infeasibility > kPhase1Tol) {
      solution.status = LpStatus::infeasible;
      return solution;
    }
    // Pivot lingering zero-level artificials out on the largest structural
    // coefficient; a row with no pivotable column is redundant and dropped.
    for (size_t r = 0; r < t.rows.size();) {
      if (static_cast<size_t>(t.basis[r]) < art0) {
        ++r;
        continue;
      }
      size_t pc = art0;
      double best = kPivotTol;
      for (size_t c = 0; c < art0; ++c) {
        if (std::abs(t.rows[r][c]) > best) {
          best = std::abs(t.rows[r][c]);
          pc = c;
        }
      }
      if (pc < art0) {
        t.pivot(r, pc);
        ++r;
      } else {
        t.rows.erase(t.rows.begin() + static_cast<long>(r));
        t.basis.erase(t.basis.begin() + static_cast<long>(r));
      }
    }
  }

  std::vector<double> phase2(t.cols, 0.0);
  for (size_t j = 0; j < n; ++j) phase2[j] = lp.objective[j];
  std::vector<bool> allowed(t.cols, true);
  for (size_t c = art0; c < t.cols; ++c) allowed[c] = false;
  if (!run_simplex(t, phase2, allowed)) {
    solution.status = LpStatus::unbounded;
    return solution;
  }

  solution.status = LpStatus::optimal;
  solution.x.assign(n, 0.0);
  for (size_t r = 0; r < t.rows.size(); ++r) {
    size_t var = static_cast<size_t>(t.basis[r]);
    if (var < n) solution.x[var] = t.rhs(r);
  }
  for (size_t j = 0; j < n; ++j) {
    solution.x[j] += lp.lower[j];
    solution.objective_value += lp.objective[j] * solution.x[j];
  }
  return solution;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (size_t r = 0; r < lp.num_constraints(); ++r) {
    double lhs = 0.0;
    for (size_t j = 0; j < lp.num_vars(); ++j) lhs += lp.constraint_matrix[r][j] * x[j];
    worst = std::max(worst, lp.rhs[r] - lhs);
  }
  for (size_t j = 0; j < lp.num_vars(); ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    if (std::isfinite(lp.upper[j])) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

LinearProgram build_rsus_lp(const SignalModel& model, const EconParams& econ, int n) {
  validate_econ(econ);
  if (n < 1) raise(Errc::invalid_argument, "n >= 1 required");
  double p_aa = model.pair_joint(Signal::A, Signal::A);
  double p_ab = model.pair_joint(Signal::A, Signal::B);
  double p_bb = model.pair_joint(Signal::B, Signal::B);
  CountDistribution dist = model.count_distribution(n);

  LinearProgram lp;
  size_t vars = static_cast<size_t>(n) + 1;
  lp.objective = dist.probs;
  lp.lower.assign(vars, 0.0);
  lp.upper.assign(vars, 1.0);
  lp.constraint_matrix.reserve(2 * static_cast<size_t>(n));
  lp.rhs.reserve(2 * static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::vector<double> truthful_vs_lazy_a(vars, 0.0);
    truthful_vs_lazy_a[static_cast<size_t>(k)] = p_bb;
    truthful_vs_lazy_a[static_cast<size_t>(k) + 1] = -p_ab;
    lp.constraint_matrix.push_back(std::move(truthful_vs_lazy_a));
    lp.rhs.push_back(econ.ratio());

    std::vector<double> truthful_vs_lazy_b(vars, 0.0);
    truthful_vs_lazy_b[static_cast<size_t>(k)] = -p_ab;
    truthful_vs_lazy_b[static_cast<size_t>(k) + 1] = p_aa;
    lp.constraint_matrix.push_back(std::move(truthful_vs_lazy_b));
    lp.rhs.push_back(econ.ratio());
  }
  return lp;
}

}  // namespace spotcheck
