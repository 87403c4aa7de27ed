// Minimal dense linear-program solver: two-phase primal simplex with Bland's
// anticycling rule on the bounded standard form. Problems here have at most a
// few dozen variables, so a plain tableau is the whole implementation. Serves
// as the independent oracle for the uniform-schedule optimum.

#ifndef SPOTCHECK_SIMPLEX_HPP
#define SPOTCHECK_SIMPLEX_HPP

#include <limits>
#include <vector>

#include "mechanism.hpp"

namespace spotcheck {

// minimize objective . x  subject to  constraint_matrix . x >= rhs,
// lower <= x <= upper (upper may be +infinity).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> constraint_matrix;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  size_t num_vars() const { return objective.size(); }
  size_t num_constraints() const { return rhs.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
};

LpSolution solve(const LinearProgram& lp);

// Largest violation of constraints and bounds at x; 0 means feasible.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

// The uniform-spot-check workload minimization: n+1 variables x(0..n),
// objective weights from the truthful report-count distribution, and for each
// k in 0..n-1 the two effort constraints
//   -P_ab x(k+1) + P_bb x(k) >= c/R
//    P_aa x(k+1) - P_ab x(k) >= c/R
// with every variable bounded to [0,1]. The zero-right-hand-side misreport
// constraints are implied by these and omitted.
LinearProgram build_rsus_lp(const SignalModel& model, const EconParams& econ, int n);

}  // namespace spotcheck

#endif
