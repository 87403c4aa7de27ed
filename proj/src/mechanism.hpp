// Spot-checking policies and the closed-form optimal DSIC constructors.
//
// A mechanism pairs a spot-check policy with economic parameters (effort cost
// c, agreement reward R). Count policies index check probabilities by the
// total number of A-reports; personal policies give each student her own
// report-dependent pair. Infeasibility is a value, not an exception, so
// parameter sweeps can record infeasible cells.

#ifndef SPOTCHECK_MECHANISM_HPP
#define SPOTCHECK_MECHANISM_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "model.hpp"

namespace spotcheck {

struct EconParams {
  double cost = 1.0;    // c > 0
  double reward = 1.0;  // R > 0
  double ratio() const { return cost / reward; }
};

void validate_econ(const EconParams& econ);

enum class Family { ros, rss_opt, rsus_opt, hetero_prss, custom };

const char* family_name(Family f);

// x_a[k] / x_b[k] = probability of checking a student reporting A / B when k
// students in total reported A. x_a[0] and x_b[n] are unreachable and pinned
// to zero.
struct CountPolicy {
  int n = 0;
  std::vector<double> x_a;  // size n+1
  std::vector<double> x_b;  // size n+1
};

// Check probabilities that depend only on the student's own report.
struct PersonalPolicy {
  double x_a = 0.0;
  double x_b = 0.0;
};

struct Feasibility {
  bool feasible = false;
  double margin = 0.0;  // slack of the binding existence condition
  std::string reason;   // set when infeasible
};

class Mechanism {
 public:
  Mechanism(Family family, EconParams econ, CountPolicy policy);
  Mechanism(Family family, EconParams econ, std::vector<PersonalPolicy> policies);

  Family family() const { return family_; }
  const EconParams& econ() const { return econ_; }
  int n() const { return n_; }

  bool has_count_policy() const { return std::holds_alternative<CountPolicy>(policy_); }
  const CountPolicy& count_policy() const;
  const std::vector<PersonalPolicy>& personal_policies() const;

  // Check probability for a student reporting `report` when k students in
  // total reported A; `student` only matters for personal policies.
  double check_probability(Signal report, int k, int student = 0) const;

  // Same mechanism with every check probability scaled by `factor`; used to
  // probe how verification reacts to slightly weakened incentives.
  Mechanism scaled(double factor) const;

 private:
  Family family_;
  EconParams econ_;
  int n_;
  std::variant<CountPolicy, std::vector<PersonalPolicy>> policy_;
};

struct MechanismResult {
  Feasibility feasibility;
  std::optional<Mechanism> mechanism;  // present iff feasible
};

// Optimal DSIC report-oblivious mechanism: constant check probability
// x* = (c/R) / (P_bb - P_ab); infeasible when P_bb - P_ab < c/R.
MechanismResult optimal_ros(const SignalModel& model, const EconParams& econ, int n);

// Optimal DSIC report-sensitive mechanism (personal-report-sensitive shape):
// x_a = (c/R) / (P_{b|b} - P_b), x_b = (c/R) / (P_{a|a} - P_a); infeasible
// when P_{a|a} - P_a < c/R, in which case no DSIC mechanism exists at all.
MechanismResult optimal_rss(const SignalModel& model, const EconParams& econ, int n);

// Optimal report-sensitive uniform mechanism under conscientious play, via
// the binding-constraint recursion x(n) = (c/R) P_b / (P_aa P_bb - P_ab^2),
// x(k) = (c/R + P_ab x(k+1)) / P_bb. Infeasible when x(0) > 1.
MechanismResult optimal_rsus(const SignalModel& model, const EconParams& econ, int n);

// Heterogeneous optimum: per-student constants
// x_a_i = (c_i/R) / (Pr[s_i=B|s_TA=B] - Pr[s_i=B]) and symmetrically for x_b_i;
// infeasible as soon as one student's smaller margin drops below c_i/R.
MechanismResult optimal_hetero_prss(const HeteroModel& model, double reward);

// User-supplied count policy; entries outside [0,1] and nonzero boundary
// entries are rejected.
Mechanism custom_mechanism(const EconParams& econ, CountPolicy policy);

struct FeasibilityMargins {
  double ros_margin = 0.0;  // (P_bb - P_ab) - c/R
  double rss_margin = 0.0;  // (P_{a|a} - P_a) - c/R, always >= ros_margin
};

FeasibilityMargins feasibility_report(const SignalModel& model, const EconParams& econ);

}  // namespace spotcheck

#endif
