// Analytic TA workload: the probability that the TA must produce a signal per
// assignment under all-truthful play, plus mechanism-family comparisons and
// the analytic lower bound on the report-sensitive saving.

#ifndef SPOTCHECK_WORKLOAD_HPP
#define SPOTCHECK_WORKLOAD_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mechanism.hpp"

namespace spotcheck {

struct WorkloadReport {
  double workload = 0.0;
  // per report-count j: (probability of count j, consult probability at j)
  std::vector<std::pair<double, double>> per_count;
  Family family = Family::custom;
};

// Expected consult probability sum_t Pr[q=t] sum_j C(n,j) Pr[a|t]^j Pr[b|t]^{n-j}
// max{x_a(j), x_b(j)}. The mechanism must hold a count policy.
WorkloadReport ta_workload(const SignalModel& model, const Mechanism& mech);

// Exact exponential enumeration of the heterogeneous objective:
// sum over all 2^n signal vectors of Pr[vector] * max_i x_i^{s_i}. n <= 20.
double hetero_workload(const HeteroModel& model, std::span<const PersonalPolicy> policies);
double hetero_workload(const HeteroModel& model, const Mechanism& mech);

// (c/R) * P_b / (P_aa P_bb - P_ab^2): the guaranteed gap between the optimal
// report-oblivious and report-sensitive workloads. Requires P_a > P_b and a
// strictly feasible report-oblivious mechanism.
double savings_lower_bound(const SignalModel& model, const EconParams& econ);

struct ComparisonEntry {
  Feasibility feasibility;
  std::optional<WorkloadReport> workload;
  double workload_value() const { return workload ? workload->workload : 0.0; }
};

struct ComparisonReport {
  ComparisonEntry ros;
  ComparisonEntry rss;
  ComparisonEntry rsus;
  std::optional<double> scaled_rss;   // rss / ros when both feasible
  std::optional<double> scaled_rsus;  // rsus / ros when both feasible
};

ComparisonReport compare_mechanisms(const SignalModel& model, const EconParams& econ, int n);

}  // namespace spotcheck

#endif
