#include "workload.hpp"

#include <algorithm>
#include <cmath>

namespace spotcheck {

WorkloadReport ta_workload(const SignalModel& model, const Mechanism& mech) {
  if (!mech.has_count_policy()) {
    raise(Errc::dimension_mismatch, "ta_workload requires a count policy");
  }
  const CountPolicy& policy = mech.count_policy();
  CountDistribution dist = model.count_distribution(policy.n);
  WorkloadReport report;
  report.family = mech.family();
  report.per_count.reserve(dist.probs.size());
  double total = 0.0;
  for (int j = 0; j <= policy.n; ++j) {
    size_t idx = static_cast<size_t>(j);
    double consult = std::max(policy.x_a[idx], policy.x_b[idx]);
    report.per_count.emplace_back(dist.probs[idx], consult);
    total += dist.probs[idx] * consult;
  }
  report.workload = total;
  return report;
}

double hetero_workload(const HeteroModel& model, std::span<const PersonalPolicy> policies) {
  int n = model.num_students();
  if (static_cast<int>(policies.size()) != n) {
    raise(Errc::dimension_mismatch, "one policy per student required");
  }
  if (n > 20) raise(Errc::too_large, "hetero workload enumeration limited to n <= 20");
  double total = 0.0;
  const uint32_t vectors = 1u << n;
  for (uint32_t mask = 0; mask < vectors; ++mask) {
    // bit i set = student i observes B
    double consult = 0.0;
    for (int i = 0; i < n; ++i) {
      const PersonalPolicy& p = policies[static_cast<size_t>(i)];
      consult = std::max(consult, (mask >> i) & 1u ? p.x_b : p.x_a);
    }
    double prob = 0.0;
    for (Signal q : {Signal::A, Signal::B}) {
      double prod = model.prior(q);
      for (int i = 0; i < n; ++i) {
        Signal s = (mask >> i) & 1u ? Signal::B : Signal::A;
        prod *= model.student_noise_prob(i, s, q);
      }
      prob += prod;
    }
    total += prob * consult;
  }
  return total;
}

double hetero_workload(const HeteroModel& model, const Mechanism& mech) {
  return hetero_workload(model, std::span<const PersonalPolicy>(mech.personal_policies()));
}

double savings_lower_bound(const SignalModel& model, const EconParams& econ) {
  validate_econ(econ);
  double p_a = model.marginal(Signal::A);
  double p_b = model.marginal(Signal::B);
  if (!(p_a > p_b)) {
    raise(Errc::not_applicable, "savings bound requires P_a > P_b");
  }
  double ros_denom = model.pair_joint(Signal::B, Signal::B) - model.pair_joint(Signal::A, Signal::B);
  if (!(ros_denom > econ.ratio())) {
    raise(Errc::not_applicable, "savings bound requires a strictly feasible ROS mechanism");
  }
  return econ.ratio() * p_b / model.signal_variance();
}

ComparisonReport compare_mechanisms(const SignalModel& model, const EconParams& econ, int n) {
  if (n < 1) raise(Errc::invalid_argument, "n >= 1 required");
  ComparisonReport report;
  auto fill = [&](MechanismResult&& result, ComparisonEntry& entry) {
    entry.feasibility = std::move(result.feasibility);
    if (result.mechanism) entry.workload = ta_workload(model, *result.mechanism);
  };
  fill(optimal_ros(model, econ, n), report.ros);
  fill(optimal_rss(model, econ, n), report.rss);
  fill(optimal_rsus(model, econ, n), report.rsus);
  if (report.ros.workload && report.ros.workload->workload > 0.0) {
    double ros_w = report.ros.workload->workload;
    if (report.rss.workload) report.scaled_rss = report.rss.workload->workload / ros_w;
    if (report.rsus.workload) report.scaled_rsus = report.rsus.workload->workload / ros_w;
  }
  return report;
}

}  // namespace spotcheck
