#include "sweep.hpp"

#include <cmath>

namespace spotcheck {

RcSweepPoint sweep_rc_point(double r_over_c, double p_signal, int n, double prior_step) {
  if (!(r_over_c > 0.0)) raise(Errc::invalid_argument, "R/c must be strictly positive");
  if (!(p_signal >= 0.0 && p_signal <= 1.0)) {
    raise(Errc::invalid_probability, "p_signal must lie in [0,1]");
  }
  if (!(prior_step > 0.0 && prior_step < 0.5)) {
    raise(Errc::invalid_argument, "prior_step must lie in (0, 0.5)");
  }
  if (n < 1) raise(Errc::invalid_argument, "n >= 1 required");

  RcSweepPoint point;
  point.r_over_c = r_over_c;
  point.p_signal = p_signal;
  EconParams econ{1.0, r_over_c};

  long steps = static_cast<long>(std::floor(0.5 / prior_step)) + 1;
  for (long i = 0; i < steps; ++i) {
    double prior = 0.5 + static_cast<double>(i) * prior_step;
    if (prior >= 1.0) break;
    SignalModel model = SignalModel::build(prior, p_signal, p_signal);
    if (!model.informative()) continue;
    MechanismResult ros = optimal_ros(model, econ, n);
    MechanismResult rss = optimal_rss(model, econ, n);
    if (!ros.mechanism || !rss.mechanism) continue;
    double ros_w = ta_workload(model, *ros.mechanism).workload;
    double rss_w = ta_workload(model, *rss.mechanism).workload;
    if (!(ros_w > 0.0)) continue;
    double scaled = rss_w / ros_w;
    if (!point.found || scaled < point.scaled_rss) {
      point.found = true;
      point.prior_star = prior;
      point.ros_workload = ros_w;
      point.rss_workload = rss_w;
      point.scaled_rss = scaled;
      point.feasible_ros = true;
      point.feasible_rss = true;
    }
  }
  return point;
}

NSweepRow sweep_n_row(const SignalModel& model, const EconParams& econ, int n) {
  NSweepRow row;
  row.n = n;
  ComparisonReport report = compare_mechanisms(model, econ, n);
  row.feasible_ros = report.ros.feasibility.feasible;
  row.feasible_rss = report.rss.feasibility.feasible;
  row.feasible_rsus = report.rsus.feasibility.feasible;
  if (report.ros.workload) row.ros_workload = report.ros.workload->workload;
  if (report.rss.workload) row.rss_workload = report.rss.workload->workload;
  if (report.rsus.workload) row.rsus_workload = report.rsus.workload->workload;
  if (report.scaled_rss) row.scaled_rss = *report.scaled_rss;
  if (report.scaled_rsus) row.scaled_rsus = *report.scaled_rsus;
  return row;
}

}  // namespace spotcheck
