// Grid evaluations behind the experiment sweeps: the reward/cost sweep picks,
// for each (R/c, signal accuracy) pair, the prior that minimizes the scaled
// report-sensitive workload; the student-count sweep tabulates all three
// optima for a fixed model.

#ifndef SPOTCHECK_SWEEP_HPP
#define SPOTCHECK_SWEEP_HPP

#include "workload.hpp"

namespace spotcheck {

struct RcSweepPoint {
  double r_over_c = 0.0;
  double p_signal = 0.0;
  bool found = false;  // some prior admits both optima
  double prior_star = 0.0;
  double ros_workload = 0.0;
  double rss_workload = 0.0;
  double scaled_rss = 0.0;
  bool feasible_ros = false;
  bool feasible_rss = false;
};

// Symmetric signal noise Pr[s=q|q] = p_signal; priors are searched over
// [0.5, 1) in steps of prior_step (mirrored priors are equivalent after
// canonicalization).
RcSweepPoint sweep_rc_point(double r_over_c, double p_signal, int n, double prior_step);

struct NSweepRow {
  int n = 0;
  bool feasible_ros = false;
  bool feasible_rss = false;
  bool feasible_rsus = false;
  double ros_workload = 0.0;
  double rss_workload = 0.0;
  double rsus_workload = 0.0;
  double scaled_rss = 0.0;
  double scaled_rsus = 0.0;
};

NSweepRow sweep_n_row(const SignalModel& model, const EconParams& econ, int n);

}  // namespace spotcheck

#endif
