// Seeded Monte Carlo simulation of the grading game under arbitrary strategy
// profiles. One TA-consult event is drawn per trial at the maximum check
// probability; conditional on a consult, each student is checked
// independently at her ratio to the maximum, so the marginal per-student
// check probability is exactly the mechanism's.

#ifndef SPOTCHECK_SIM_HPP
#define SPOTCHECK_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "incentives.hpp"

namespace spotcheck {

struct SimConfig {
  long long trials = 1;
  uint64_t seed = 0;
  std::vector<Strategy> profile;  // one strategy per student
};

struct StudentStats {
  double mean_utility = 0.0;
  double utility_se = 0.0;
  double spot_check_rate = 0.0;
};

struct SimResult {
  long long trials = 0;
  double empirical_workload = 0.0;  // fraction of trials with a TA consult
  double workload_se = 0.0;
  double agreement_rate = 0.0;  // fraction of spot checks matching the TA
  std::vector<StudentStats> students;
};

SimResult simulate(const GameView& view, const Mechanism& mech, const SimConfig& config);
SimResult simulate(const SignalModel& model, const Mechanism& mech, const SimConfig& config);
SimResult simulate(const HeteroModel& model, const Mechanism& mech, const SimConfig& config);

// Max absolute difference between simulated mean utilities and the exact
// expected utilities, across students. Stochastic oracle for the incentive
// engine; n <= 6.
double utility_crosscheck(const SignalModel& model, const Mechanism& mech,
                          std::span<const Strategy> profile, long long trials, uint64_t seed);

}  // namespace spotcheck

#endif
