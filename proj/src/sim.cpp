#include "sim.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace spotcheck {

namespace {

// Fixed draw order per trial: quality, signals of effort-investing students
// in index order, the consult coin, the TA signal (only if consulted), then
// per-student check coins in index order (only if consulted).
struct Trial {
  bool consulted = false;
  int checked_mask = 0;
  int agreed_count = 0;
  int checked_count = 0;
  std::vector<double> utilities;
};

}  // namespace

SimResult simulate(const GameView& view, const Mechanism& mech, const SimConfig& config) {
  int n = view.n();
  if (mech.n() != n) raise(Errc::dimension_mismatch, "mechanism sized for a different n");
  if (static_cast<int>(config.profile.size()) != n) {
    raise(Errc::dimension_mismatch, "profile length must equal the student count");
  }
  if (config.trials < 1) raise(Errc::invalid_argument, "trials >= 1 required");

  const double reward = mech.econ().reward;
  long long consults = 0;
  long long checked_total = 0;
  long long agreed_total = 0;
  std::vector<double> util_sum(static_cast<size_t>(n), 0.0);
  std::vector<double> util_sq_sum(static_cast<size_t>(n), 0.0);
  std::vector<long long> checked_per_student(static_cast<size_t>(n), 0);

  std::vector<Signal> reports(static_cast<size_t>(n), Signal::A);
  for (long long trial = 0; trial < config.trials; ++trial) {
    SplitMix64 rng = SplitMix64::substream(config.seed, static_cast<uint64_t>(trial));
    int qi = rng.bernoulli(view.prior_a) ? 0 : 1;

    int count_a = 0;
    for (int i = 0; i < n; ++i) {
      Strategy s = config.profile[static_cast<size_t>(i)];
      Signal observed = Signal::A;
      if (invests_effort(s)) {
        observed =
            rng.bernoulli(view.student_sig_a[static_cast<size_t>(i)][static_cast<size_t>(qi)])
                ? Signal::A
                : Signal::B;
      }
      Signal r;
      switch (s) {
        case Strategy::truthful: r = observed; break;
        case Strategy::effort_flip: r = other(observed); break;
        case Strategy::effort_const_a:
        case Strategy::lazy_a: r = Signal::A; break;
        default: r = Signal::B; break;
      }
      reports[static_cast<size_t>(i)] = r;
      if (r == Signal::A) ++count_a;
    }

    double consult_prob = 0.0;
    for (int i = 0; i < n; ++i) {
      consult_prob =
          std::max(consult_prob, mech.check_probability(reports[static_cast<size_t>(i)], count_a, i));
    }

    bool consulted = consult_prob > 0.0 && rng.bernoulli(consult_prob);
    if (consulted) {
      ++consults;
      Signal ta = rng.bernoulli(view.ta_sig_a[static_cast<size_t>(qi)]) ? Signal::A : Signal::B;
      for (int i = 0; i < n; ++i) {
        double x = mech.check_probability(reports[static_cast<size_t>(i)], count_a, i);
        double u = 0.0;
        if (rng.bernoulli(x / consult_prob)) {
          ++checked_per_student[static_cast<size_t>(i)];
          ++checked_total;
          if (reports[static_cast<size_t>(i)] == ta) {
            ++agreed_total;
            u += reward;
          }
        }
        if (invests_effort(config.profile[static_cast<size_t>(i)])) {
          u -= view.costs[static_cast<size_t>(i)];
        }
        util_sum[static_cast<size_t>(i)] += u;
        util_sq_sum[static_cast<size_t>(i)] += u * u;
      }
    } else {
      for (int i = 0; i < n; ++i) {
        double u = invests_effort(config.profile[static_cast<size_t>(i)])
                       ? -view.costs[static_cast<size_t>(i)]
                       : 0.0;
        util_sum[static_cast<size_t>(i)] += u;
        util_sq_sum[static_cast<size_t>(i)] += u * u;
      }
    }
  }

  SimResult result;
  result.trials = config.trials;
  double t = static_cast<double>(config.trials);
  result.empirical_workload = static_cast<double>(consults) / t;
  double p = result.empirical_workload;
  result.workload_se = config.trials > 1 ? std::sqrt(p * (1.0 - p) / (t - 1.0)) : 0.0;
  result.agreement_rate =
      checked_total > 0 ? static_cast<double>(agreed_total) / static_cast<double>(checked_total) : 0.0;
  result.students.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    StudentStats& s = result.students[static_cast<size_t>(i)];
    double mean = util_sum[static_cast<size_t>(i)] / t;
    s.mean_utility = mean;
    if (config.trials > 1) {
      double var = (util_sq_sum[static_cast<size_t>(i)] - t * mean * mean) / (t - 1.0);
      s.utility_se = std::sqrt(std::max(0.0, var) / t);
    }
    s.spot_check_rate = static_cast<double>(checked_per_student[static_cast<size_t>(i)]) / t;
  }
  return result;
}

SimResult simulate(const SignalModel& model, const Mechanism& mech, const SimConfig& config) {
  return simulate(make_view(model, mech.n(), mech.econ()), mech, config);
}

SimResult simulate(const HeteroModel& model, const Mechanism& mech, const SimConfig& config) {
  return simulate(make_view(model), mech, config);
}

double utility_crosscheck(const SignalModel& model, const Mechanism& mech,
                          std::span<const Strategy> profile, long long trials, uint64_t seed) {
  int n = mech.n();
  if (n > 6) raise(Errc::too_large, "crosscheck limited to n <= 6");
  GameView view = make_view(model, n, mech.econ());
  SimConfig config;
  config.trials = trials;
  config.seed = seed;
  config.profile.assign(profile.begin(), profile.end());
  SimResult sim = simulate(view, mech, config);

  double worst = 0.0;
  std::vector<Strategy> others(static_cast<size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    size_t o = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) others[o++] = profile[static_cast<size_t>(j)];
    }
    double exact = expected_utility(view, mech, i, profile[static_cast<size_t>(i)], others);
    worst = std::max(worst, std::abs(exact - sim.students[static_cast<size_t>(i)].mean_utility));
  }
  return worst;
}

}  // namespace spotcheck
