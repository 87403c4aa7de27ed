#include "incentives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spotcheck {

bool invests_effort(Strategy s) {
  switch (s) {
    case Strategy::truthful:
    case Strategy::effort_flip:
    case Strategy::effort_const_a:
    case Strategy::effort_const_b:
      return true;
    case Strategy::lazy_a:
    case Strategy::lazy_b:
      return false;
  }
  return false;
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::truthful: return "truthful";
    case Strategy::effort_flip: return "effort_flip";
    case Strategy::effort_const_a: return "effort_const_a";
    case Strategy::effort_const_b: return "effort_const_b";
    case Strategy::lazy_a: return "lazy_a";
    case Strategy::lazy_b: return "lazy_b";
  }
  return "?";
}

GameView make_view(const SignalModel& model, int n, const EconParams& econ) {
  validate_econ(econ);
  if (n < 1) raise(Errc::invalid_argument, "n >= 1 required");
  GameView view;
  view.prior_a = model.prior(Signal::A);
  std::array<double, 2> sig = {model.noise(Signal::A, Signal::A), model.noise(Signal::A, Signal::B)};
  view.student_sig_a.assign(static_cast<size_t>(n), sig);
  view.ta_sig_a = sig;
  view.costs.assign(static_cast<size_t>(n), econ.cost);
  return view;
}

GameView make_view(const HeteroModel& model) {
  GameView view;
  view.prior_a = model.prior(Signal::A);
  int n = model.num_students();
  view.student_sig_a.reserve(static_cast<size_t>(n));
  view.costs.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    view.student_sig_a.push_back({model.student_noise_prob(i, Signal::A, Signal::A),
                                  model.student_noise_prob(i, Signal::A, Signal::B)});
    view.costs.push_back(model.cost(i));
  }
  view.ta_sig_a = {model.ta_noise_prob(Signal::A, Signal::A),
                   model.ta_noise_prob(Signal::A, Signal::B)};
  return view;
}

namespace {

// Pr[report = A | q] for a student with Pr[s=A|q] = sig_a.
double report_prob_a(Strategy s, double sig_a) {
  switch (s) {
    case Strategy::truthful: return sig_a;
    case Strategy::effort_flip: return 1.0 - sig_a;
    case Strategy::effort_const_a:
    case Strategy::lazy_a: return 1.0;
    case Strategy::effort_const_b:
    case Strategy::lazy_b: return 0.0;
  }
  return 0.0;
}

}  // namespace

double expected_utility(const GameView& view, const Mechanism& mech, int student, Strategy own,
                        std::span<const Strategy> others) {
  int n = view.n();
  if (mech.n() != n) raise(Errc::dimension_mismatch, "mechanism sized for a different n");
  if (student < 0 || student >= n) raise(Errc::index_out_of_range, "student index out of range");
  if (static_cast<int>(others.size()) != n - 1) {
    raise(Errc::dimension_mismatch, "need one strategy per opponent");
  }
  const double reward = mech.econ().reward;

  double utility = 0.0;
  std::vector<double> count_dist;
  for (int qi = 0; qi < 2; ++qi) {
    double prior_q = qi == 0 ? view.prior_a : 1.0 - view.prior_a;
    if (prior_q == 0.0) continue;

    // Distribution of the number of A-reports among opponents given q.
    count_dist.assign(1, 1.0);
    int opp = 0;
    for (int j = 0; j < n; ++j) {
      if (j == student) continue;
      double p = report_prob_a(others[static_cast<size_t>(opp)],
                               view.student_sig_a[static_cast<size_t>(j)][static_cast<size_t>(qi)]);
      ++opp;
      count_dist.push_back(0.0);
      for (size_t k = count_dist.size() - 1; k > 0; --k) {
        count_dist[k] = count_dist[k] * (1.0 - p) + count_dist[k - 1] * p;
      }
      count_dist[0] *= 1.0 - p;
    }

    double own_report_a =
        report_prob_a(own, view.student_sig_a[static_cast<size_t>(student)][static_cast<size_t>(qi)]);
    double ta_a = view.ta_sig_a[static_cast<size_t>(qi)];
    for (int li = 0; li < 2; ++li) {
      Signal report = li == 0 ? Signal::A : Signal::B;
      double report_prob = li == 0 ? own_report_a : 1.0 - own_report_a;
      if (report_prob == 0.0) continue;
      double ta_match = li == 0 ? ta_a : 1.0 - ta_a;
      double expected_check = 0.0;
      for (size_t k = 0; k < count_dist.size(); ++k) {
        int total_a = static_cast<int>(k) + (report == Signal::A ? 1 : 0);
        expected_check += count_dist[k] * mech.check_probability(report, total_a, student);
      }
      utility += prior_q * report_prob * reward * ta_match * expected_check;
    }
  }
  if (invests_effort(own)) utility -= view.costs[static_cast<size_t>(student)];
  return utility;
}

double expected_utility(const SignalModel& model, const Mechanism& mech, int student, Strategy own,
                        std::span<const Strategy> others) {
  return expected_utility(make_view(model, mech.n(), mech.econ()), mech, student, own, others);
}

double expected_utility(const HeteroModel& model, const Mechanism& mech, int student, Strategy own,
                        std::span<const Strategy> others) {
  return expected_utility(make_view(model), mech, student, own, others);
}

namespace {

constexpr int kDsicMaxN = 6;
constexpr int kIccpMaxN = 8;

}  // namespace

VerificationReport verify(const GameView& view, const Mechanism& mech, Concept solution_concept,
                          const VerifyOptions& options) {
  int n = view.n();
  if (solution_concept == Concept::dsic && n > kDsicMaxN) {
    raise(Errc::too_large, "dsic verification enumerates 6^(n-1) profiles; n <= 6 required");
  }
  if (solution_concept == Concept::iccp && n > kIccpMaxN) {
    raise(Errc::too_large, "iccp verification enumerates 3^(n-1) profiles; n <= 8 required");
  }
  std::span<const Strategy> profile_set =
      solution_concept == Concept::dsic ? std::span<const Strategy>(kAllStrategies)
                                        : std::span<const Strategy>(kConscientiousStrategies);
  std::span<const Strategy> deviation_set =
      solution_concept == Concept::dsic || !options.iccp_restrict_own
          ? std::span<const Strategy>(kAllStrategies)
          : std::span<const Strategy>(kConscientiousStrategies);

  VerificationReport report;
  report.solution_concept = solution_concept;
  report.tolerance = options.tolerance;
  report.worst.utility_gap = -std::numeric_limits<double>::infinity();

  std::vector<Strategy> profile(static_cast<size_t>(n - 1), profile_set[0]);
  std::vector<size_t> digits(static_cast<size_t>(n - 1), 0);
  for (int student = 0; student < n; ++student) {
    std::fill(digits.begin(), digits.end(), 0);
    std::fill(profile.begin(), profile.end(), profile_set[0]);
    bool done = false;
    while (!done) {
      ++report.profiles_checked;
      double truthful = expected_utility(view, mech, student, Strategy::truthful, profile);
      for (Strategy dev : deviation_set) {
        if (dev == Strategy::truthful) continue;
        double gap = expected_utility(view, mech, student, dev, profile) - truthful;
        // Strict comparison keeps the first (lexicographically smallest)
        // witness, so the report is reproducible.
        if (gap > report.worst.utility_gap) {
          report.worst.utility_gap = gap;
          report.worst.student = student;
          report.worst.strategy = dev;
          report.worst.opponent_profile = profile;
        }
      }
      // next profile in lexicographic order
      done = true;
      for (size_t d = digits.size(); d-- > 0;) {
        if (++digits[d] < profile_set.size()) {
          profile[d] = profile_set[digits[d]];
          done = false;
          break;
        }
        digits[d] = 0;
        profile[d] = profile_set[0];
      }
      if (digits.empty()) done = true;
    }
  }
  if (report.worst.utility_gap == -std::numeric_limits<double>::infinity()) {
    report.worst.utility_gap = 0.0;
  }
  report.passed = report.worst.utility_gap <= options.tolerance;
  return report;
}

VerificationReport verify_dsic(const SignalModel& model, const Mechanism& mech, double tolerance) {
  VerifyOptions options;
  options.tolerance = tolerance;
  return verify(make_view(model, mech.n(), mech.econ()), mech, Concept::dsic, options);
}

VerificationReport verify_iccp(const SignalModel& model, const Mechanism& mech, double tolerance) {
  VerifyOptions options;
  options.tolerance = tolerance;
  return verify(make_view(model, mech.n(), mech.econ()), mech, Concept::iccp, options);
}

VerificationReport verify_dsic(const HeteroModel& model, const Mechanism& mech, double tolerance) {
  VerifyOptions options;
  options.tolerance = tolerance;
  return verify(make_view(model), mech, Concept::dsic, options);
}

VerificationReport verify_iccp(const HeteroModel& model, const Mechanism& mech, double tolerance) {
  VerifyOptions options;
  options.tolerance = tolerance;
  return verify(make_view(model), mech, Concept::iccp, options);
}

BestResponse best_response(const GameView& view, const Mechanism& mech, int student,
                           std::span<const Strategy> others) {
  BestResponse best;
  best.utility = -std::numeric_limits<double>::infinity();
  for (Strategy s : kAllStrategies) {
    double u = expected_utility(view, mech, student, s, others);
    if (u > best.utility) {
      best.utility = u;
      best.strategy = s;
    }
  }
  return best;
}

BestResponse best_response(const SignalModel& model, const Mechanism& mech, int student,
                           std::span<const Strategy> others) {
  return best_response(make_view(model, mech.n(), mech.econ()), mech, student, others);
}

}  // namespace spotcheck
