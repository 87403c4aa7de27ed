// Exact expected-utility engine over the full strategy space and brute-force
// certification of incentive compatibility.
//
// Expected utility is computed in closed form: condition on the quality, fold
// the opponents' report-count distribution with a Bernoulli convolution, and
// take the reward expectation against the TA noise. Verification enumerates
// pure opponent profiles only; that is sound because each agent's expected
// utility is affine in her own mixing weights and in each opponent's, so a
// profitable mixed deviation implies a profitable pure one.

#ifndef SPOTCHECK_INCENTIVES_HPP
#define SPOTCHECK_INCENTIVES_HPP

#include <array>
#include <span>
#include <vector>

#include "mechanism.hpp"

namespace spotcheck {

enum class Strategy : int {
  truthful = 0,      // invest effort, report the observed signal
  effort_flip,       // invest effort, report the opposite signal
  effort_const_a,    // invest effort, always report A
  effort_const_b,    // invest effort, always report B
  lazy_a,            // no effort, always report A
  lazy_b,            // no effort, always report B
};

inline constexpr std::array<Strategy, 6> kAllStrategies = {
    Strategy::truthful,       Strategy::effort_flip, Strategy::effort_const_a,
    Strategy::effort_const_b, Strategy::lazy_a,      Strategy::lazy_b};

// Strategies where investing effort implies reporting the observed signal.
inline constexpr std::array<Strategy, 3> kConscientiousStrategies = {
    Strategy::truthful, Strategy::lazy_a, Strategy::lazy_b};

bool invests_effort(Strategy s);
const char* strategy_name(Strategy s);

// Flattened view of either model kind: prior, per-student signal noise, TA
// noise and per-student effort costs.
struct GameView {
  double prior_a = 0.5;
  std::vector<std::array<double, 2>> student_sig_a;  // [i][q] = Pr[s_i=A | q]
  std::array<double, 2> ta_sig_a = {0.5, 0.5};       // [q]    = Pr[s_TA=A | q]
  std::vector<double> costs;

  int n() const { return static_cast<int>(student_sig_a.size()); }
};

GameView make_view(const SignalModel& model, int n, const EconParams& econ);
GameView make_view(const HeteroModel& model);

double expected_utility(const GameView& view, const Mechanism& mech, int student, Strategy own,
                        std::span<const Strategy> others);
double expected_utility(const SignalModel& model, const Mechanism& mech, int student, Strategy own,
                        std::span<const Strategy> others);
double expected_utility(const HeteroModel& model, const Mechanism& mech, int student, Strategy own,
                        std::span<const Strategy> others);

enum class Concept { dsic, iccp };

struct Deviation {
  int student = -1;
  std::vector<Strategy> opponent_profile;
  Strategy strategy = Strategy::truthful;
  double utility_gap = 0.0;  // deviation utility minus truthful utility
};

struct VerificationReport {
  Concept solution_concept = Concept::dsic;
  bool passed = false;
  Deviation worst;
  double tolerance = 0.0;
  long long profiles_checked = 0;
};

struct VerifyOptions {
  double tolerance = 1e-9;
  // Under conscientious play the definition is read as restricting the
  // deviating student to the conscientious set as well; flip this to let her
  // misreport an observed signal while opponents stay conscientious.
  bool iccp_restrict_own = true;
};

VerificationReport verify(const GameView& view, const Mechanism& mech, Concept solution_concept,
                          const VerifyOptions& options = {});
VerificationReport verify_dsic(const SignalModel& model, const Mechanism& mech,
                               double tolerance = 1e-9);
VerificationReport verify_iccp(const SignalModel& model, const Mechanism& mech,
                               double tolerance = 1e-9);
VerificationReport verify_dsic(const HeteroModel& model, const Mechanism& mech,
                               double tolerance = 1e-9);
VerificationReport verify_iccp(const HeteroModel& model, const Mechanism& mech,
                               double tolerance = 1e-9);

struct BestResponse {
  Strategy strategy = Strategy::truthful;
  double utility = 0.0;
};

// Argmax over the six pure strategies; ties resolve to the earliest strategy
// in enum order, so weak incentive compatibility reports as truthful play.
BestResponse best_response(const GameView& view, const Mechanism& mech, int student,
                           std::span<const Strategy> others);
BestResponse best_response(const SignalModel& model, const Mechanism& mech, int student,
                           std::span<const Strategy> others);

}  // namespace spotcheck

#endif
