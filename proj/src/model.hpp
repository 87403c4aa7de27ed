// Probabilistic model of assignment quality and grader signals.
//
// A binary quality q in {A, B} is drawn from a prior; each grader who invests
// effort observes a signal drawn from a conditional noise distribution,
// independently across graders given q. Everything downstream (mechanism
// construction, workload, incentives, simulation) pulls its joint and
// conditional probabilities from here.

#ifndef SPOTCHECK_MODEL_HPP
#define SPOTCHECK_MODEL_HPP

#include <span>
#include <vector>

#include "errors.hpp"

namespace spotcheck {

enum class Signal : int { A = 0, B = 1 };

inline Signal other(Signal s) { return s == Signal::A ? Signal::B : Signal::A; }

// Probability identities are asserted to this tolerance; feasibility margins
// down to -kProbTol still count as feasible.
inline constexpr double kProbTol = 1e-12;

struct CountDistribution {
  int n = 0;
  std::vector<double> probs;  // probs[j] = Pr[exactly j graders observe A]
};

// Signal model with canonical naming: labels are chosen so that the marginal
// of A is at least that of B. If the raw inputs violate that, both quality and
// signal labels are flipped and label_swapped() reports it.
class SignalModel {
 public:
  // prior_a = Pr[q=A], p_a_given_a = Pr[s=A|q=A], p_b_given_b = Pr[s=B|q=B].
  static SignalModel build(double prior_a, double p_a_given_a, double p_b_given_b);

  double prior(Signal q) const { return q == Signal::A ? prior_a_ : 1.0 - prior_a_; }
  // Pr[s=l | q=t]
  double noise(Signal l, Signal t) const;
  // Pr[s=l]
  double marginal(Signal l) const { return l == Signal::A ? p_a_ : 1.0 - p_a_; }
  // Pr[s1=l, s2=t] for two graders; symmetric in (l, t).
  double pair_joint(Signal l, Signal t) const;
  // Pr[s1=l | s2=t]; throws Errc::degenerate when marginal(t) == 0.
  double conditional(Signal l, Signal t) const;
  // Distribution of the number of A-signals among n truthful graders.
  CountDistribution count_distribution(int n) const;
  // Joint probability of a full signal vector; permutation invariant.
  double vector_joint(std::span<const Signal> signals) const;

  // Mixture variance D = P_aa - P_a^2 = P_bb - P_b^2 = P_aa*P_bb - P_ab^2.
  double signal_variance() const;
  bool informative(double tol = kProbTol) const { return signal_variance() > tol; }
  bool label_swapped() const { return label_swapped_; }

  double prior_a() const { return prior_a_; }
  double p_a_given_a() const { return p_a_given_a_; }
  double p_b_given_b() const { return p_b_given_b_; }

 private:
  SignalModel(double prior_a, double p_a_given_a, double p_b_given_b, bool swapped);

  double prior_a_;
  double p_a_given_a_;
  double p_b_given_b_;
  bool label_swapped_;
  double p_a_;  // cached marginal Pr[s=A]
};

struct NoisePair {
  double p_a_given_a = 0.5;  // Pr[s=A|q=A]
  double p_b_given_b = 0.5;  // Pr[s=B|q=B]
};

// Per-student noise and effort costs plus a separate TA noise model.
class HeteroModel {
 public:
  static HeteroModel build(double prior_a, std::vector<NoisePair> students, NoisePair ta,
                           std::vector<double> costs);

  int num_students() const { return static_cast<int>(students_.size()); }
  double prior(Signal q) const { return q == Signal::A ? prior_a_ : 1.0 - prior_a_; }
  double prior_a() const { return prior_a_; }
  const NoisePair& student_noise(int i) const;
  const NoisePair& ta_noise() const { return ta_; }
  double cost(int i) const;

  // Pr[s_i=l | q=t] and Pr[s_TA=l | q=t]
  double student_noise_prob(int i, Signal l, Signal t) const;
  double ta_noise_prob(Signal l, Signal t) const;
  // Marginals Pr[s_i=l], Pr[s_TA=l]
  double student_marginal(int i, Signal l) const;
  double ta_marginal(Signal l) const;
  // Joint Pr[s_i=l, s_TA=t]; throws Errc::index_out_of_range for bad i.
  double ta_joint(int i, Signal l, Signal t) const;

 private:
  HeteroModel(double prior_a, std::vector<NoisePair> students, NoisePair ta,
              std::vector<double> costs);

  double prior_a_;
  std::vector<NoisePair> students_;
  NoisePair ta_;
  std::vector<double> costs_;
};

// Homogeneous copy of a signal model: every student and the TA share the
// model's noise, all costs equal. Used to cross-check the heterogeneous path
// against the homogeneous one.
HeteroModel homogenize(const SignalModel& model, int n, double cost);

}  // namespace spotcheck

#endif
