#include "mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace spotcheck {

void validate_econ(const EconParams& econ) {
  if (!(econ.cost > 0.0) || !std::isfinite(econ.cost)) {
    raise(Errc::invalid_argument, "effort cost must be strictly positive");
  }
  if (!(econ.reward > 0.0) || !std::isfinite(econ.reward)) {
    raise(Errc::invalid_argument, "reward must be strictly positive");
  }
}

const char* family_name(Family f) {
  switch (f) {
    case Family::ros: return "ros";
    case Family::rss_opt: return "rss";
    case Family::rsus_opt: return "rsus";
    case Family::hetero_prss: return "hetero";
    case Family::custom: return "custom";
  }
  return "?";
}

namespace {

void validate_count_policy(const CountPolicy& policy) {
  if (policy.n < 1) raise(Errc::invalid_argument, "count policy requires n >= 1");
  size_t want = static_cast<size_t>(policy.n) + 1;
  if (policy.x_a.size() != want || policy.x_b.size() != want) {
    raise(Errc::dimension_mismatch, "count policy needs n+1 entries per report");
  }
  for (double v : policy.x_a) {
    if (!(v >= 0.0 && v <= 1.0)) raise(Errc::invalid_probability, "x_a entry outside [0,1]");
  }
  for (double v : policy.x_b) {
    if (!(v >= 0.0 && v <= 1.0)) raise(Errc::invalid_probability, "x_b entry outside [0,1]");
  }
  if (policy.x_a.front() != 0.0) raise(Errc::invalid_argument, "x_a(0) must be zero");
  if (policy.x_b.back() != 0.0) raise(Errc::invalid_argument, "x_b(n) must be zero");
}

Feasibility feasible_with_margin(double margin) {
  Feasibility f;
  f.feasible = true;
  f.margin = margin;
  return f;
}

Feasibility infeasible(double margin, std::string reason) {
  Feasibility f;
  f.feasible = false;
  f.margin = margin;
  f.reason = std::move(reason);
  return f;
}

}  // namespace

Mechanism::Mechanism(Family family, EconParams econ, CountPolicy policy)
    : family_(family), econ_(econ), n_(policy.n), policy_(std::move(policy)) {
  validate_econ(econ_);
  validate_count_policy(std::get<CountPolicy>(policy_));
}

Mechanism::Mechanism(Family family, EconParams econ, std::vector<PersonalPolicy> policies)
    : family_(family), econ_(econ), n_(static_cast<int>(policies.size())), policy_(std::move(policies)) {
  validate_econ(econ_);
  if (n_ < 1) raise(Errc::invalid_argument, "personal policy requires at least one student");
  for (const PersonalPolicy& p : personal_policies()) {
    if (!(p.x_a >= 0.0 && p.x_a <= 1.0) || !(p.x_b >= 0.0 && p.x_b <= 1.0)) {
      raise(Errc::invalid_probability, "personal policy entry outside [0,1]");
    }
  }
}

const CountPolicy& Mechanism::count_policy() const {
  if (!has_count_policy()) raise(Errc::dimension_mismatch, "mechanism holds a personal policy");
  return std::get<CountPolicy>(policy_);
}

const std::vector<PersonalPolicy>& Mechanism::personal_policies() const {
  if (has_count_policy()) raise(Errc::dimension_mismatch, "mechanism holds a count policy");
  return std::get<std::vector<PersonalPolicy>>(policy_);
}

double Mechanism::check_probability(Signal report, int k, int student) const {
  if (has_count_policy()) {
    const CountPolicy& p = std::get<CountPolicy>(policy_);
    if (k < 0 || k > p.n) raise(Errc::index_out_of_range, "report count out of range");
    return report == Signal::A ? p.x_a[static_cast<size_t>(k)] : p.x_b[static_cast<size_t>(k)];
  }
  const auto& pols = std::get<std::vector<PersonalPolicy>>(policy_);
  if (student < 0 || student >= n_) raise(Errc::index_out_of_range, "student index out of range");
  const PersonalPolicy& p = pols[static_cast<size_t>(student)];
  return report == Signal::A ? p.x_a : p.x_b;
}

Mechanism Mechanism::scaled(double factor) const {
  if (!(factor >= 0.0 && factor <= 1.0)) {
    raise(Errc::invalid_argument, "scale factor must lie in [0,1]");
  }
  if (has_count_policy()) {
    CountPolicy p = std::get<CountPolicy>(policy_);
    for (double& v : p.x_a) v *= factor;
    for (double& v : p.x_b) v *= factor;
    return Mechanism(Family::custom, econ_, std::move(p));
  }
  std::vector<PersonalPolicy> pols = personal_policies();
  for (PersonalPolicy& p : pols) {
    p.x_a *= factor;
    p.x_b *= factor;
  }
  return Mechanism(Family::custom, econ_, std::move(pols));
}

// --- optimal constructors ---

MechanismResult optimal_ros(const SignalModel& model, const EconParams& econ, int n) {
  validate_econ(econ);
  if (n < 1) raise(Errc::invalid_argument, "n >= 1 required");
  double denom = model.pair_joint(Signal::B, Signal::B) - model.pair_joint(Signal::A, Signal::B);
  double margin = denom - econ.ratio();
  MechanismResult result;
  if (denom <= kProbTol) {
    result.feasibility = infeasible(margin, "uninformative signals: P_bb - P_ab vanishes");
    return result;
  }
  if (margin < -kProbTol) {
    result.feasibility = infeasible(margin, "no DSIC ROS mechanism: P_bb - P_ab < c/R");
    return result;
  }
  double x_star = std::min(1.0, econ.ratio() / denom);
  CountPolicy policy;
  policy.n = n;
  policy.x_a.assign(static_cast<size_t>(n) + 1, x_star);
  policy.x_b.assign(static_cast<size_t>(n) + 1, x_star);
  policy.x_a.front() = 0.0;
  policy.x_b.back() = 0.0;
  result.feasibility = feasible_with_margin(margin);
  result.mechanism = Mechanism(Family::ros, econ, std::move(policy));
  return result;
}

MechanismResult optimal_rss(const SignalModel& model, const EconParams& econ, int n) {
  validate_econ(econ);
  if (n < 1) raise(Errc::invalid_argument, "n >= 1 required");
  MechanismResult result;
  double variance = model.signal_variance();
  if (variance <= kProbTol) {
    result.feasibility = infeasible(-econ.ratio(), "uninformative signals");
    return result;
  }
  double p_a = model.marginal(Signal::A);
  double p_b = model.marginal(Signal::B);
  // P_{a|a} - P_a = D / P_a; the binding margin under canonical naming.
  double margin = variance / p_a - econ.ratio();
  if (margin < -kProbTol) {
    result.feasibility = infeasible(margin, "no DSIC spot-checking mechanism: P_a|a - P_a < c/R");
    return result;
  }
  double x_a = econ.ratio() * p_b / variance;
  double x_b = econ.ratio() * p_a / variance;
  x_a = std::min(1.0, x_a);
  x_b = std::min(1.0, x_b);
  CountPolicy policy;
  policy.n = n;
  policy.x_a.assign(static_cast<size_t>(n) + 1, x_a);
  policy.x_b.assign(static_cast<size_t>(n) + 1, x_b);
  policy.x_a.front() = 0.0;
  policy.x_b.back() = 0.0;
  result.feasibility = feasible_with_margin(margin);
  result.mechanism = Mechanism(Family::rss_opt, econ, std::move(policy));
  return result;
}

MechanismResult optimal_rsus(const SignalModel& model, const EconParams& econ, int n) {
  validate_econ(econ);
  if (n < 1) raise(Errc::invalid_argument, "n >= 1 required");
  double p_bb = model.pair_joint(Signal::B, Signal::B);
  double p_ab = model.pair_joint(Signal::A, Signal::B);
  if (p_bb <= kProbTol) raise(Errc::degenerate, "degenerate model: P_bb vanishes");
  MechanismResult result;
  double variance = model.signal_variance();
  if (variance <= kProbTol) {
    result.feasibility = infeasible(-econ.ratio(), "uninformative signals");
    return result;
  }
  // Both constraint families tight at k = n-1 pin x(n); from there the tight
  // truthful-vs-lazy-A constraints give x(k) back to k = 0.
  std::vector<double> x(static_cast<size_t>(n) + 1, 0.0);
  x[static_cast<size_t>(n)] = econ.ratio() * model.marginal(Signal::B) / variance;
  for (int k = n - 1; k >= 0; --k) {
    x[static_cast<size_t>(k)] = (econ.ratio() + p_ab * x[static_cast<size_t>(k) + 1]) / p_bb;
  }
  double margin = 1.0 - x.front();
  if (margin < -kProbTol) {
    result.feasibility = infeasible(margin, "uniform schedule exceeds probability one at x(0)");
    return result;
  }
  CountPolicy policy;
  policy.n = n;
  policy.x_a = x;
  policy.x_b = x;
  for (double& v : policy.x_a) v = std::min(1.0, v);
  for (double& v : policy.x_b) v = std::min(1.0, v);
  policy.x_a.front() = 0.0;
  policy.x_b.back() = 0.0;
  result.feasibility = feasible_with_margin(margin);
  result.mechanism = Mechanism(Family::rsus_opt, econ, std::move(policy));
  return result;
}

MechanismResult optimal_hetero_prss(const HeteroModel& model, double reward) {
  if (!(reward > 0.0) || !std::isfinite(reward)) {
    raise(Errc::invalid_argument, "reward must be strictly positive");
  }
  MechanismResult result;
  std::vector<PersonalPolicy> policies;
  policies.reserve(static_cast<size_t>(model.num_students()));
  double worst_margin = 1.0;
  for (int i = 0; i < model.num_students(); ++i) {
    double ratio = model.cost(i) / reward;
    double denom_b = 0.0;  // Pr[s_i=a | s_TA=a] - Pr[s_i=a]
    double denom_a = 0.0;  // Pr[s_i=b | s_TA=b] - Pr[s_i=b]
    for (Signal l : {Signal::A, Signal::B}) {
      double ta_m = model.ta_marginal(l);
      if (ta_m <= 0.0) {
        result.feasibility = infeasible(-ratio, "TA never observes signal " +
                                                    std::string(l == Signal::A ? "a" : "b"));
        return result;
      }
      double diff = model.ta_joint(i, l, l) / ta_m - model.student_marginal(i, l);
      (l == Signal::A ? denom_b : denom_a) = diff;
    }
    double margin = std::min(denom_a, denom_b) - ratio;
    worst_margin = std::min(worst_margin, margin);
    if (denom_a <= kProbTol || denom_b <= kProbTol) {
      result.feasibility = infeasible(margin, "student " + std::to_string(i) +
                                                  " is uncorrelated with the TA signal");
      return result;
    }
    if (margin < -kProbTol) {
      result.feasibility = infeasible(margin, "student " + std::to_string(i) +
                                                  ": min conditional margin below c_i/R");
      return result;
    }
    PersonalPolicy p;
    p.x_a = std::min(1.0, ratio / denom_a);
    p.x_b = std::min(1.0, ratio / denom_b);
    policies.push_back(p);
  }
  result.feasibility = feasible_with_margin(worst_margin);
  EconParams econ;
  econ.cost = model.cost(0);
  econ.reward = reward;
  result.mechanism = Mechanism(Family::hetero_prss, econ, std::move(policies));
  return result;
}

Mechanism custom_mechanism(const EconParams& econ, CountPolicy policy) {
  return Mechanism(Family::custom, econ, std::move(policy));
}

FeasibilityMargins feasibility_report(const SignalModel& model, const EconParams& econ) {
  validate_econ(econ);
  FeasibilityMargins margins;
  double p_bb = model.pair_joint(Signal::B, Signal::B);
  double p_ab = model.pair_joint(Signal::A, Signal::B);
  margins.ros_margin = (p_bb - p_ab) - econ.ratio();
  margins.rss_margin = model.signal_variance() / model.marginal(Signal::A) - econ.ratio();
  return margins;
}

}  // namespace spotcheck
