#include "model.hpp"

#include <cmath>
#include <string>

namespace spotcheck {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    raise(Errc::invalid_probability, std::string(name) + " must lie in [0,1], got " + std::to_string(p));
  }
}

// count_distribution keeps binomial coefficients in plain doubles; C(1000,500)
// is already ~2.7e299, so anything larger is rejected instead of overflowing.
constexpr int kMaxCountN = 1000;

}  // namespace

SignalModel::SignalModel(double prior_a, double p_a_given_a, double p_b_given_b, bool swapped)
    : prior_a_(prior_a),
      p_a_given_a_(p_a_given_a),
      p_b_given_b_(p_b_given_b),
      label_swapped_(swapped),
      p_a_(prior_a * p_a_given_a + (1.0 - prior_a) * (1.0 - p_b_given_b)) {}

SignalModel SignalModel::build(double prior_a, double p_a_given_a, double p_b_given_b) {
  check_probability(prior_a, "prior_a");
  check_probability(p_a_given_a, "p_a_given_a");
  check_probability(p_b_given_b, "p_b_given_b");
  double raw_p_a = prior_a * p_a_given_a + (1.0 - prior_a) * (1.0 - p_b_given_b);
  if (raw_p_a >= 0.5) {
    return SignalModel(prior_a, p_a_given_a, p_b_given_b, false);
  }
  // Relabel: swap both quality and signal names so that marginal(A) >= marginal(B).
  return SignalModel(1.0 - prior_a, p_b_given_b, p_a_given_a, true);
}

double SignalModel::noise(Signal l, Signal t) const {
  if (t == Signal::A) {
    return l == Signal::A ? p_a_given_a_ : 1.0 - p_a_given_a_;
  }
  return l == Signal::B ? p_b_given_b_ : 1.0 - p_b_given_b_;
}

double SignalModel::pair_joint(Signal l, Signal t) const {
  double total = 0.0;
  for (Signal q : {Signal::A, Signal::B}) {
    total += prior(q) * noise(l, q) * noise(t, q);
  }
  return total;
}

double SignalModel::conditional(Signal l, Signal t) const {
  double m = marginal(t);
  if (m <= 0.0) {
    raise(Errc::degenerate, "conditioning signal has zero marginal probability");
  }
  return pair_joint(l, t) / m;
}

CountDistribution SignalModel::count_distribution(int n) const {
  if (n < 1) raise(Errc::invalid_argument, "count_distribution requires n >= 1");
  if (n > kMaxCountN) raise(Errc::too_large, "count_distribution limited to n <= 1000");
  CountDistribution dist;
  dist.n = n;
  dist.probs.assign(static_cast<size_t>(n) + 1, 0.0);
  for (Signal q : {Signal::A, Signal::B}) {
    double pa = noise(Signal::A, q);
    double pb = 1.0 - pa;
    double binom = 1.0;  // C(n, j), updated iteratively
    for (int j = 0; j <= n; ++j) {
      dist.probs[static_cast<size_t>(j)] +=
          prior(q) * binom * std::pow(pa, j) * std::pow(pb, n - j);
      binom *= static_cast<double>(n - j) / static_cast<double>(j + 1);
    }
  }
  return dist;
}

double SignalModel::vector_joint(std::span<const Signal> signals) const {
  if (signals.empty()) raise(Errc::invalid_argument, "vector_joint requires a nonempty vector");
  double total = 0.0;
  for (Signal q : {Signal::A, Signal::B}) {
    double prod = prior(q);
    for (Signal s : signals) prod *= noise(s, q);
    total += prod;
  }
  return total;
}

double SignalModel::signal_variance() const {
  return pair_joint(Signal::A, Signal::A) - p_a_ * p_a_;
}

// --- HeteroModel ---

HeteroModel::HeteroModel(double prior_a, std::vector<NoisePair> students, NoisePair ta,
                         std::vector<double> costs)
    : prior_a_(prior_a), students_(std::move(students)), ta_(ta), costs_(std::move(costs)) {}

HeteroModel HeteroModel::build(double prior_a, std::vector<NoisePair> students, NoisePair ta,
                               std::vector<double> costs) {
  check_probability(prior_a, "prior_a");
  if (students.empty()) raise(Errc::invalid_argument, "hetero model requires at least one student");
  if (students.size() != costs.size()) {
    raise(Errc::dimension_mismatch, "one effort cost per student required");
  }
  for (const NoisePair& np : students) {
    check_probability(np.p_a_given_a, "student p_a_given_a");
    check_probability(np.p_b_given_b, "student p_b_given_b");
  }
  check_probability(ta.p_a_given_a, "ta p_a_given_a");
  check_probability(ta.p_b_given_b, "ta p_b_given_b");
  for (double c : costs) {
    if (!(c > 0.0)) raise(Errc::invalid_argument, "effort costs must be strictly positive");
  }
  return HeteroModel(prior_a, std::move(students), ta, std::move(costs));
}

const NoisePair& HeteroModel::student_noise(int i) const {
  if (i < 0 || i >= num_students()) raise(Errc::index_out_of_range, "student index out of range");
  return students_[static_cast<size_t>(i)];
}

double HeteroModel::cost(int i) const {
  if (i < 0 || i >= num_students()) raise(Errc::index_out_of_range, "student index out of range");
  return costs_[static_cast<size_t>(i)];
}

namespace {
double noise_prob(const NoisePair& np, Signal l, Signal t) {
  if (t == Signal::A) return l == Signal::A ? np.p_a_given_a : 1.0 - np.p_a_given_a;
  return l == Signal::B ? np.p_b_given_b : 1.0 - np.p_b_given_b;
}
}  // namespace

double HeteroModel::student_noise_prob(int i, Signal l, Signal t) const {
  return noise_prob(student_noise(i), l, t);
}

double HeteroModel::ta_noise_prob(Signal l, Signal t) const { return noise_prob(ta_, l, t); }

double HeteroModel::student_marginal(int i, Signal l) const {
  const NoisePair& np = student_noise(i);
  double m = prior_a_ * noise_prob(np, l, Signal::A) + (1.0 - prior_a_) * noise_prob(np, l, Signal::B);
  return m;
}

double HeteroModel::ta_marginal(Signal l) const {
  return prior_a_ * noise_prob(ta_, l, Signal::A) + (1.0 - prior_a_) * noise_prob(ta_, l, Signal::B);
}

double HeteroModel::ta_joint(int i, Signal l, Signal t) const {
  const NoisePair& np = student_noise(i);
  double total = 0.0;
  for (Signal q : {Signal::A, Signal::B}) {
    total += prior(q) * noise_prob(np, l, q) * noise_prob(ta_, t, q);
  }
  return total;
}

HeteroModel homogenize(const SignalModel& model, int n, double cost) {
  NoisePair np{model.p_a_given_a(), model.p_b_given_b()};
  std::vector<NoisePair> students(static_cast<size_t>(n), np);
  std::vector<double> costs(static_cast<size_t>(n), cost);
  return HeteroModel::build(model.prior_a(), std::move(students), np, std::move(costs));
}

}  // namespace spotcheck
