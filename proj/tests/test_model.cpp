#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "model.hpp"
#include "test_helpers.hpp"

using namespace spotcheck;
using namespace spotcheck::testing;

TEST_CASE("marginals of the running example") {
  SignalModel model = fig2_model();
  CHECK(model.marginal(Signal::A) == doctest::Approx(0.74).epsilon(1e-12));
  CHECK(model.marginal(Signal::B) == doctest::Approx(0.26).epsilon(1e-12));
  CHECK_FALSE(model.label_swapped());
  CHECK(model.marginal(Signal::A) + model.marginal(Signal::B) == doctest::Approx(1.0));
}

TEST_CASE("canonicalization relabels a minority-a model") {
  SignalModel symmetric = SignalModel::build(0.5, 0.9, 0.9);
  CHECK(symmetric.marginal(Signal::A) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(symmetric.label_swapped());

  SignalModel swapped = SignalModel::build(0.2, 0.9, 0.9);
  CHECK(swapped.label_swapped());
  CHECK(swapped.marginal(Signal::A) == doctest::Approx(0.74).epsilon(1e-12));
  CHECK(swapped.prior_a() == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("pair joints of the running example") {
  SignalModel model = fig2_model();
  CHECK(model.pair_joint(Signal::A, Signal::A) == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(model.pair_joint(Signal::A, Signal::B) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(model.pair_joint(Signal::B, Signal::B) == doctest::Approx(0.17).epsilon(1e-12));
  CHECK(model.pair_joint(Signal::B, Signal::A) == model.pair_joint(Signal::A, Signal::B));
  double total = model.pair_joint(Signal::A, Signal::A) + 2.0 * model.pair_joint(Signal::A, Signal::B) +
                 model.pair_joint(Signal::B, Signal::B);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conditional probabilities") {
  SignalModel model = fig2_model();
  CHECK(model.conditional(Signal::A, Signal::A) == doctest::Approx(0.65 / 0.74).epsilon(1e-12));
  CHECK(model.conditional(Signal::A, Signal::B) + model.conditional(Signal::B, Signal::B) ==
        doctest::Approx(1.0).epsilon(1e-12));

  SignalModel flat = SignalModel::build(0.8, 0.5, 0.5);
  CHECK(flat.conditional(Signal::A, Signal::A) ==
        doctest::Approx(flat.marginal(Signal::A)).epsilon(1e-12));

  SignalModel degenerate = SignalModel::build(1.0, 1.0, 1.0);
  CHECK_THROWS_AS((void)degenerate.conditional(Signal::A, Signal::B), Error);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS((void)SignalModel::build(1.2, 0.9, 0.9), Error);
  CHECK_THROWS_AS((void)SignalModel::build(0.8, -0.1, 0.9), Error);
  try {
    (void)SignalModel::build(0.8, 0.9, 1.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_probability);
  }
}

TEST_CASE("probability identities hold on random models") {
  RandomModelGen gen(20240811);
  for (int i = 0; i < 500; ++i) {
    SignalModel model = SignalModel::build(gen.uniform(0.0, 1.0), gen.uniform(0.0, 1.0),
                                           gen.uniform(0.0, 1.0));
    double p_a = model.marginal(Signal::A);
    double p_b = model.marginal(Signal::B);
    double p_aa = model.pair_joint(Signal::A, Signal::A);
    double p_ab = model.pair_joint(Signal::A, Signal::B);
    double p_bb = model.pair_joint(Signal::B, Signal::B);
    CHECK(p_a >= p_b);  // canonical naming
    CHECK(p_aa + p_ab == doctest::Approx(p_a).epsilon(1e-12));
    CHECK(p_bb + p_ab == doctest::Approx(p_b).epsilon(1e-12));
    CHECK(std::abs((p_aa - p_a * p_a) - (p_bb - p_b * p_b)) <= 1e-12);
    CHECK(p_aa * p_bb - p_ab * p_ab >= -1e-15);
    CHECK(std::abs(model.signal_variance() - (p_aa * p_bb - p_ab * p_ab)) <= 1e-12);
  }
}

TEST_CASE("count distribution matches the hand-evaluated mixture") {
  SignalModel model = fig2_model();
  CountDistribution dist = model.count_distribution(3);
  REQUIRE(dist.probs.size() == 4);
  CHECK(dist.probs[0] == doctest::Approx(0.1466).epsilon(1e-12));
  CHECK(dist.probs[1] == doctest::Approx(0.0702).epsilon(1e-12));
  CHECK(dist.probs[2] == doctest::Approx(0.1998).epsilon(1e-12));
  CHECK(dist.probs[3] == doctest::Approx(0.5834).epsilon(1e-12));
}

TEST_CASE("count distribution edge cases and invariants") {
  SignalModel model = fig2_model();
  CountDistribution one = model.count_distribution(1);
  CHECK(one.probs[0] == doctest::Approx(0.26).epsilon(1e-12));
  CHECK(one.probs[1] == doctest::Approx(0.74).epsilon(1e-12));
  CHECK_THROWS_AS((void)model.count_distribution(0), Error);
  CHECK_THROWS_AS((void)model.count_distribution(1001), Error);  // double binomials overflow past this

  RandomModelGen gen(7);
  for (int i = 0; i < 50; ++i) {
    SignalModel m = SignalModel::build(gen.uniform(0.0, 1.0), gen.uniform(0.0, 1.0),
                                       gen.uniform(0.0, 1.0));
    int n = 1 + static_cast<int>(gen.uniform(0.0, 30.0));
    CountDistribution dist = m.count_distribution(n);
    double sum = 0.0, mean = 0.0;
    for (int j = 0; j <= n; ++j) {
      CHECK(dist.probs[static_cast<size_t>(j)] >= 0.0);
      sum += dist.probs[static_cast<size_t>(j)];
      mean += dist.probs[static_cast<size_t>(j)] * static_cast<double>(j) / n;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // expected fraction of a-signals is the marginal
    CHECK(mean == doctest::Approx(m.marginal(Signal::A)).epsilon(1e-12));
  }
}

TEST_CASE("count distribution agrees with exhaustive vector enumeration") {
  SignalModel model = SignalModel::build(0.63, 0.87, 0.79);
  int n = 6;
  CountDistribution dist = model.count_distribution(n);
  std::vector<double> byCount(static_cast<size_t>(n) + 1, 0.0);
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Signal> sigs;
    int a_count = 0;
    for (int i = 0; i < n; ++i) {
      bool is_a = (mask >> i) & 1;
      sigs.push_back(is_a ? Signal::A : Signal::B);
      a_count += is_a ? 1 : 0;
    }
    byCount[static_cast<size_t>(a_count)] += model.vector_joint(sigs);
  }
  for (int j = 0; j <= n; ++j) {
    CHECK(byCount[static_cast<size_t>(j)] ==
          doctest::Approx(dist.probs[static_cast<size_t>(j)]).epsilon(1e-12));
  }
}

TEST_CASE("vector joint") {
  SignalModel model = fig2_model();
  std::vector<Signal> aaa = {Signal::A, Signal::A, Signal::A};
  CHECK(model.vector_joint(aaa) == doctest::Approx(0.5834).epsilon(1e-12));
  std::vector<Signal> ab = {Signal::A, Signal::B};
  std::vector<Signal> ba = {Signal::B, Signal::A};
  CHECK(model.vector_joint(ab) == model.vector_joint(ba));
  std::vector<Signal> single = {Signal::A};
  CHECK(model.vector_joint(single) == doctest::Approx(model.marginal(Signal::A)));
  CHECK_THROWS_AS((void)model.vector_joint(std::vector<Signal>{}), Error);

  // permutation invariance on random vectors
  RandomModelGen gen(99);
  std::mt19937_64 shuffler(4);
  for (int i = 0; i < 50; ++i) {
    SignalModel m = SignalModel::build(gen.uniform(0.0, 1.0), gen.uniform(0.0, 1.0),
                                       gen.uniform(0.0, 1.0));
    std::vector<Signal> sigs;
    int len = 2 + static_cast<int>(gen.uniform(0.0, 8.0));
    for (int j = 0; j < len; ++j) sigs.push_back(gen.uniform(0.0, 1.0) < 0.5 ? Signal::A : Signal::B);
    double before = m.vector_joint(sigs);
    std::shuffle(sigs.begin(), sigs.end(), shuffler);
    CHECK(m.vector_joint(sigs) == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("vector joint sums to one over all signal vectors") {
  SignalModel model = SignalModel::build(0.71, 0.83, 0.91);
  int n = 12;
  double total = 0.0;
  std::vector<Signal> sigs(static_cast<size_t>(n));
  for (int mask = 0; mask < (1 << n); ++mask) {
    for (int i = 0; i < n; ++i) sigs[static_cast<size_t>(i)] = (mask >> i) & 1 ? Signal::A : Signal::B;
    total += model.vector_joint(sigs);
  }
  CHECK(std::abs(total - 1.0) <= 1e-10);
}

TEST_CASE("hetero model joints") {
  // all agents share the running-example noise: reduces to the homogeneous joint
  SignalModel model = fig2_model();
  HeteroModel homog = homogenize(model, 3, 1.0);
  for (Signal l : {Signal::A, Signal::B}) {
    for (Signal t : {Signal::A, Signal::B}) {
      CHECK(homog.ta_joint(1, l, t) == doctest::Approx(model.pair_joint(l, t)).epsilon(1e-12));
    }
  }

  // perfect TA: joint(A,A) = prior * student accuracy
  HeteroModel perfect = HeteroModel::build(0.8, {{0.9, 0.9}}, {1.0, 1.0}, {1.0});
  CHECK(perfect.ta_joint(0, Signal::A, Signal::A) == doctest::Approx(0.72).epsilon(1e-12));

  double sum = 0.0;
  for (Signal l : {Signal::A, Signal::B}) {
    for (Signal t : {Signal::A, Signal::B}) sum += perfect.ta_joint(0, l, t);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)perfect.ta_joint(5, Signal::A, Signal::A), Error);
}

TEST_CASE("hetero model validation") {
  CHECK_THROWS_AS((void)HeteroModel::build(0.8, {}, {0.9, 0.9}, {}), Error);
  CHECK_THROWS_AS((void)HeteroModel::build(0.8, {{0.9, 0.9}}, {0.9, 0.9}, {0.0}), Error);
  CHECK_THROWS_AS((void)HeteroModel::build(0.8, {{1.9, 0.9}}, {0.9, 0.9}, {1.0}), Error);
  CHECK_THROWS_AS((void)HeteroModel::build(0.8, {{0.9, 0.9}, {0.8, 0.8}}, {0.9, 0.9}, {1.0}), Error);
}
