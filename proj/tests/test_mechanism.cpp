#include <cmath>

#include "doctest.h"
#include "mechanism.hpp"
#include "test_helpers.hpp"

using namespace spotcheck;
using namespace spotcheck::testing;

TEST_CASE("optimal ros at the running example") {
  SignalModel model = fig2_model();
  MechanismResult result = optimal_ros(model, fig2_econ(), 3);
  REQUIRE(result.feasibility.feasible);
  REQUIRE(result.mechanism.has_value());
  const CountPolicy& policy = result.mechanism->count_policy();
  for (int k = 1; k <= 3; ++k) CHECK(policy.x_a[static_cast<size_t>(k)] == doctest::Approx(kFig2RosX));
  for (int k = 0; k < 3; ++k) CHECK(policy.x_b[static_cast<size_t>(k)] == doctest::Approx(kFig2RosX));
  CHECK(policy.x_a[0] == 0.0);
  CHECK(policy.x_b[3] == 0.0);
  CHECK(result.mechanism->family() == Family::ros);
}

TEST_CASE("ros infeasibility and boundary") {
  SignalModel model = fig2_model();
  MechanismResult infeasible = optimal_ros(model, {1.0, 10.0}, 3);  // c/R = 0.1 > 0.08
  CHECK_FALSE(infeasible.feasibility.feasible);
  CHECK(infeasible.feasibility.margin == doctest::Approx(0.08 - 0.1).epsilon(1e-12));
  CHECK_FALSE(infeasible.mechanism.has_value());

  MechanismResult boundary = optimal_ros(model, {0.08, 1.0}, 3);  // c/R exactly P_bb - P_ab
  REQUIRE(boundary.feasibility.feasible);
  CHECK(boundary.mechanism->count_policy().x_b[0] == doctest::Approx(1.0).epsilon(1e-12));

  SignalModel flat = SignalModel::build(0.8, 0.5, 0.5);
  MechanismResult uninformative = optimal_ros(flat, fig2_econ(), 3);
  CHECK_FALSE(uninformative.feasibility.feasible);
  CHECK(!uninformative.feasibility.reason.empty());
}

TEST_CASE("optimal rss at the running example") {
  SignalModel model = fig2_model();
  MechanismResult result = optimal_rss(model, fig2_econ(), 3);
  REQUIRE(result.feasibility.feasible);
  const CountPolicy& policy = result.mechanism->count_policy();
  CHECK(policy.x_a[1] == doctest::Approx(kFig2RssXa).epsilon(1e-12));
  CHECK(policy.x_b[1] == doctest::Approx(kFig2RssXb).epsilon(1e-12));
  CHECK(policy.x_a[0] == 0.0);
  CHECK(policy.x_b[3] == 0.0);
  // personal-report shape: constant across k
  CHECK(policy.x_a[1] == policy.x_a[2]);
  CHECK(policy.x_a[2] == policy.x_a[3]);
  CHECK(policy.x_b[0] == policy.x_b[1]);
}

TEST_CASE("rss equals ros on a symmetric model") {
  SignalModel model = SignalModel::build(0.5, 0.9, 0.9);
  MechanismResult rss = optimal_rss(model, fig2_econ(), 4);
  MechanismResult ros = optimal_ros(model, fig2_econ(), 4);
  REQUIRE(rss.feasibility.feasible);
  REQUIRE(ros.feasibility.feasible);
  CHECK(rss.mechanism->count_policy().x_a[1] ==
        doctest::Approx(ros.mechanism->count_policy().x_a[1]).epsilon(1e-12));
  CHECK(rss.mechanism->count_policy().x_b[0] ==
        doctest::Approx(ros.mechanism->count_policy().x_b[0]).epsilon(1e-12));
}

TEST_CASE("rss infeasibility") {
  SignalModel model = fig2_model();
  MechanismResult result = optimal_rss(model, {1.0, 5.0}, 3);  // c/R = 0.2 > 0.13838
  CHECK_FALSE(result.feasibility.feasible);
  CHECK(result.feasibility.margin == doctest::Approx(0.1024 / 0.74 - 0.2).epsilon(1e-9));

  SignalModel flat = SignalModel::build(0.8, 0.5, 0.5);
  CHECK_FALSE(optimal_rss(flat, fig2_econ(), 3).feasibility.feasible);
}

TEST_CASE("rss interior dominance: x_b >= x_a, equality only when symmetric") {
  RandomModelGen gen(4242);
  for (int i = 0; i < 200; ++i) {
    SignalModel model = gen.next_asymmetric();
    double edge = model.signal_variance() / model.marginal(Signal::A);
    EconParams econ{gen.uniform(0.05, 0.95) * edge, 1.0};
    MechanismResult result = optimal_rss(model, econ, 3);
    REQUIRE(result.feasibility.feasible);
    const CountPolicy& policy = result.mechanism->count_policy();
    CHECK(policy.x_b[1] > policy.x_a[1]);  // strict: P_a > P_b by construction
  }
}

TEST_CASE("optimal rsus recursion at the running example") {
  SignalModel model = fig2_model();
  MechanismResult result = optimal_rsus(model, fig2_econ(), 3);
  REQUIRE(result.feasibility.feasible);
  const CountPolicy& policy = result.mechanism->count_policy();
  // top two entries coincide with the report-sensitive optimum
  CHECK(policy.x_a[3] == doctest::Approx(kFig2RssXa).epsilon(1e-12));
  CHECK(policy.x_b[2] == doctest::Approx(kFig2RssXb).epsilon(1e-12));
  // remaining entries from the tight-constraint recursion
  CHECK(policy.x_b[1] == doctest::Approx((0.04 + 0.09 * kFig2RssXb) / 0.17).epsilon(1e-12));
  CHECK(policy.x_b[0] ==
        doctest::Approx((0.04 + 0.09 * (0.04 + 0.09 * kFig2RssXb) / 0.17) / 0.17).epsilon(1e-12));
  // rounded reference values
  CHECK(std::abs(policy.x_b[0] - 0.440876) < 1e-4);
  CHECK(std::abs(policy.x_b[1] - 0.388321) < 1e-4);
  // monotone nonincreasing schedule
  CHECK(policy.x_b[0] > policy.x_b[1]);
  CHECK(policy.x_b[1] > policy.x_b[2]);
  CHECK(policy.x_b[2] >= policy.x_a[3]);
}

TEST_CASE("rsus with one student collapses to the rss optimum") {
  SignalModel model = fig2_model();
  MechanismResult rsus = optimal_rsus(model, fig2_econ(), 1);
  MechanismResult rss = optimal_rss(model, fig2_econ(), 1);
  REQUIRE(rsus.feasibility.feasible);
  CHECK(rsus.mechanism->count_policy().x_a[1] ==
        doctest::Approx(rss.mechanism->count_policy().x_a[1]).epsilon(1e-12));
  CHECK(rsus.mechanism->count_policy().x_b[0] ==
        doctest::Approx(rss.mechanism->count_policy().x_b[0]).epsilon(1e-12));
}

TEST_CASE("rsus is constant on a symmetric model") {
  SignalModel model = SignalModel::build(0.5, 0.9, 0.9);
  MechanismResult result = optimal_rsus(model, fig2_econ(), 5);
  REQUIRE(result.feasibility.feasible);
  const CountPolicy& policy = result.mechanism->count_policy();
  double x_star = optimal_ros(model, fig2_econ(), 5).mechanism->count_policy().x_b[0];
  for (int k = 0; k <= 5; ++k) {
    if (k >= 1) CHECK(policy.x_a[static_cast<size_t>(k)] == doctest::Approx(x_star).epsilon(1e-12));
    if (k <= 4) CHECK(policy.x_b[static_cast<size_t>(k)] == doctest::Approx(x_star).epsilon(1e-12));
  }
}

TEST_CASE("rsus infeasibility paths") {
  // A skewed model where the uniform schedule needs x(0) > 1.
  SignalModel model = SignalModel::build(0.93, 0.93, 0.93);
  double variance = model.signal_variance();
  double edge = variance / model.marginal(Signal::A);
  // pick c/R near the rss edge: the rss optimum exists while the uniform one cannot
  EconParams econ{0.98 * edge, 1.0};
  MechanismResult rss = optimal_rss(model, econ, 8);
  REQUIRE(rss.feasibility.feasible);
  MechanismResult rsus = optimal_rsus(model, econ, 8);
  CHECK_FALSE(rsus.feasibility.feasible);
  CHECK(rsus.feasibility.margin < 0.0);

  SignalModel deg = SignalModel::build(1.0, 1.0, 1.0);  // P_bb = 0
  CHECK_THROWS_AS((void)optimal_rsus(deg, fig2_econ(), 3), Error);
}

TEST_CASE("hetero optimum reduces to the homogeneous one") {
  SignalModel model = fig2_model();
  HeteroModel homog = homogenize(model, 3, 1.0);
  MechanismResult hetero = optimal_hetero_prss(homog, 25.0);
  MechanismResult rss = optimal_rss(model, fig2_econ(), 3);
  REQUIRE(hetero.feasibility.feasible);
  const auto& policies = hetero.mechanism->personal_policies();
  REQUIRE(policies.size() == 3);
  for (const PersonalPolicy& p : policies) {
    CHECK(p.x_a == doctest::Approx(kFig2RssXa).epsilon(1e-12));
    CHECK(p.x_b == doctest::Approx(kFig2RssXb).epsilon(1e-12));
  }
  CHECK(rss.mechanism->count_policy().x_a[1] == doctest::Approx(policies[0].x_a).epsilon(1e-12));
}

TEST_CASE("hetero optimum with a perfect TA") {
  HeteroModel model = HeteroModel::build(0.8, {{0.9, 0.9}}, {1.0, 1.0}, {1.0});
  MechanismResult result = optimal_hetero_prss(model, 25.0);
  REQUIRE(result.feasibility.feasible);
  const PersonalPolicy& p = result.mechanism->personal_policies()[0];
  CHECK(p.x_b == doctest::Approx(0.04 / (0.9 - 0.74)).epsilon(1e-12));  // = 0.25
  CHECK(p.x_a == doctest::Approx(0.04 / (0.9 - 0.26)).epsilon(1e-12));
}

TEST_CASE("hetero infeasibility names the offending student") {
  HeteroModel model =
      HeteroModel::build(0.8, {{0.9, 0.9}, {0.5, 0.5}}, {0.9, 0.9}, {1.0, 1.0});
  MechanismResult result = optimal_hetero_prss(model, 25.0);
  CHECK_FALSE(result.feasibility.feasible);
  CHECK(result.feasibility.reason.find("student 1") != std::string::npos);
}

TEST_CASE("feasibility report at the running example") {
  FeasibilityMargins margins = feasibility_report(fig2_model(), fig2_econ());
  CHECK(margins.ros_margin == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(margins.rss_margin == doctest::Approx(0.0983783783783784).epsilon(1e-9));
}

TEST_CASE("rss margin strictly dominates the ros margin off symmetry") {
  RandomModelGen gen(1111);
  for (int i = 0; i < 300; ++i) {
    SignalModel model = gen.next_asymmetric();
    FeasibilityMargins margins = feasibility_report(model, {0.05, 1.0});
    CHECK(margins.rss_margin > margins.ros_margin);
  }
  // symmetric model: the margins coincide
  FeasibilityMargins sym = feasibility_report(SignalModel::build(0.5, 0.9, 0.9), {0.04, 1.0});
  CHECK(sym.rss_margin == doctest::Approx(sym.ros_margin).epsilon(1e-12));
}

TEST_CASE("c over R gap: rss feasible while ros is not") {
  SignalModel model = fig2_model();
  // open interval (P_bb - P_ab, P_a|a - P_a) = (0.08, 0.13838)
  EconParams econ{0.1, 1.0};
  CHECK_FALSE(optimal_ros(model, econ, 3).feasibility.feasible);
  CHECK(optimal_rss(model, econ, 3).feasibility.feasible);
}

TEST_CASE("custom policy validation") {
  EconParams econ = fig2_econ();
  CountPolicy bad_range{2, {0.0, 1.2, 0.5}, {0.5, 0.5, 0.0}};
  CHECK_THROWS_AS((void)custom_mechanism(econ, bad_range), Error);
  CountPolicy bad_boundary{2, {0.1, 0.5, 0.5}, {0.5, 0.5, 0.0}};
  CHECK_THROWS_AS((void)custom_mechanism(econ, bad_boundary), Error);
  CountPolicy bad_size{2, {0.0, 0.5}, {0.5, 0.5, 0.0}};
  CHECK_THROWS_AS((void)custom_mechanism(econ, bad_size), Error);
  CountPolicy ok{2, {0.0, 0.5, 0.5}, {0.5, 0.5, 0.0}};
  Mechanism mech = custom_mechanism(econ, ok);
  CHECK(mech.family() == Family::custom);
  CHECK(mech.check_probability(Signal::A, 1) == 0.5);
}

TEST_CASE("econ validation") {
  CHECK_THROWS_AS((void)optimal_ros(fig2_model(), {0.0, 1.0}, 3), Error);
  CHECK_THROWS_AS((void)optimal_ros(fig2_model(), {1.0, -2.0}, 3), Error);
  CHECK_THROWS_AS((void)optimal_rss(fig2_model(), fig2_econ(), 0), Error);
}

TEST_CASE("scaling c and R together changes nothing") {
  SignalModel model = fig2_model();
  MechanismResult base = optimal_rss(model, {1.0, 25.0}, 3);
  MechanismResult scaled = optimal_rss(model, {7.0, 175.0}, 3);
  REQUIRE(base.feasibility.feasible);
  REQUIRE(scaled.feasibility.feasible);
  for (int k = 0; k <= 3; ++k) {
    CHECK(base.mechanism->count_policy().x_a[static_cast<size_t>(k)] ==
          doctest::Approx(scaled.mechanism->count_policy().x_a[static_cast<size_t>(k)]).epsilon(1e-15));
    CHECK(base.mechanism->count_policy().x_b[static_cast<size_t>(k)] ==
          doctest::Approx(scaled.mechanism->count_policy().x_b[static_cast<size_t>(k)]).epsilon(1e-15));
  }
}
