// extern-C shim over the core library. Every entry point funnels through
// guarded() which maps the core's typed exceptions onto status codes; handles
// are heap-owned copies of the immutable core values.

#include "spotcheck/spotcheck.h"

#include <cstdio>
#include <cstring>
#include <new>

#include "incentives.hpp"
#include "mechanism.hpp"
#include "model.hpp"
#include "sim.hpp"
#include "sweep.hpp"
#include "workload.hpp"

struct sc_model {
  spotcheck::SignalModel impl;
};
struct sc_hetero_model {
  spotcheck::HeteroModel impl;
};
struct sc_mechanism {
  spotcheck::Mechanism impl;
};

namespace {

using spotcheck::Errc;

sc_status map_errc(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return SC_ERR_INVALID_ARGUMENT;
    case Errc::invalid_probability: return SC_ERR_INVALID_PROBABILITY;
    case Errc::degenerate: return SC_ERR_DEGENERATE;
    case Errc::index_out_of_range: return SC_ERR_INDEX;
    case Errc::dimension_mismatch: return SC_ERR_DIMENSION;
    case Errc::too_large: return SC_ERR_TOO_LARGE;
    case Errc::not_applicable: return SC_ERR_NOT_APPLICABLE;
    case Errc::solver_failure: return SC_ERR_SOLVER;
  }
  return SC_ERR_INTERNAL;
}

template <typename Fn>
sc_status guarded(Fn&& fn) {
  try {
    fn();
    return SC_OK;
  } catch (const spotcheck::Error& e) {
    return map_errc(e.code());
  } catch (const std::bad_alloc&) {
    return SC_ERR_INTERNAL;
  } catch (const std::exception&) {
    return SC_ERR_INTERNAL;
  }
}

spotcheck::Signal to_signal(sc_signal s) {
  return s == SC_SIGNAL_A ? spotcheck::Signal::A : spotcheck::Signal::B;
}

spotcheck::Strategy to_strategy(sc_strategy s) { return static_cast<spotcheck::Strategy>(s); }

sc_family to_c_family(spotcheck::Family f) {
  switch (f) {
    case spotcheck::Family::ros: return SC_FAMILY_ROS;
    case spotcheck::Family::rss_opt: return SC_FAMILY_RSS;
    case spotcheck::Family::rsus_opt: return SC_FAMILY_RSUS;
    case spotcheck::Family::hetero_prss: return SC_FAMILY_HETERO;
    case spotcheck::Family::custom: return SC_FAMILY_CUSTOM;
  }
  return SC_FAMILY_CUSTOM;
}

void fill_feasibility(const spotcheck::Feasibility& in, sc_feasibility* out) {
  if (!out) return;
  out->feasible = in.feasible ? 1 : 0;
  out->margin = in.margin;
  std::snprintf(out->reason, sizeof(out->reason), "%s", in.reason.c_str());
}

void deliver_mechanism(spotcheck::MechanismResult&& result, sc_feasibility* feasibility,
                       sc_mechanism** out) {
  fill_feasibility(result.feasibility, feasibility);
  *out = result.mechanism ? new sc_mechanism{std::move(*result.mechanism)} : nullptr;
}

std::vector<spotcheck::Strategy> to_strategies(const sc_strategy* data, int len) {
  std::vector<spotcheck::Strategy> out;
  out.reserve(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) out.push_back(to_strategy(data[i]));
  return out;
}

void fill_verification(const spotcheck::VerificationReport& in, sc_verification* out) {
  out->passed = in.passed ? 1 : 0;
  out->solution_concept =
      in.solution_concept == spotcheck::Concept::dsic ? SC_CONCEPT_DSIC : SC_CONCEPT_ICCP;
  out->tolerance = in.tolerance;
  out->profiles_checked = in.profiles_checked;
  out->worst_gap = in.worst.utility_gap;
  out->worst_student = in.worst.student;
  out->worst_strategy = static_cast<sc_strategy>(in.worst.strategy);
  out->worst_profile_len = static_cast<int>(in.worst.opponent_profile.size());
  for (int i = 0; i < out->worst_profile_len && i < SC_MAX_VERIFY_N; ++i) {
    out->worst_profile[i] = static_cast<sc_strategy>(in.worst.opponent_profile[static_cast<size_t>(i)]);
  }
}

void fill_sim(const spotcheck::SimResult& in, sc_sim_result* out, double* mean_utility,
              double* utility_se, double* spot_check_rate) {
  out->trials = in.trials;
  out->empirical_workload = in.empirical_workload;
  out->workload_se = in.workload_se;
  out->agreement_rate = in.agreement_rate;
  for (size_t i = 0; i < in.students.size(); ++i) {
    if (mean_utility) mean_utility[i] = in.students[i].mean_utility;
    if (utility_se) utility_se[i] = in.students[i].utility_se;
    if (spot_check_rate) spot_check_rate[i] = in.students[i].spot_check_rate;
  }
}

}  // namespace

extern "C" {

const char* sc_status_str(sc_status status) {
  switch (status) {
    case SC_OK: return "ok";
    case SC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SC_ERR_INVALID_PROBABILITY: return "probability outside [0,1]";
    case SC_ERR_DEGENERATE: return "degenerate probability model";
    case SC_ERR_INDEX: return "index out of range";
    case SC_ERR_DIMENSION: return "dimension mismatch";
    case SC_ERR_TOO_LARGE: return "instance exceeds exact-enumeration cap";
    case SC_ERR_NOT_APPLICABLE: return "preconditions not met";
    case SC_ERR_SOLVER: return "solver failure";
    case SC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sc_version(void) { return "1.0.0"; }

const char* sc_strategy_str(sc_strategy strategy) {
  return spotcheck::strategy_name(to_strategy(strategy));
}

/* ---- model ---- */

sc_status sc_model_create(double prior_a, double p_a_given_a, double p_b_given_b, sc_model** out) {
  if (!out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new sc_model{spotcheck::SignalModel::build(prior_a, p_a_given_a, p_b_given_b)};
  });
}

void sc_model_free(sc_model* model) { delete model; }

int sc_model_label_swapped(const sc_model* model) {
  return model && model->impl.label_swapped() ? 1 : 0;
}

double sc_model_marginal(const sc_model* model, sc_signal l) {
  return model ? model->impl.marginal(to_signal(l)) : 0.0;
}

double sc_model_pair_joint(const sc_model* model, sc_signal l, sc_signal t) {
  return model ? model->impl.pair_joint(to_signal(l), to_signal(t)) : 0.0;
}

sc_status sc_model_conditional(const sc_model* model, sc_signal l, sc_signal given, double* out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = model->impl.conditional(to_signal(l), to_signal(given)); });
}

sc_status sc_model_count_distribution(const sc_model* model, int n, double* out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::CountDistribution dist = model->impl.count_distribution(n);
    std::memcpy(out, dist.probs.data(), dist.probs.size() * sizeof(double));
  });
}

sc_status sc_model_vector_joint(const sc_model* model, const sc_signal* signals, int len,
                                double* out) {
  if (!model || !signals || !out || len < 1) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    std::vector<spotcheck::Signal> sigs;
    sigs.reserve(static_cast<size_t>(len));
    for (int i = 0; i < len; ++i) sigs.push_back(to_signal(signals[i]));
    *out = model->impl.vector_joint(sigs);
  });
}

/* ---- hetero model ---- */

sc_status sc_hetero_model_create(double prior_a, int n_students, const double* p_a_given_a,
                                 const double* p_b_given_b, double ta_p_a_given_a,
                                 double ta_p_b_given_b, const double* costs,
                                 sc_hetero_model** out) {
  if (!out || !p_a_given_a || !p_b_given_b || !costs || n_students < 1) {
    return SC_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<spotcheck::NoisePair> students;
    students.reserve(static_cast<size_t>(n_students));
    for (int i = 0; i < n_students; ++i) {
      students.push_back({p_a_given_a[i], p_b_given_b[i]});
    }
    std::vector<double> cost_vec(costs, costs + n_students);
    *out = new sc_hetero_model{spotcheck::HeteroModel::build(
        prior_a, std::move(students), {ta_p_a_given_a, ta_p_b_given_b}, std::move(cost_vec))};
  });
}

void sc_hetero_model_free(sc_hetero_model* model) { delete model; }

int sc_hetero_model_n(const sc_hetero_model* model) {
  return model ? model->impl.num_students() : 0;
}

sc_status sc_hetero_ta_joint(const sc_hetero_model* model, int student, sc_signal l, sc_signal t,
                             double* out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = model->impl.ta_joint(student, to_signal(l), to_signal(t)); });
}

/* ---- mechanisms ---- */

sc_status sc_optimal_ros(const sc_model* model, double cost, double reward, int n,
                         sc_feasibility* feasibility, sc_mechanism** out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    deliver_mechanism(spotcheck::optimal_ros(model->impl, {cost, reward}, n), feasibility, out);
  });
}

sc_status sc_optimal_rss(const sc_model* model, double cost, double reward, int n,
                         sc_feasibility* feasibility, sc_mechanism** out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    deliver_mechanism(spotcheck::optimal_rss(model->impl, {cost, reward}, n), feasibility, out);
  });
}

sc_status sc_optimal_rsus(const sc_model* model, double cost, double reward, int n,
                          sc_feasibility* feasibility, sc_mechanism** out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    deliver_mechanism(spotcheck::optimal_rsus(model->impl, {cost, reward}, n), feasibility, out);
  });
}

sc_status sc_optimal_hetero_prss(const sc_hetero_model* model, double reward,
                                 sc_feasibility* feasibility, sc_mechanism** out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    deliver_mechanism(spotcheck::optimal_hetero_prss(model->impl, reward), feasibility, out);
  });
}

sc_status sc_custom_mechanism(double cost, double reward, int n, const double* x_a,
                              const double* x_b, sc_mechanism** out) {
  if (!out || !x_a || !x_b || n < 1) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::CountPolicy policy;
    policy.n = n;
    policy.x_a.assign(x_a, x_a + n + 1);
    policy.x_b.assign(x_b, x_b + n + 1);
    *out = new sc_mechanism{spotcheck::custom_mechanism({cost, reward}, std::move(policy))};
  });
}

void sc_mechanism_free(sc_mechanism* mech) { delete mech; }

int sc_mechanism_n(const sc_mechanism* mech) { return mech ? mech->impl.n() : 0; }

sc_family sc_mechanism_family(const sc_mechanism* mech) {
  return mech ? to_c_family(mech->impl.family()) : SC_FAMILY_CUSTOM;
}

sc_status sc_mechanism_count_policy(const sc_mechanism* mech, double* x_a, double* x_b) {
  if (!mech || !x_a || !x_b) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const spotcheck::CountPolicy& policy = mech->impl.count_policy();
    std::memcpy(x_a, policy.x_a.data(), policy.x_a.size() * sizeof(double));
    std::memcpy(x_b, policy.x_b.data(), policy.x_b.size() * sizeof(double));
  });
}

sc_status sc_mechanism_personal_policy(const sc_mechanism* mech, int student, double* x_a,
                                       double* x_b) {
  if (!mech || !x_a || !x_b) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto& policies = mech->impl.personal_policies();
    if (student < 0 || student >= static_cast<int>(policies.size())) {
      spotcheck::raise(Errc::index_out_of_range, "student index out of range");
    }
    *x_a = policies[static_cast<size_t>(student)].x_a;
    *x_b = policies[static_cast<size_t>(student)].x_b;
  });
}

sc_status sc_feasibility_margins(const sc_model* model, double cost, double reward,
                                 double* ros_margin, double* rss_margin) {
  if (!model || !ros_margin || !rss_margin) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto margins = spotcheck::feasibility_report(model->impl, {cost, reward});
    *ros_margin = margins.ros_margin;
    *rss_margin = margins.rss_margin;
  });
}

/* ---- workload ---- */

sc_status sc_ta_workload(const sc_model* model, const sc_mechanism* mech, double* out) {
  if (!model || !mech || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = spotcheck::ta_workload(model->impl, mech->impl).workload; });
}

sc_status sc_hetero_workload(const sc_hetero_model* model, const sc_mechanism* mech, double* out) {
  if (!model || !mech || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = spotcheck::hetero_workload(model->impl, mech->impl); });
}

sc_status sc_savings_lower_bound(const sc_model* model, double cost, double reward, double* out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = spotcheck::savings_lower_bound(model->impl, {cost, reward}); });
}

sc_status sc_compare_mechanisms(const sc_model* model, double cost, double reward, int n,
                                sc_comparison* out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::ComparisonReport report =
        spotcheck::compare_mechanisms(model->impl, {cost, reward}, n);
    fill_feasibility(report.ros.feasibility, &out->ros);
    fill_feasibility(report.rss.feasibility, &out->rss);
    fill_feasibility(report.rsus.feasibility, &out->rsus);
    out->ros_workload = report.ros.workload_value();
    out->rss_workload = report.rss.workload_value();
    out->rsus_workload = report.rsus.workload_value();
    out->has_scaled_rss = report.scaled_rss.has_value() ? 1 : 0;
    out->has_scaled_rsus = report.scaled_rsus.has_value() ? 1 : 0;
    out->scaled_rss = report.scaled_rss.value_or(0.0);
    out->scaled_rsus = report.scaled_rsus.value_or(0.0);
  });
}

/* ---- incentives ---- */

sc_status sc_expected_utility(const sc_model* model, const sc_mechanism* mech, int student,
                              sc_strategy own, const sc_strategy* others, double* out) {
  if (!model || !mech || !out || (!others && mech->impl.n() > 1)) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto other_vec = to_strategies(others, mech->impl.n() - 1);
    *out = spotcheck::expected_utility(model->impl, mech->impl, student, to_strategy(own),
                                       other_vec);
  });
}

sc_status sc_hetero_expected_utility(const sc_hetero_model* model, const sc_mechanism* mech,
                                     int student, sc_strategy own, const sc_strategy* others,
                                     double* out) {
  if (!model || !mech || !out || (!others && mech->impl.n() > 1)) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto other_vec = to_strategies(others, mech->impl.n() - 1);
    *out = spotcheck::expected_utility(model->impl, mech->impl, student, to_strategy(own),
                                       other_vec);
  });
}

sc_status sc_verify(const sc_model* model, const sc_mechanism* mech,
                    sc_concept solution_concept, double tolerance, sc_verification* out) {
  if (!model || !mech || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::VerificationReport report =
        solution_concept == SC_CONCEPT_DSIC
            ? spotcheck::verify_dsic(model->impl, mech->impl, tolerance)
            : spotcheck::verify_iccp(model->impl, mech->impl, tolerance);
    fill_verification(report, out);
  });
}

sc_status sc_hetero_verify(const sc_hetero_model* model, const sc_mechanism* mech,
                           sc_concept solution_concept, double tolerance, sc_verification* out) {
  if (!model || !mech || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::VerificationReport report =
        solution_concept == SC_CONCEPT_DSIC
            ? spotcheck::verify_dsic(model->impl, mech->impl, tolerance)
            : spotcheck::verify_iccp(model->impl, mech->impl, tolerance);
    fill_verification(report, out);
  });
}

sc_status sc_best_response(const sc_model* model, const sc_mechanism* mech, int student,
                           const sc_strategy* others, sc_strategy* strategy, double* utility) {
  if (!model || !mech || !strategy || !utility || (!others && mech->impl.n() > 1)) {
    return SC_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto other_vec = to_strategies(others, mech->impl.n() - 1);
    spotcheck::BestResponse best =
        spotcheck::best_response(model->impl, mech->impl, student, other_vec);
    *strategy = static_cast<sc_strategy>(best.strategy);
    *utility = best.utility;
  });
}

/* ---- simulation ---- */

sc_status sc_simulate(const sc_model* model, const sc_mechanism* mech, const sc_strategy* profile,
                      long long trials, uint64_t seed, sc_sim_result* out, double* mean_utility,
                      double* utility_se, double* spot_check_rate) {
  if (!model || !mech || !profile || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::SimConfig config;
    config.trials = trials;
    config.seed = seed;
    config.profile = to_strategies(profile, mech->impl.n());
    spotcheck::SimResult result = spotcheck::simulate(model->impl, mech->impl, config);
    fill_sim(result, out, mean_utility, utility_se, spot_check_rate);
  });
}

sc_status sc_hetero_simulate(const sc_hetero_model* model, const sc_mechanism* mech,
                             const sc_strategy* profile, long long trials, uint64_t seed,
                             sc_sim_result* out, double* mean_utility, double* utility_se,
                             double* spot_check_rate) {
  if (!model || !mech || !profile || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::SimConfig config;
    config.trials = trials;
    config.seed = seed;
    config.profile = to_strategies(profile, mech->impl.n());
    spotcheck::SimResult result = spotcheck::simulate(model->impl, mech->impl, config);
    fill_sim(result, out, mean_utility, utility_se, spot_check_rate);
  });
}

/* ---- sweeps ---- */

sc_status sc_sweep_rc_point(double r_over_c, double p_signal, int n, double prior_step,
                            sc_rc_sweep_point* out) {
  if (!out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::RcSweepPoint point = spotcheck::sweep_rc_point(r_over_c, p_signal, n, prior_step);
    out->r_over_c = point.r_over_c;
    out->p_signal = point.p_signal;
    out->found = point.found ? 1 : 0;
    out->prior_star = point.prior_star;
    out->ros_workload = point.ros_workload;
    out->rss_workload = point.rss_workload;
    out->scaled_rss = point.scaled_rss;
    out->feasible_ros = point.feasible_ros ? 1 : 0;
    out->feasible_rss = point.feasible_rss ? 1 : 0;
  });
}

sc_status sc_sweep_n_row(const sc_model* model, double cost, double reward, int n,
                         sc_n_sweep_row* out) {
  if (!model || !out) return SC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    spotcheck::NSweepRow row = spotcheck::sweep_n_row(model->impl, {cost, reward}, n);
    out->n = row.n;
    out->feasible_ros = row.feasible_ros ? 1 : 0;
    out->feasible_rss = row.feasible_rss ? 1 : 0;
    out->feasible_rsus = row.feasible_rsus ? 1 : 0;
    out->ros_workload = row.ros_workload;
    out->rss_workload = row.rss_workload;
    out->rsus_workload = row.rsus_workload;
    out->scaled_rss = row.scaled_rss;
    out->scaled_rsus = row.scaled_rsus;
  });
}

} /* extern "C" */
