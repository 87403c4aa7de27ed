/* spotcheck: spot-checking peer-grading mechanisms.
 *
 * C API over the core library: construct the optimal report-oblivious (ROS),
 * report-sensitive (RSS), uniform (RSUS) and heterogeneous spot-checking
 * mechanisms, compute analytic TA workloads, certify incentive compatibility
 * by brute force, and run seeded Monte Carlo simulations.
 *
 * Conventions:
 *  - every fallible call returns sc_status; SC_OK means success,
 *  - objects are opaque handles released with the matching *_free,
 *  - mechanism construction reports infeasibility through sc_feasibility with
 *    SC_OK status and a null mechanism handle: "no such mechanism exists" is
 *    an analytical result, not an error,
 *  - out parameters are written only on SC_OK.
 */

#ifndef SPOTCHECK_H
#define SPOTCHECK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SPOTCHECK_BUILD)
#define SPOTCHECK_API __declspec(dllexport)
#else
#define SPOTCHECK_API __declspec(dllimport)
#endif
#else
#define SPOTCHECK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sc_model sc_model;
typedef struct sc_hetero_model sc_hetero_model;
typedef struct sc_mechanism sc_mechanism;

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_INVALID_ARGUMENT,
  SC_ERR_INVALID_PROBABILITY,
  SC_ERR_DEGENERATE,      /* conditioning on or dividing by a vanishing probability */
  SC_ERR_INDEX,           /* student index out of range */
  SC_ERR_DIMENSION,       /* mismatched policy / profile / buffer sizes */
  SC_ERR_TOO_LARGE,       /* exact enumeration cap exceeded */
  SC_ERR_NOT_APPLICABLE,  /* preconditions of an analytic bound not met */
  SC_ERR_SOLVER,          /* numerical breakdown in the LP oracle */
  SC_ERR_INTERNAL
} sc_status;

SPOTCHECK_API const char* sc_status_str(sc_status status);
SPOTCHECK_API const char* sc_version(void);

typedef enum sc_signal { SC_SIGNAL_A = 0, SC_SIGNAL_B = 1 } sc_signal;

typedef enum sc_family {
  SC_FAMILY_ROS = 0,
  SC_FAMILY_RSS = 1,
  SC_FAMILY_RSUS = 2,
  SC_FAMILY_HETERO = 3,
  SC_FAMILY_CUSTOM = 4
} sc_family;

typedef enum sc_strategy {
  SC_STRATEGY_TRUTHFUL = 0,
  SC_STRATEGY_EFFORT_FLIP = 1,
  SC_STRATEGY_EFFORT_CONST_A = 2,
  SC_STRATEGY_EFFORT_CONST_B = 3,
  SC_STRATEGY_LAZY_A = 4,
  SC_STRATEGY_LAZY_B = 5
} sc_strategy;

typedef enum sc_concept { SC_CONCEPT_DSIC = 0, SC_CONCEPT_ICCP = 1 } sc_concept;

typedef struct sc_feasibility {
  int feasible;
  double margin; /* slack of the binding existence condition */
  char reason[160];
} sc_feasibility;

/* ---- signal model --------------------------------------------------- */

/* prior_a = Pr[q=a], p_a_given_a = Pr[s=a|q=a], p_b_given_b = Pr[s=b|q=b].
 * Labels are canonicalized so the marginal of signal a is the larger one. */
SPOTCHECK_API sc_status sc_model_create(double prior_a, double p_a_given_a, double p_b_given_b,
                                        sc_model** out);
SPOTCHECK_API void sc_model_free(sc_model* model);
SPOTCHECK_API int sc_model_label_swapped(const sc_model* model);
SPOTCHECK_API double sc_model_marginal(const sc_model* model, sc_signal l);
SPOTCHECK_API double sc_model_pair_joint(const sc_model* model, sc_signal l, sc_signal t);
SPOTCHECK_API sc_status sc_model_conditional(const sc_model* model, sc_signal l, sc_signal given,
                                             double* out);
/* out must hold n+1 doubles: out[j] = Pr[exactly j of n students observe a]. */
SPOTCHECK_API sc_status sc_model_count_distribution(const sc_model* model, int n, double* out);
SPOTCHECK_API sc_status sc_model_vector_joint(const sc_model* model, const sc_signal* signals,
                                              int len, double* out);

/* ---- heterogeneous model -------------------------------------------- */

SPOTCHECK_API sc_status sc_hetero_model_create(double prior_a, int n_students,
                                               const double* p_a_given_a,
                                               const double* p_b_given_b, double ta_p_a_given_a,
                                               double ta_p_b_given_b, const double* costs,
                                               sc_hetero_model** out);
SPOTCHECK_API void sc_hetero_model_free(sc_hetero_model* model);
SPOTCHECK_API int sc_hetero_model_n(const sc_hetero_model* model);
SPOTCHECK_API sc_status sc_hetero_ta_joint(const sc_hetero_model* model, int student, sc_signal l,
                                           sc_signal t, double* out);

/* ---- mechanisms ------------------------------------------------------ */

/* Constructors fill *feasibility always; *out receives a handle only when the
 * optimum exists (otherwise *out is set to NULL and the status is SC_OK). */
SPOTCHECK_API sc_status sc_optimal_ros(const sc_model* model, double cost, double reward, int n,
                                       sc_feasibility* feasibility, sc_mechanism** out);
SPOTCHECK_API sc_status sc_optimal_rss(const sc_model* model, double cost, double reward, int n,
                                       sc_feasibility* feasibility, sc_mechanism** out);
SPOTCHECK_API sc_status sc_optimal_rsus(const sc_model* model, double cost, double reward, int n,
                                        sc_feasibility* feasibility, sc_mechanism** out);
SPOTCHECK_API sc_status sc_optimal_hetero_prss(const sc_hetero_model* model, double reward,
                                               sc_feasibility* feasibility, sc_mechanism** out);
/* x_a and x_b hold n+1 entries indexed by the total number of a-reports;
 * x_a[0] and x_b[n] must be zero. */
SPOTCHECK_API sc_status sc_custom_mechanism(double cost, double reward, int n, const double* x_a,
                                            const double* x_b, sc_mechanism** out);
SPOTCHECK_API void sc_mechanism_free(sc_mechanism* mech);
SPOTCHECK_API int sc_mechanism_n(const sc_mechanism* mech);
SPOTCHECK_API sc_family sc_mechanism_family(const sc_mechanism* mech);
/* Copies the count policy into caller buffers of n+1 doubles each. */
SPOTCHECK_API sc_status sc_mechanism_count_policy(const sc_mechanism* mech, double* x_a,
                                                  double* x_b);
/* Per-student pair of a personal (heterogeneous) policy. */
SPOTCHECK_API sc_status sc_mechanism_personal_policy(const sc_mechanism* mech, int student,
                                                     double* x_a, double* x_b);

/* ros_margin = (P_bb - P_ab) - c/R; rss_margin = (P_a|a - P_a) - c/R. */
SPOTCHECK_API sc_status sc_feasibility_margins(const sc_model* model, double cost, double reward,
                                               double* ros_margin, double* rss_margin);

/* ---- workload --------------------------------------------------------- */

SPOTCHECK_API sc_status sc_ta_workload(const sc_model* model, const sc_mechanism* mech,
                                       double* out);
SPOTCHECK_API sc_status sc_hetero_workload(const sc_hetero_model* model, const sc_mechanism* mech,
                                           double* out);
SPOTCHECK_API sc_status sc_savings_lower_bound(const sc_model* model, double cost, double reward,
                                               double* out);

typedef struct sc_comparison {
  sc_feasibility ros, rss, rsus;
  double ros_workload, rss_workload, rsus_workload; /* valid when feasible */
  int has_scaled_rss, has_scaled_rsus;
  double scaled_rss, scaled_rsus;
} sc_comparison;

SPOTCHECK_API sc_status sc_compare_mechanisms(const sc_model* model, double cost, double reward,
                                              int n, sc_comparison* out);

/* ---- incentives -------------------------------------------------------- */

/* others must hold n-1 strategies (opponents in student-index order). */
SPOTCHECK_API sc_status sc_expected_utility(const sc_model* model, const sc_mechanism* mech,
                                            int student, sc_strategy own,
                                            const sc_strategy* others, double* out);
SPOTCHECK_API sc_status sc_hetero_expected_utility(const sc_hetero_model* model,
                                                   const sc_mechanism* mech, int student,
                                                   sc_strategy own, const sc_strategy* others,
                                                   double* out);

#define SC_MAX_VERIFY_N 8

typedef struct sc_verification {
  int passed;
  sc_concept solution_concept;
  double tolerance;
  long long profiles_checked;
  double worst_gap;                            /* deviation utility - truthful utility */
  int worst_student;
  sc_strategy worst_strategy;
  sc_strategy worst_profile[SC_MAX_VERIFY_N];  /* first worst_profile_len entries */
  int worst_profile_len;
} sc_verification;

/* Brute-force certification: DSIC enumerates all six strategies (n <= 6),
 * ICCP the conscientious set (n <= 8). */
SPOTCHECK_API sc_status sc_verify(const sc_model* model, const sc_mechanism* mech,
                                  sc_concept solution_concept, double tolerance, sc_verification* out);
SPOTCHECK_API sc_status sc_hetero_verify(const sc_hetero_model* model, const sc_mechanism* mech,
                                         sc_concept solution_concept, double tolerance,
                                         sc_verification* out);
SPOTCHECK_API sc_status sc_best_response(const sc_model* model, const sc_mechanism* mech,
                                         int student, const sc_strategy* others,
                                         sc_strategy* strategy, double* utility);
SPOTCHECK_API const char* sc_strategy_str(sc_strategy strategy);

/* ---- simulation -------------------------------------------------------- */

typedef struct sc_sim_result {
  long long trials;
  double empirical_workload;
  double workload_se;
  double agreement_rate;
} sc_sim_result;

/* profile holds n strategies. mean_utility / utility_se / spot_check_rate may
 * each be NULL or point at n doubles. */
SPOTCHECK_API sc_status sc_simulate(const sc_model* model, const sc_mechanism* mech,
                                    const sc_strategy* profile, long long trials, uint64_t seed,
                                    sc_sim_result* out, double* mean_utility, double* utility_se,
                                    double* spot_check_rate);
SPOTCHECK_API sc_status sc_hetero_simulate(const sc_hetero_model* model, const sc_mechanism* mech,
                                           const sc_strategy* profile, long long trials,
                                           uint64_t seed, sc_sim_result* out, double* mean_utility,
                                           double* utility_se, double* spot_check_rate);

/* ---- experiment sweeps -------------------------------------------------- */

typedef struct sc_rc_sweep_point {
  double r_over_c, p_signal;
  int found; /* some prior admits both the ROS and RSS optima */
  double prior_star, ros_workload, rss_workload, scaled_rss;
  int feasible_ros, feasible_rss;
} sc_rc_sweep_point;

SPOTCHECK_API sc_status sc_sweep_rc_point(double r_over_c, double p_signal, int n,
                                          double prior_step, sc_rc_sweep_point* out);

typedef struct sc_n_sweep_row {
  int n;
  int feasible_ros, feasible_rss, feasible_rsus;
  double ros_workload, rss_workload, rsus_workload;
  double scaled_rss, scaled_rsus;
} sc_n_sweep_row;

SPOTCHECK_API sc_status sc_sweep_n_row(const sc_model* model, double cost, double reward, int n,
                                       sc_n_sweep_row* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPOTCHECK_H */
