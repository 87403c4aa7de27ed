// spotcheck CLI: mechanism reports, incentive verification, workload
// comparisons, experiment sweeps and Monte Carlo simulation on top of the
// shared-library C API.
//
// Exit codes: 0 success (including analytically infeasible results),
// 1 verification failure, 2 usage or configuration error.
//
// Output is plain text or machine formats only; nothing is colorized, so
// NO_COLOR needs no special handling.

#include <spotcheck/spotcheck.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void usage_error(const std::string& what) { throw UsageError(what); }

void check_status(sc_status status, const std::string& context) {
  if (status != SC_OK) usage_error(context + ": " + sc_status_str(status));
}

// Shortest round-trip decimal representation, so emitted CSV is diffable
// across platforms.
std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

// Ten significant digits for the human-readable reports.
std::string format_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct HeteroStudent {
  double p_a_given_a = 0.9;
  double p_b_given_b = 0.9;
  double cost = 1.0;
};

struct HeteroParams {
  double prior_a = 0.8;
  double ta_p_a_given_a = 0.9;
  double ta_p_b_given_b = 0.9;
  std::vector<HeteroStudent> students;
};

// Resolved run configuration. Defaults are the running example used across
// the docs and tests: prior 0.8, symmetric noise 0.9, R/c = 25, three graders.
struct RunConfig {
  double prior_a = 0.8;
  double p_a_given_a = 0.9;
  double p_b_given_b = 0.9;
  double cost = 1.0;
  double reward = 25.0;
  int n = 3;
  std::string family = "rss";
  std::string concept_name = "dsic";
  long long trials = 1000000;
  uint64_t seed = 42;
  double tolerance = 1e-9;
  std::vector<std::string> profile;  // empty = all truthful
  std::optional<HeteroParams> hetero;
  // custom policy (family = custom)
  std::vector<double> policy_x_a;
  std::vector<double> policy_x_b;
  // sweep grids
  double rc_min = 2.0;
  double rc_max = 1000.0;
  int rc_count = 25;
  std::vector<double> rc_values;  // overrides min/max/count when nonempty
  std::vector<double> p_signals = {0.6, 0.7, 0.8, 0.9, 1.0};
  double prior_step = 0.001;
  int n_min = 1;
  int n_max = 20;
};

void reject_unknown_keys(const json& object, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) usage_error("unknown key '" + it.key() + "' in " + where);
  }
}

double require_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    usage_error(std::string("missing numeric '") + key + "' in " + where);
  }
  return j.at(key).get<double>();
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_error("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    usage_error("config parse error: " + std::string(e.what()));
  }
  if (!doc.is_object()) usage_error("config root must be a JSON object");
  reject_unknown_keys(doc,
                      {"model", "hetero_model", "econ", "n", "family", "concept", "trials", "seed",
                       "tolerance", "profile", "policy", "sweep"},
                      "config");
  if (doc.contains("model")) {
    const json& m = doc.at("model");
    reject_unknown_keys(m, {"prior_a", "p_a_given_a", "p_b_given_b"}, "model");
    config.prior_a = require_number(m, "prior_a", "model");
    config.p_a_given_a = require_number(m, "p_a_given_a", "model");
    config.p_b_given_b = require_number(m, "p_b_given_b", "model");
  }
  if (doc.contains("hetero_model")) {
    const json& h = doc.at("hetero_model");
    reject_unknown_keys(h, {"prior_a", "ta", "students"}, "hetero_model");
    HeteroParams params;
    params.prior_a = require_number(h, "prior_a", "hetero_model");
    if (!h.contains("ta") || !h.at("ta").is_object()) usage_error("hetero_model needs a 'ta' object");
    reject_unknown_keys(h.at("ta"), {"p_a_given_a", "p_b_given_b"}, "hetero_model.ta");
    params.ta_p_a_given_a = require_number(h.at("ta"), "p_a_given_a", "hetero_model.ta");
    params.ta_p_b_given_b = require_number(h.at("ta"), "p_b_given_b", "hetero_model.ta");
    if (!h.contains("students") || !h.at("students").is_array() || h.at("students").empty()) {
      usage_error("hetero_model needs a nonempty 'students' array");
    }
    for (const json& s : h.at("students")) {
      reject_unknown_keys(s, {"p_a_given_a", "p_b_given_b", "cost"}, "hetero_model.students[]");
      HeteroStudent student;
      student.p_a_given_a = require_number(s, "p_a_given_a", "student");
      student.p_b_given_b = require_number(s, "p_b_given_b", "student");
      student.cost = require_number(s, "cost", "student");
      params.students.push_back(student);
    }
    config.hetero = std::move(params);
    config.n = static_cast<int>(config.hetero->students.size());
  }
  if (doc.contains("econ")) {
    const json& e = doc.at("econ");
    reject_unknown_keys(e, {"cost", "reward"}, "econ");
    config.cost = require_number(e, "cost", "econ");
    config.reward = require_number(e, "reward", "econ");
  }
  if (doc.contains("n")) config.n = doc.at("n").get<int>();
  if (doc.contains("family")) config.family = doc.at("family").get<std::string>();
  if (doc.contains("concept")) config.concept_name = doc.at("concept").get<std::string>();
  if (doc.contains("trials")) config.trials = doc.at("trials").get<long long>();
  if (doc.contains("seed")) config.seed = doc.at("seed").get<uint64_t>();
  if (doc.contains("tolerance")) config.tolerance = doc.at("tolerance").get<double>();
  if (doc.contains("profile")) {
    config.profile = doc.at("profile").get<std::vector<std::string>>();
  }
  if (doc.contains("policy")) {
    const json& p = doc.at("policy");
    reject_unknown_keys(p, {"x_a", "x_b"}, "policy");
    if (!p.contains("x_a") || !p.contains("x_b")) usage_error("policy needs x_a and x_b arrays");
    config.policy_x_a = p.at("x_a").get<std::vector<double>>();
    config.policy_x_b = p.at("x_b").get<std::vector<double>>();
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    reject_unknown_keys(
        s, {"rc_min", "rc_max", "rc_count", "r_over_c", "p_signal", "prior_step", "n_min", "n_max"},
        "sweep");
    if (s.contains("rc_min")) config.rc_min = s.at("rc_min").get<double>();
    if (s.contains("rc_max")) config.rc_max = s.at("rc_max").get<double>();
    if (s.contains("rc_count")) config.rc_count = s.at("rc_count").get<int>();
    if (s.contains("r_over_c")) config.rc_values = s.at("r_over_c").get<std::vector<double>>();
    if (s.contains("p_signal")) config.p_signals = s.at("p_signal").get<std::vector<double>>();
    if (s.contains("prior_step")) config.prior_step = s.at("prior_step").get<double>();
    if (s.contains("n_min")) config.n_min = s.at("n_min").get<int>();
    if (s.contains("n_max")) config.n_max = s.at("n_max").get<int>();
  }
}

// RAII wrappers over the C handles.
struct ModelHandle {
  sc_model* ptr = nullptr;
  ~ModelHandle() { sc_model_free(ptr); }
};
struct HeteroHandle {
  sc_hetero_model* ptr = nullptr;
  ~HeteroHandle() { sc_hetero_model_free(ptr); }
};
struct MechanismHandle {
  sc_mechanism* ptr = nullptr;
  ~MechanismHandle() { sc_mechanism_free(ptr); }
};

void build_model(const RunConfig& config, ModelHandle& model) {
  check_status(sc_model_create(config.prior_a, config.p_a_given_a, config.p_b_given_b, &model.ptr),
               "model");
}

void build_hetero(const RunConfig& config, HeteroHandle& model) {
  if (!config.hetero) usage_error("family 'hetero' requires a hetero_model section in the config");
  const HeteroParams& params = *config.hetero;
  std::vector<double> paa, pbb, costs;
  for (const HeteroStudent& s : params.students) {
    paa.push_back(s.p_a_given_a);
    pbb.push_back(s.p_b_given_b);
    costs.push_back(s.cost);
  }
  check_status(sc_hetero_model_create(params.prior_a, static_cast<int>(params.students.size()),
                                      paa.data(), pbb.data(), params.ta_p_a_given_a,
                                      params.ta_p_b_given_b, costs.data(), &model.ptr),
               "hetero model");
}

sc_feasibility build_mechanism(const RunConfig& config, const ModelHandle& model,
                               MechanismHandle& mech) {
  sc_feasibility feasibility{};
  sc_status status;
  if (config.family == "ros") {
    status = sc_optimal_ros(model.ptr, config.cost, config.reward, config.n, &feasibility, &mech.ptr);
  } else if (config.family == "rss") {
    status = sc_optimal_rss(model.ptr, config.cost, config.reward, config.n, &feasibility, &mech.ptr);
  } else if (config.family == "rsus") {
    status =
        sc_optimal_rsus(model.ptr, config.cost, config.reward, config.n, &feasibility, &mech.ptr);
  } else if (config.family == "custom") {
    if (config.policy_x_a.size() != static_cast<size_t>(config.n) + 1 ||
        config.policy_x_b.size() != static_cast<size_t>(config.n) + 1) {
      usage_error("custom policy needs n+1 entries in policy.x_a and policy.x_b");
    }
    status = sc_custom_mechanism(config.cost, config.reward, config.n, config.policy_x_a.data(),
                                 config.policy_x_b.data(), &mech.ptr);
    feasibility.feasible = 1;
  } else {
    usage_error("unknown family: " + config.family);
  }
  check_status(status, "mechanism");
  return feasibility;
}

json inputs_json(const RunConfig& config, bool include_sim = false) {
  json inputs;
  if (config.hetero) {
    json students = json::array();
    for (const HeteroStudent& s : config.hetero->students) {
      students.push_back(
          {{"p_a_given_a", s.p_a_given_a}, {"p_b_given_b", s.p_b_given_b}, {"cost", s.cost}});
    }
    inputs["hetero_model"] = {{"prior_a", config.hetero->prior_a},
                              {"ta",
                               {{"p_a_given_a", config.hetero->ta_p_a_given_a},
                                {"p_b_given_b", config.hetero->ta_p_b_given_b}}},
                              {"students", students}};
  } else {
    inputs["model"] = {{"prior_a", config.prior_a},
                       {"p_a_given_a", config.p_a_given_a},
                       {"p_b_given_b", config.p_b_given_b}};
  }
  inputs["econ"] = {{"cost", config.cost}, {"reward", config.reward}};
  inputs["n"] = config.n;
  inputs["family"] = config.family;
  if (include_sim) {
    inputs["trials"] = config.trials;
    inputs["seed"] = config.seed;
  }
  return inputs;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) usage_error("cannot open output file: " + out_path);
  out << text;
}

sc_strategy parse_strategy(const std::string& name) {
  if (name == "truthful") return SC_STRATEGY_TRUTHFUL;
  if (name == "effort_flip") return SC_STRATEGY_EFFORT_FLIP;
  if (name == "effort_const_a") return SC_STRATEGY_EFFORT_CONST_A;
  if (name == "effort_const_b") return SC_STRATEGY_EFFORT_CONST_B;
  if (name == "lazy_a") return SC_STRATEGY_LAZY_A;
  if (name == "lazy_b") return SC_STRATEGY_LAZY_B;
  usage_error("unknown strategy: " + name);
}

std::vector<sc_strategy> resolve_profile(const RunConfig& config) {
  std::vector<sc_strategy> profile(static_cast<size_t>(config.n), SC_STRATEGY_TRUTHFUL);
  if (config.profile.empty()) return profile;
  if (config.profile.size() != static_cast<size_t>(config.n)) {
    usage_error("profile must list one strategy per student");
  }
  for (size_t i = 0; i < profile.size(); ++i) profile[i] = parse_strategy(config.profile[i]);
  return profile;
}

// ---- commands ----

int cmd_optimal(const RunConfig& config, const std::string& out_path, const std::string& format) {
  std::ostringstream text;
  json report;
  report["command"] = "optimal";
  report["inputs"] = inputs_json(config);

  if (config.family == "hetero") {
    HeteroHandle model;
    build_hetero(config, model);
    sc_feasibility feasibility{};
    MechanismHandle mech;
    check_status(sc_optimal_hetero_prss(model.ptr, config.reward, &feasibility, &mech.ptr),
                 "mechanism");
    report["result"]["feasible"] = feasibility.feasible != 0;
    report["result"]["margin"] = feasibility.margin;
    text << "family: hetero (per-student optimal PRSS)\n";
    text << "feasible: " << (feasibility.feasible ? "yes" : "no") << " (margin "
         << format_text(feasibility.margin) << ")\n";
    if (!feasibility.feasible) {
      report["result"]["reason"] = feasibility.reason;
      text << "reason: " << feasibility.reason << "\n";
    } else {
      double workload = 0.0;
      check_status(sc_hetero_workload(model.ptr, mech.ptr, &workload), "workload");
      json students = json::array();
      for (int i = 0; i < config.n; ++i) {
        double x_a = 0.0, x_b = 0.0;
        check_status(sc_mechanism_personal_policy(mech.ptr, i, &x_a, &x_b), "policy");
        students.push_back({{"x_a", x_a}, {"x_b", x_b}});
        text << "student " << i << ": x_a " << format_text(x_a) << "  x_b " << format_text(x_b)
             << "\n";
      }
      report["result"]["students"] = students;
      report["result"]["workload"] = workload;
      text << "ta_workload: " << format_text(workload) << "\n";
    }
  } else {
    ModelHandle model;
    build_model(config, model);
    MechanismHandle mech;
    sc_feasibility feasibility = build_mechanism(config, model, mech);
    double ros_margin = 0.0, rss_margin = 0.0;
    check_status(sc_feasibility_margins(model.ptr, config.cost, config.reward, &ros_margin,
                                        &rss_margin),
                 "margins");
    report["result"]["feasible"] = feasibility.feasible != 0;
    report["result"]["margin"] = feasibility.margin;
    report["result"]["ros_margin"] = ros_margin;
    report["result"]["rss_margin"] = rss_margin;
    text << "family: " << config.family << "\n";
    text << "model: prior_a " << format_text(config.prior_a) << "  p(a|a) "
         << format_text(config.p_a_given_a) << "  p(b|b) " << format_text(config.p_b_given_b)
         << "  [P_a " << format_text(sc_model_marginal(model.ptr, SC_SIGNAL_A)) << ", P_b "
         << format_text(sc_model_marginal(model.ptr, SC_SIGNAL_B)) << "]\n";
    text << "econ: cost " << format_text(config.cost) << "  reward " << format_text(config.reward)
         << "  (c/R " << format_text(config.cost / config.reward) << ")\n";
    text << "n: " << config.n << "\n";
    text << "margins: ros " << format_text(ros_margin) << "  rss " << format_text(rss_margin)
         << "\n";
    text << "feasible: " << (feasibility.feasible ? "yes" : "no") << " (margin "
         << format_text(feasibility.margin) << ")\n";
    if (!feasibility.feasible) {
      report["result"]["reason"] = feasibility.reason;
      text << "reason: " << feasibility.reason << "\n";
    } else {
      std::vector<double> x_a(static_cast<size_t>(config.n) + 1);
      std::vector<double> x_b(static_cast<size_t>(config.n) + 1);
      check_status(sc_mechanism_count_policy(mech.ptr, x_a.data(), x_b.data()), "policy");
      double workload = 0.0;
      check_status(sc_ta_workload(model.ptr, mech.ptr, &workload), "workload");
      report["result"]["x_a"] = x_a;
      report["result"]["x_b"] = x_b;
      report["result"]["workload"] = workload;
      text << "x_a (k=0.." << config.n << "):";
      for (double v : x_a) text << " " << format_text(v);
      text << "\nx_b (k=0.." << config.n << "):";
      for (double v : x_b) text << " " << format_text(v);
      text << "\nta_workload: " << format_text(workload) << "\n";
    }
  }

  if (format == "json") {
    emit(report.dump(2) + "\n", out_path);
  } else {
    emit(text.str(), out_path);
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, const std::string& out_path, const std::string& format) {
  sc_concept concept_kind;
  if (config.concept_name == "dsic") {
    concept_kind = SC_CONCEPT_DSIC;
  } else if (config.concept_name == "iccp") {
    concept_kind = SC_CONCEPT_ICCP;
  } else {
    usage_error("unknown concept: " + config.concept_name);
  }

  sc_verification verification{};
  json report;
  report["command"] = "verify";
  report["inputs"] = inputs_json(config);
  report["inputs"]["concept"] = config.concept_name;
  report["inputs"]["tolerance"] = config.tolerance;

  if (config.family == "hetero") {
    HeteroHandle model;
    build_hetero(config, model);
    sc_feasibility feasibility{};
    MechanismHandle mech;
    check_status(sc_optimal_hetero_prss(model.ptr, config.reward, &feasibility, &mech.ptr),
                 "mechanism");
    if (!feasibility.feasible) usage_error("no feasible hetero mechanism to verify");
    check_status(sc_hetero_verify(model.ptr, mech.ptr, concept_kind, config.tolerance, &verification),
                 "verify");
  } else {
    ModelHandle model;
    build_model(config, model);
    MechanismHandle mech;
    sc_feasibility feasibility = build_mechanism(config, model, mech);
    if (!feasibility.feasible) usage_error("no feasible mechanism to verify");
    check_status(sc_verify(model.ptr, mech.ptr, concept_kind, config.tolerance, &verification),
                 "verify");
  }

  report["result"]["passed"] = verification.passed != 0;
  report["result"]["profiles_checked"] = verification.profiles_checked;
  report["result"]["worst_gap"] = verification.worst_gap;
  report["result"]["worst_student"] = verification.worst_student;
  report["result"]["worst_strategy"] = sc_strategy_str(verification.worst_strategy);
  json profile = json::array();
  for (int i = 0; i < verification.worst_profile_len; ++i) {
    profile.push_back(sc_strategy_str(verification.worst_profile[i]));
  }
  report["result"]["worst_opponent_profile"] = profile;

  std::ostringstream text;
  text << "concept: " << config.concept_name << "\n";
  text << "verdict: " << (verification.passed ? "PASS" : "FAIL") << "\n";
  text << "profiles checked: " << verification.profiles_checked << "\n";
  text << "worst deviation: student " << verification.worst_student << " plays "
       << sc_strategy_str(verification.worst_strategy) << " (gap "
       << format_text(verification.worst_gap) << ")\n";
  text << "worst opponent profile:";
  for (int i = 0; i < verification.worst_profile_len; ++i) {
    text << " " << sc_strategy_str(verification.worst_profile[i]);
  }
  text << "\n";

  if (format == "json") {
    emit(report.dump(2) + "\n", out_path);
  } else {
    emit(text.str(), out_path);
  }
  return verification.passed ? kExitOk : kExitVerifyFailed;
}

int cmd_compare(const RunConfig& config, const std::string& out_path, const std::string& format) {
  ModelHandle model;
  build_model(config, model);
  sc_comparison comparison{};
  check_status(sc_compare_mechanisms(model.ptr, config.cost, config.reward, config.n, &comparison),
               "compare");

  json report;
  report["command"] = "compare";
  report["inputs"] = inputs_json(config);
  auto entry = [](const sc_feasibility& f, double workload) {
    json j;
    j["feasible"] = f.feasible != 0;
    j["margin"] = f.margin;
    if (f.feasible) {
      j["workload"] = workload;
    } else {
      j["reason"] = f.reason;
    }
    return j;
  };
  report["result"]["ros"] = entry(comparison.ros, comparison.ros_workload);
  report["result"]["rss"] = entry(comparison.rss, comparison.rss_workload);
  report["result"]["rsus"] = entry(comparison.rsus, comparison.rsus_workload);
  if (comparison.has_scaled_rss) report["result"]["scaled_rss"] = comparison.scaled_rss;
  if (comparison.has_scaled_rsus) report["result"]["scaled_rsus"] = comparison.scaled_rsus;

  std::ostringstream text;
  auto line = [&](const char* name, const sc_feasibility& f, double workload) {
    text << name << ": ";
    if (f.feasible) {
      text << "workload " << format_text(workload);
    } else {
      text << "infeasible (" << f.reason << ")";
    }
    text << "\n";
  };
  line("ros", comparison.ros, comparison.ros_workload);
  line("rss", comparison.rss, comparison.rss_workload);
  line("rsus", comparison.rsus, comparison.rsus_workload);
  if (comparison.has_scaled_rss) {
    text << "scaled_rss: " << format_text(comparison.scaled_rss) << "\n";
  }
  if (comparison.has_scaled_rsus) {
    text << "scaled_rsus: " << format_text(comparison.scaled_rsus) << "\n";
  }

  if (format == "json") {
    emit(report.dump(2) + "\n", out_path);
  } else {
    emit(text.str(), out_path);
  }
  return kExitOk;
}

int cmd_sweep_rc(const RunConfig& config, const std::string& out_path, const std::string& format) {
  std::vector<double> rcs = config.rc_values;
  if (rcs.empty()) {
    if (!(config.rc_min > 0.0) || !(config.rc_max >= config.rc_min) || config.rc_count < 1) {
      usage_error("invalid R/c grid");
    }
    if (config.rc_count == 1) {
      rcs.push_back(config.rc_min);
    } else {
      // log-spaced grid; the interesting range of R/c spans decades
      double log_min = std::log(config.rc_min);
      double log_max = std::log(config.rc_max);
      for (int i = 0; i < config.rc_count; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(config.rc_count - 1);
        rcs.push_back(std::exp(log_min + t * (log_max - log_min)));
      }
    }
  }
  if (config.p_signals.empty()) usage_error("empty p_signal grid");

  std::vector<sc_rc_sweep_point> points;
  for (double rc : rcs) {
    for (double p : config.p_signals) {
      sc_rc_sweep_point point{};
      check_status(sc_sweep_rc_point(rc, p, config.n, config.prior_step, &point), "sweep");
      points.push_back(point);
    }
  }

  if (format == "json") {
    json rows = json::array();
    for (const auto& pt : points) {
      json row;
      row["r_over_c"] = pt.r_over_c;
      row["p_signal"] = pt.p_signal;
      if (pt.found) {
        row["prior_star"] = pt.prior_star;
        row["ros_workload"] = pt.ros_workload;
        row["rss_workload"] = pt.rss_workload;
        row["scaled_rss"] = pt.scaled_rss;
      }
      row["feasible_ros"] = pt.feasible_ros != 0;
      row["feasible_rss"] = pt.feasible_rss != 0;
      rows.push_back(row);
    }
    json report;
    report["command"] = "sweep-rc";
    report["inputs"] = inputs_json(config);
    report["inputs"]["sweep"] = {{"r_over_c", rcs},
                                 {"p_signal", config.p_signals},
                                 {"prior_step", config.prior_step}};
    report["result"] = rows;
    emit(report.dump(2) + "\n", out_path);
    return kExitOk;
  }

  std::ostringstream csv;
  csv << "r_over_c,p_signal,prior_star,ros_workload,rss_workload,scaled_rss,feasible_ros,"
         "feasible_rss\n";
  for (const auto& pt : points) {
    csv << format_double(pt.r_over_c) << "," << format_double(pt.p_signal) << ",";
    if (pt.found) {
      csv << format_double(pt.prior_star) << "," << format_double(pt.ros_workload) << ","
          << format_double(pt.rss_workload) << "," << format_double(pt.scaled_rss);
    } else {
      csv << ",,,";  // infeasible cell: empty workload fields
    }
    csv << "," << (pt.feasible_ros ? 1 : 0) << "," << (pt.feasible_rss ? 1 : 0) << "\n";
  }
  emit(csv.str(), out_path);
  return kExitOk;
}

int cmd_sweep_n(const RunConfig& config, const std::string& out_path, const std::string& format) {
  if (config.n_min < 1 || config.n_max < config.n_min) usage_error("invalid n range");
  ModelHandle model;
  build_model(config, model);

  std::vector<sc_n_sweep_row> rows;
  for (int n = config.n_min; n <= config.n_max; ++n) {
    sc_n_sweep_row row{};
    check_status(sc_sweep_n_row(model.ptr, config.cost, config.reward, n, &row), "sweep");
    rows.push_back(row);
  }

  if (format == "json") {
    json out_rows = json::array();
    for (const auto& row : rows) {
      json j;
      j["n"] = row.n;
      if (row.feasible_ros) j["ros_workload"] = row.ros_workload;
      if (row.feasible_rss) j["rss_workload"] = row.rss_workload;
      if (row.feasible_rsus) j["rsus_workload"] = row.rsus_workload;
      if (row.feasible_ros && row.feasible_rss) j["scaled_rss"] = row.scaled_rss;
      if (row.feasible_ros && row.feasible_rsus) j["scaled_rsus"] = row.scaled_rsus;
      out_rows.push_back(j);
    }
    json report;
    report["command"] = "sweep-n";
    report["inputs"] = inputs_json(config);
    report["inputs"]["sweep"] = {{"n_min", config.n_min}, {"n_max", config.n_max}};
    report["result"] = out_rows;
    emit(report.dump(2) + "\n", out_path);
    return kExitOk;
  }

  std::ostringstream csv;
  csv << "n,ros_workload,rss_workload,rsus_workload,scaled_rss,scaled_rsus\n";
  for (const auto& row : rows) {
    csv << row.n << ",";
    if (row.feasible_ros) csv << format_double(row.ros_workload);
    csv << ",";
    if (row.feasible_rss) csv << format_double(row.rss_workload);
    csv << ",";
    if (row.feasible_rsus) csv << format_double(row.rsus_workload);
    csv << ",";
    if (row.feasible_ros && row.feasible_rss) csv << format_double(row.scaled_rss);
    csv << ",";
    if (row.feasible_ros && row.feasible_rsus) csv << format_double(row.scaled_rsus);
    csv << "\n";
  }
  emit(csv.str(), out_path);
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, const std::string& out_path, const std::string& format) {
  if (config.trials < 1) usage_error("trials must be >= 1");
  std::vector<sc_strategy> profile = resolve_profile(config);
  bool truthful_profile = true;
  for (sc_strategy s : profile) truthful_profile &= s == SC_STRATEGY_TRUTHFUL;
  std::vector<double> mean_utility(static_cast<size_t>(config.n), 0.0);
  std::vector<double> utility_se(static_cast<size_t>(config.n), 0.0);
  std::vector<double> spot_rate(static_cast<size_t>(config.n), 0.0);
  sc_sim_result result{};
  double analytic = -1.0;  // analytic workload assumes truthful play

  if (config.family == "hetero") {
    HeteroHandle model;
    build_hetero(config, model);
    sc_feasibility feasibility{};
    MechanismHandle mech;
    check_status(sc_optimal_hetero_prss(model.ptr, config.reward, &feasibility, &mech.ptr),
                 "mechanism");
    if (!feasibility.feasible) usage_error("no feasible hetero mechanism to simulate");
    check_status(sc_hetero_simulate(model.ptr, mech.ptr, profile.data(), config.trials, config.seed,
                                    &result, mean_utility.data(), utility_se.data(),
                                    spot_rate.data()),
                 "simulate");
    if (truthful_profile) {
      check_status(sc_hetero_workload(model.ptr, mech.ptr, &analytic), "workload");
    }
  } else {
    ModelHandle model;
    build_model(config, model);
    MechanismHandle mech;
    sc_feasibility feasibility = build_mechanism(config, model, mech);
    if (!feasibility.feasible) usage_error("no feasible mechanism to simulate");
    check_status(sc_simulate(model.ptr, mech.ptr, profile.data(), config.trials, config.seed,
                             &result, mean_utility.data(), utility_se.data(), spot_rate.data()),
                 "simulate");
    if (truthful_profile) {
      check_status(sc_ta_workload(model.ptr, mech.ptr, &analytic), "workload");
    }
  }

  json report;
  report["command"] = "simulate";
  report["inputs"] = inputs_json(config, true);
  report["result"]["trials"] = result.trials;
  report["result"]["empirical_workload"] = result.empirical_workload;
  report["result"]["workload_se"] = result.workload_se;
  report["result"]["agreement_rate"] = result.agreement_rate;
  if (analytic >= 0.0) {
    report["result"]["analytic_workload"] = analytic;
    report["result"]["workload_delta"] = result.empirical_workload - analytic;
  }
  json students = json::array();
  for (int i = 0; i < config.n; ++i) {
    students.push_back({{"mean_utility", mean_utility[static_cast<size_t>(i)]},
                        {"utility_se", utility_se[static_cast<size_t>(i)]},
                        {"spot_check_rate", spot_rate[static_cast<size_t>(i)]}});
  }
  report["result"]["students"] = students;

  std::ostringstream text;
  text << "trials: " << result.trials << "  seed: " << config.seed << "\n";
  text << "empirical_workload: " << format_text(result.empirical_workload) << " +/- "
       << format_text(result.workload_se) << "\n";
  if (analytic >= 0.0) {
    text << "analytic_workload: " << format_text(analytic) << "  (delta "
         << format_text(result.empirical_workload - analytic) << ")\n";
  }
  text << "agreement_rate: " << format_text(result.agreement_rate) << "\n";
  for (int i = 0; i < config.n; ++i) {
    text << "student " << i << ": utility " << format_text(mean_utility[static_cast<size_t>(i)])
         << " +/- " << format_text(utility_se[static_cast<size_t>(i)]) << "  spot_rate "
         << format_text(spot_rate[static_cast<size_t>(i)]) << "\n";
  }

  if (format == "json") {
    emit(report.dump(2) + "\n", out_path);
  } else {
    emit(text.str(), out_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spot-checking peer-grading mechanisms: optimal construction, verification, "
               "comparison, sweeps and simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  RunConfig cli;  // values provided on the command line
  std::string profile_csv;

  auto add_common = [&](CLI::App* cmd, bool with_model = true) {
    cmd->add_option("--config", config_path, "JSON config file; flags override file values");
    cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    cmd->add_option("--format", format, "output format: csv|json (sweeps default to csv)")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    if (with_model) {
      cmd->add_option("--prior", cli.prior_a, "Pr[q=a]");
      cmd->add_option("--p-aa", cli.p_a_given_a, "Pr[s=a|q=a]");
      cmd->add_option("--p-bb", cli.p_b_given_b, "Pr[s=b|q=b]");
    }
    cmd->add_option("--cost", cli.cost, "effort cost c");
    cmd->add_option("--reward", cli.reward, "agreement reward R");
    cmd->add_option("--n", cli.n, "students per assignment");
    cmd->add_option("--family", cli.family, "mechanism family")
        ->check(CLI::IsMember({"ros", "rss", "rsus", "hetero", "custom"}));
  };

  CLI::App* optimal = app.add_subcommand("optimal", "construct the optimal mechanism");
  add_common(optimal);

  CLI::App* verify = app.add_subcommand("verify", "brute-force incentive certification");
  add_common(verify);
  verify->add_option("--concept", cli.concept_name, "dsic|iccp")
      ->check(CLI::IsMember({"dsic", "iccp"}));
  verify->add_option("--tolerance", cli.tolerance, "utility-gap tolerance");

  CLI::App* compare = app.add_subcommand("compare", "workloads of all three optima");
  add_common(compare);

  CLI::App* sweep_rc = app.add_subcommand("sweep-rc", "min scaled RSS workload over R/c grid");
  add_common(sweep_rc);
  sweep_rc->add_option("--rc-min", cli.rc_min, "smallest R/c");
  sweep_rc->add_option("--rc-max", cli.rc_max, "largest R/c");
  sweep_rc->add_option("--rc-count", cli.rc_count, "log-spaced grid size");
  std::string p_signals_csv;
  sweep_rc->add_option("--p-signals", p_signals_csv, "comma-separated Pr[s=q|q] values");
  sweep_rc->add_option("--prior-step", cli.prior_step, "prior grid-search step");

  CLI::App* sweep_n = app.add_subcommand("sweep-n", "workloads as the class size grows");
  add_common(sweep_n);
  sweep_n->add_option("--n-min", cli.n_min, "first n");
  sweep_n->add_option("--n-max", cli.n_max, "last n");

  CLI::App* simulate = app.add_subcommand("simulate", "seeded Monte Carlo of the grading game");
  add_common(simulate);
  simulate->add_option("--trials", cli.trials, "number of trials");
  simulate->add_option("--seed", cli.seed, "RNG seed");
  simulate->add_option("--profile", profile_csv,
                       "comma-separated strategies (default: all truthful)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) apply_config_file(config, config_path);

    // Command-line values override the config file.
    auto overridden = [&](CLI::App* cmd, const std::string& flag) {
      return cmd->count(flag) > 0;
    };
    CLI::App* active = app.get_subcommands().front();
    if (overridden(active, "--prior")) config.prior_a = cli.prior_a;
    if (overridden(active, "--p-aa")) config.p_a_given_a = cli.p_a_given_a;
    if (overridden(active, "--p-bb")) config.p_b_given_b = cli.p_b_given_b;
    if (overridden(active, "--cost")) config.cost = cli.cost;
    if (overridden(active, "--reward")) config.reward = cli.reward;
    if (overridden(active, "--n")) config.n = cli.n;
    if (overridden(active, "--family")) config.family = cli.family;
    if (active == verify) {
      if (overridden(active, "--concept")) config.concept_name = cli.concept_name;
      if (overridden(active, "--tolerance")) config.tolerance = cli.tolerance;
    }
    if (active == sweep_rc) {
      if (overridden(active, "--rc-min")) config.rc_min = cli.rc_min;
      if (overridden(active, "--rc-max")) config.rc_max = cli.rc_max;
      if (overridden(active, "--rc-count")) config.rc_count = cli.rc_count;
      if (overridden(active, "--prior-step")) config.prior_step = cli.prior_step;
      if (!p_signals_csv.empty()) {
        config.p_signals.clear();
        std::stringstream ss(p_signals_csv);
        std::string item;
        while (std::getline(ss, item, ',')) config.p_signals.push_back(std::stod(item));
      }
    }
    if (active == sweep_n) {
      if (overridden(active, "--n-min")) config.n_min = cli.n_min;
      if (overridden(active, "--n-max")) config.n_max = cli.n_max;
    }
    if (active == simulate) {
      if (overridden(active, "--trials")) config.trials = cli.trials;
      if (overridden(active, "--seed")) config.seed = cli.seed;
      if (!profile_csv.empty()) {
        config.profile.clear();
        std::stringstream ss(profile_csv);
        std::string item;
        while (std::getline(ss, item, ',')) config.profile.push_back(item);
      }
    }
    if (config.family == "hetero" && config.hetero) {
      config.n = static_cast<int>(config.hetero->students.size());
    }

    std::string fmt = format;
    if (active == sweep_rc || active == sweep_n) {
      if (fmt.empty()) fmt = "csv";
      if (fmt == "text") usage_error("sweeps emit csv or json");
    } else {
      if (fmt.empty()) fmt = "text";
      if (fmt == "csv") usage_error("this command emits text or json");
    }

    if (active == optimal) return cmd_optimal(config, out_path, fmt);
    if (active == verify) return cmd_verify(config, out_path, fmt);
    if (active == compare) return cmd_compare(config, out_path, fmt);
    if (active == sweep_rc) return cmd_sweep_rc(config, out_path, fmt);
    if (active == sweep_n) return cmd_sweep_n(config, out_path, fmt);
    if (active == simulate) return cmd_simulate(config, out_path, fmt);
    usage_error("no command selected");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
