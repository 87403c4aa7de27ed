// Drives the installed binary end to end: exit codes, golden CSV headers,
// JSON round-trips and deterministic output. SPOTCHECK_CLI_PATH is injected
// by the build.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "spotcheck_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out_file = scratch_dir() / ("out_" + std::to_string(counter) + ".txt");
  fs::path err_file = scratch_dir() / ("err_" + std::to_string(counter) + ".txt");
  ++counter;
  std::string command = std::string("\"") + SPOTCHECK_CLI_PATH + "\" " + args + " > " +
                        out_file.string() + " 2> " + err_file.string();
  int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

fs::path write_file(const std::string& name, const std::string& content) {
  fs::path path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  RunResult result = run_cli("--help");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("optimal") != std::string::npos);
}

TEST_CASE("unknown flags and subcommands are usage errors") {
  CHECK(run_cli("optimal --no-such-flag").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("optimal --family bogus").exit_code == 2);
}

TEST_CASE("optimal rss report carries the closed-form values") {
  RunResult result = run_cli("optimal --family rss --format json");
  REQUIRE(result.exit_code == 0);
  json report = json::parse(result.out);
  CHECK(report.at("command") == "optimal");
  CHECK(report.at("result").at("feasible") == true);
  CHECK(report.at("result").at("x_a")[1].get<double>() == doctest::Approx(0.1015625));
  CHECK(report.at("result").at("x_b")[0].get<double>() == doctest::Approx(0.2890625));
  CHECK(report.at("result").at("workload").get<double>() == doctest::Approx(0.179675));
}

TEST_CASE("optimal ros matches the fixed-probability solution") {
  RunResult result = run_cli("optimal --family ros --format json");
  REQUIRE(result.exit_code == 0);
  json report = json::parse(result.out);
  CHECK(report.at("result").at("x_b")[0].get<double>() == doctest::Approx(0.5));
  CHECK(report.at("result").at("workload").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("infeasible parameters still exit zero with a report") {
  RunResult result = run_cli("optimal --family ros --cost 1 --reward 5 --format json");
  REQUIRE(result.exit_code == 0);
  json report = json::parse(result.out);
  CHECK(report.at("result").at("feasible") == false);
  CHECK(report.at("result").at("margin").get<double>() == doctest::Approx(-0.12).epsilon(1e-9));
}

TEST_CASE("verify passes the optimum and fails a weakened custom policy") {
  CHECK(run_cli("verify --family rss --n 3").exit_code == 0);
  CHECK(run_cli("verify --family rsus --concept iccp --n 3").exit_code == 0);

  fs::path config = write_file("weak_policy.json", R"({
    "econ": {"cost": 1, "reward": 25},
    "n": 3,
    "family": "custom",
    "policy": {"x_a": [0.0, 0.1015625, 0.1015625, 0.1015625],
               "x_b": [0.28, 0.28, 0.28, 0.0]}
  })");
  RunResult result = run_cli("verify --config " + config.string() + " --format json");
  CHECK(result.exit_code == 1);
  json report = json::parse(result.out);
  CHECK(report.at("result").at("passed") == false);
  std::string worst = report.at("result").at("worst_strategy");
  CHECK(worst.rfind("lazy", 0) == 0);
}

TEST_CASE("compare reports the sandwich of workloads") {
  RunResult result = run_cli("compare --format json");
  REQUIRE(result.exit_code == 0);
  json report = json::parse(result.out);
  double rss = report.at("result").at("rss").at("workload").get<double>();
  double rsus = report.at("result").at("rsus").at("workload").get<double>();
  double ros = report.at("result").at("ros").at("workload").get<double>();
  CHECK(rss < rsus);
  CHECK(rsus < ros);
  CHECK(report.at("result").at("scaled_rss").get<double>() == doctest::Approx(0.35935));
}

TEST_CASE("sweep-n emits the pinned csv schema") {
  RunResult result = run_cli("sweep-n --n-min 1 --n-max 12");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "n,ros_workload,rss_workload,rsus_workload,scaled_rss,scaled_rsus");
  int rows = 0;
  std::string line;
  std::vector<std::string> row3;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.rfind("3,", 0) == 0) {
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row3.push_back(cell);
    }
  }
  CHECK(rows == 12);
  REQUIRE(row3.size() == 6);
  CHECK(std::stod(row3[4]) == doctest::Approx(0.35935).epsilon(1e-6));
}

TEST_CASE("sweep-rc emits the pinned csv schema and sane cells") {
  RunResult result =
      run_cli("sweep-rc --rc-min 25 --rc-max 25 --rc-count 1 --p-signals 0.9,1.0 --prior-step 0.01");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "r_over_c,p_signal,prior_star,ros_workload,rss_workload,scaled_rss,feasible_ros,"
        "feasible_rss");
  std::string row;
  int rows = 0;
  bool saw_feasible = false;
  while (std::getline(lines, row)) {
    ++rows;
    if (row.find(",1,1") != std::string::npos) saw_feasible = true;
  }
  CHECK(rows == 2);
  CHECK(saw_feasible);
}

TEST_CASE("sweep-rc marks cells with no feasible prior") {
  // R/c = 2 is below the feasibility edge for p = 0.9
  RunResult result = run_cli("sweep-rc --rc-min 2 --rc-max 2 --rc-count 1 --p-signals 0.9 "
                             "--prior-step 0.01");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(row.find(",,,") != std::string::npos);  // empty workload cells
  CHECK(row.substr(row.size() - 4) == ",0,0");
}

TEST_CASE("simulate is reproducible and validates trials") {
  RunResult a = run_cli("simulate --trials 20000 --seed 42");
  RunResult b = run_cli("simulate --trials 20000 --seed 42");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);  // byte identical
  RunResult c = run_cli("simulate --trials 20000 --seed 43");
  CHECK(a.out != c.out);
  CHECK(run_cli("simulate --trials 0").exit_code == 2);
}

TEST_CASE("simulate reports the analytic delta under truthful play") {
  RunResult result = run_cli("simulate --family ros --trials 50000 --seed 7 --format json");
  REQUIRE(result.exit_code == 0);
  json report = json::parse(result.out);
  CHECK(report.at("result").at("analytic_workload").get<double>() == doctest::Approx(0.5));
  double delta = report.at("result").at("workload_delta").get<double>();
  CHECK(std::abs(delta) < 0.02);
}

TEST_CASE("simulate accepts an explicit strategy profile") {
  // everyone reports a lazily: the rss mechanism consults at x_a(3) = 0.1015625
  RunResult result = run_cli(
      "simulate --family rss --trials 50000 --seed 9 --profile lazy_a,lazy_a,lazy_a --format json");
  REQUIRE(result.exit_code == 0);
  json report = json::parse(result.out);
  CHECK_FALSE(report.at("result").contains("analytic_workload"));
  double workload = report.at("result").at("empirical_workload").get<double>();
  CHECK(std::abs(workload - 0.1015625) < 0.01);
  CHECK(run_cli("simulate --profile lazy_a,bogus,lazy_b").exit_code == 2);
  CHECK(run_cli("simulate --profile lazy_a,lazy_a").exit_code == 2);  // wrong length for n=3
}

TEST_CASE("json reports round-trip through the config file") {
  RunResult first = run_cli("optimal --family rsus --n 4 --format json");
  REQUIRE(first.exit_code == 0);
  json report = json::parse(first.out);
  fs::path config = write_file("roundtrip.json", report.at("inputs").dump());
  RunResult second = run_cli("optimal --config " + config.string() + " --format json");
  REQUIRE(second.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("hetero family via config file") {
  fs::path config = write_file("hetero.json", R"({
    "hetero_model": {
      "prior_a": 0.7,
      "ta": {"p_a_given_a": 0.92, "p_b_given_b": 0.88},
      "students": [
        {"p_a_given_a": 0.9,  "p_b_given_b": 0.85, "cost": 1.0},
        {"p_a_given_a": 0.8,  "p_b_given_b": 0.9,  "cost": 1.2},
        {"p_a_given_a": 0.95, "p_b_given_b": 0.8,  "cost": 0.8}
      ]
    },
    "econ": {"cost": 1, "reward": 40},
    "family": "hetero"
  })");
  RunResult optimal = run_cli("optimal --config " + config.string() + " --format json");
  REQUIRE(optimal.exit_code == 0);
  json report = json::parse(optimal.out);
  CHECK(report.at("result").at("feasible") == true);
  CHECK(report.at("result").at("students").size() == 3);

  RunResult verify = run_cli("verify --config " + config.string());
  CHECK(verify.exit_code == 0);
}

TEST_CASE("config validation rejects unknown keys") {
  fs::path config = write_file("bad.json", R"({"modle": {"prior_a": 0.8}})");
  RunResult result = run_cli("optimal --config " + config.string());
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("unknown key") != std::string::npos);
}

TEST_CASE("flags override config values") {
  fs::path config = write_file("override.json", R"({
    "model": {"prior_a": 0.8, "p_a_given_a": 0.9, "p_b_given_b": 0.9},
    "econ": {"cost": 1, "reward": 25},
    "n": 3,
    "family": "ros"
  })");
  RunResult result =
      run_cli("optimal --config " + config.string() + " --reward 5 --format json");
  REQUIRE(result.exit_code == 0);
  json report = json::parse(result.out);
  CHECK(report.at("result").at("feasible") == false);  // c/R = 0.2 kills ros
}

TEST_CASE("output lands in the requested file") {
  fs::path out_file = scratch_dir() / "report.csv";
  RunResult result = run_cli("sweep-n --n-min 1 --n-max 3 --out " + out_file.string());
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.empty());
  std::string contents = slurp(out_file);
  CHECK(contents.rfind("n,", 0) == 0);
}
