#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string cli = HETFB_CLI;
const std::string data = HETFB_TEST_DATA;

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / ("hetfb_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + cli + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream e(err_path);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find("\r\n", pos);
    REQUIRE(end != std::string::npos);
    out.push_back(text.substr(pos, end - pos));
    pos = end + 2;
  }
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

std::string write_scenario(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

const char* unseeded = R"({
  "cells": [{"tier": "macro", "position_m": [0, 0]}, {"tier": "macro", "position_m": [1000, 0]},
            {"tier": "pico", "position_m": [210, 140]}],
  "user_drop": {"count": 4}
})";

}  // namespace

TEST_CASE("version") {
  const Run r = run("--version");
  CHECK(r.status == 0);
  CHECK(r.out.find("hetfb 1.0.0") != std::string::npos);
}

TEST_CASE("exact rate for a single user") {
  const Run r = run("rate-exact --scenario " + data + "/single_user.json");
  REQUIRE(r.status == 0);
  const auto L = lines(r.out);
  REQUIRE(L.size() == 2);
  CHECK(L[0] == "drop,user,kind,num_interferers,rho0_db,K0,N,M,user_rate,sum_rate");
  const auto f = fields(L[1]);
  REQUIRE(f.size() == 10);
  CHECK(f[0] == "0");
  CHECK(f[5] == "1");
  CHECK(f[6] == "16");
  CHECK(f[7] == "16");
  CHECK(f[8] == f[9]);
  CHECK(std::stod(f[8]) > 0.0);
}

TEST_CASE("csv headers") {
  const std::string s = " --scenario " + data + "/golden.json --users 3";
  const auto asym = lines(run("rate-asymptotic --M 16" + s).out);
  REQUIRE(!asym.empty());
  CHECK(asym[0] == "drop,user,kind,num_interferers,rho0_db,K0,N,M,user_rate,sum_rate,a,b");
  const auto sim = lines(run("simulate --slots 50" + s).out);
  REQUIRE(sim.size() == 2);
  CHECK(sim[0] ==
        "policy,N,M,K0,drops,slots_per_drop,sum_rate,sum_rate_se,fairness_theta,fairness_theta_se,outage_fraction,"
        "outage_fraction_se");
  const auto plan = lines(run("plan-feedback --eta 0.9" + s).out);
  REQUIRE(plan.size() == 2);
  CHECK(plan[0] ==
        "drop,K0,N,eta,m_exact,ratio_exact,m_asymptotic,ratio_asymptotic,violations_exact,violations_asymptotic");
  // three users on sixteen blocks never reach K0 M / N > 1 below M = 6, but M = N does
  CHECK(fields(plan[1]).size() == 10);
}

TEST_CASE("infeasible asymptotic plan is reported as NA") {
  const Run r = run("plan-feedback --eta 0.9 --scenario " + data + "/single_user.json");
  REQUIRE(r.status == 0);
  const auto f = fields(lines(r.out).at(1));
  CHECK(f[6] == "NA");
  CHECK(f[7] == "NA");
  CHECK(f[4] != "NA");
}

TEST_CASE("exit codes") {
  const Run malformed = run("rate-exact --scenario " + data + "/malformed.json");
  CHECK(malformed.status == 2);
  CHECK(malformed.err.find(":3:") != std::string::npos);
  const Run empty = run("rate-exact --scenario " + data + "/empty.json");
  CHECK(empty.status == 2);
  CHECK(empty.err.find("cells") != std::string::npos);
  CHECK(run("rate-exact --scenario " + data + "/missing.json").status == 2);
  CHECK(run("simulate --policy fifo --scenario " + data + "/single_user.json").status == 2);
  CHECK(run("rate-exact --M 17 --scenario " + data + "/single_user.json").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("rate-asymptotic --M 1 --scenario " + data + "/single_user.json").status != 0);
  const std::string file = write_scenario("unseeded.json", unseeded);
  CHECK(run("simulate --slots 10 --scenario " + file, "HETFB_SEED=abc").status == 2);
}

TEST_CASE("validate passes on the golden scenario") {
  const Run r = run("validate --scenario " + data + "/golden.json");
  CHECK(r.status == 0);
  const auto L = lines(r.out);
  REQUIRE(L.size() >= 6);
  CHECK(L[0] == "check,status,detail");
  for (std::size_t i = 1; i < L.size(); ++i) CHECK_MESSAGE(fields(L[i]).at(1) == "PASS", L[i]);
}

TEST_CASE("simulation agrees with the exact rate") {
  const std::string s = " --M 4 --scenario " + data + "/single_user.json";
  const auto exact = fields(lines(run("rate-exact" + s).out).at(1));
  const auto sim = fields(lines(run("simulate --slots 100000" + s).out).at(1));
  const double e = std::stod(exact[9]), m = std::stod(sim[6]);
  CHECK(std::fabs(m - e) <= 0.01 * e);
}

TEST_CASE("output is reproducible across thread counts") {
  const std::string s = " --drops 4 --slots 300 --M 2 --scenario " + data + "/golden.json";
  const Run one = run("simulate --threads 1" + s);
  const Run three = run("simulate --threads 3" + s);
  REQUIRE(one.status == 0);
  CHECK(one.out == three.out);
  CHECK(run("simulate --threads 1 --seed 5" + s).out != one.out);
}

TEST_CASE("out file matches stdout") {
  const auto path = (scratch() / "rates.csv").string();
  const std::string s = " --scenario " + data + "/single_user.json";
  REQUIRE(run("rate-exact --out " + path + s).status == 0);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run("rate-exact" + s).out);
}

TEST_CASE("seed precedence") {
  const std::string file = write_scenario("unseeded.json", unseeded);
  const std::string s = " --slots 100 --M 2 --scenario " + file;
  const std::string dflt = run("simulate" + s).out;
  CHECK(run("simulate --seed 1" + s).out == dflt);
  const std::string env5 = run("simulate" + s, "HETFB_SEED=5").out;
  CHECK(env5 != dflt);
  CHECK(run("simulate --seed 5" + s).out == env5);
  CHECK(run("simulate --seed 5" + s, "HETFB_SEED=9").out == env5);

  // a seed in the file beats the environment
  const std::string golden = " --slots 100 --M 2 --scenario " + data + "/golden.json";
  CHECK(run("simulate" + golden, "HETFB_SEED=5").out == run("simulate" + golden).out);
  CHECK(run("simulate --seed 2024" + golden).out == run("simulate" + golden).out);
}
