#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "lri/cli.hpp"

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_name(const char* tag) {
  static int counter = 0;
  return "/tmp/lri_cli_" + std::to_string(::getpid()) + "_" + tag + "_" +
         std::to_string(counter++);
}

// Runs the CLI in-process with stdout redirected to a scratch file.
int run(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("lri");
  for (const auto& a : args) argv.push_back(a.c_str());

  const std::string path = tmp_name("stdout");
  std::fflush(stdout);
  const int saved = ::dup(1);
  REQUIRE(saved >= 0);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  REQUIRE(fd >= 0);
  ::dup2(fd, 1);
  ::close(fd);
  const int rc = lri::run_cli(static_cast<int>(argv.size()), argv.data());
  std::fflush(stdout);
  ::dup2(saved, 1);
  ::close(saved);
  if (out) *out = slurp(path);
  ::unlink(path.c_str());
  return rc;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("bounds: reports carry inputs, value, and direction") {
  const std::string out = tmp_name("bound");
  CHECK(run({"bounds", "--name", "failure_lb", "--x", "0.5", "--p_b", "1.0",
             "--gamma", "0.5", "--out", out}) == 0);
  const json j = json::parse(slurp(out));
  ::unlink(out.c_str());
  CHECK(j["name"] == "failure_lb");
  CHECK(j["value"].get<double>() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(j["direction"] == "lower_bound");
  CHECK(j["inputs"]["gamma"].get<double>() == 0.5);

  std::string text;
  CHECK(run({"bounds", "--name", "beta_moment", "--x", "0.5", "--delta", "1.0",
             "--m", "1"},
            &text) == 0);
  const json b = json::parse(text);
  CHECK(b["value"].get<double>() == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(b["direction"] == "exact");

  CHECK(run({"bounds", "--name", "nonsense"}) != 0);
  // A schedule whose increments grow has no moment bound: hard error.
  CHECK(run({"bounds", "--name", "moment_ub", "--x", "0.5", "--m", "2",
             "--schedule", R"({"kind":"constant","gamma":0.2})"}) != 0);
}

TEST_CASE("simulate: reruns are byte-identical, seeds matter") {
  const std::vector<std::string> base = {
      "simulate", "--p_a", "0.8",     "--p_b",   "0.3",  "--x0",
      "0.4",      "--schedule", R"({"kind":"power","c":1,"alpha":1})",
      "--n_steps", "500",  "--seed",  "42",   "--format", "json"};
  std::string a, b;
  CHECK(run(base, &a) == 0);
  CHECK(run(base, &b) == 0);
  CHECK(a == b);

  auto other = base;
  other[base.size() - 3] = "43";  // --seed value
  std::string c;
  CHECK(run(other, &c) == 0);
  CHECK(a != c);

  // CSV carries header plus one row per thinned sample.
  std::string csv;
  CHECK(run({"simulate", "--p_a", "0.8", "--p_b", "0.3", "--x0", "0.4",
             "--n_steps", "500", "--seed", "42", "--thin", "100", "--format",
             "csv"},
            &csv) == 0);
  CHECK(csv.rfind("n,x\n0,", 0) == 0);
  CHECK(count_lines(csv) == 7);

  CHECK(run({"simulate", "--format", "yaml"}) != 0);
  CHECK(run({"frobnicate"}) != 0);
}

TEST_CASE("mc: config files feed flags, flags win, unknown keys refuse") {
  const std::string cfg = tmp_name("cfg");
  {
    std::ofstream f(cfg);
    f << R"({"p_a":0.6,"p_b":0.4,"x0":0.5,"n_steps":200,"n_paths":500,)"
      << R"("seed":7,"schedule":{"kind":"constant","gamma":0.1}})";
  }
  std::string text;
  CHECK(run({"mc", "--config", cfg}, &text) == 0);
  const json j = json::parse(text);
  CHECK(j["n_paths"].get<std::uint64_t>() == 500);
  CHECK(j["params"]["p_a"].get<double>() == 0.6);
  const auto& c = j["counts"];
  CHECK(c["at_zero"].get<std::uint64_t>() + c["at_one"].get<std::uint64_t>() +
            c["interior"].get<std::uint64_t>() +
            c["undecided"].get<std::uint64_t>() ==
        500);

  // Explicit flags override config values.
  std::string text2;
  CHECK(run({"mc", "--config", cfg, "--n_paths", "300"}, &text2) == 0);
  CHECK(json::parse(text2)["n_paths"].get<std::uint64_t>() == 300);

  const std::string bad = tmp_name("badcfg");
  {
    std::ofstream f(bad);
    f << R"({"n_paths": 10, "bogus": 1})";
  }
  CHECK(run({"mc", "--config", bad}) != 0);
  CHECK(run({"mc", "--config", "/nonexistent/path.json"}) != 0);
  ::unlink(cfg.c_str());
  ::unlink(bad.c_str());
}

TEST_CASE("mc: report bytes do not depend on the worker count") {
  const std::vector<std::string> common = {
      "mc",   "--p_a",     "0.6", "--p_b",    "0.4", "--x0",  "0.5",
      "--n_steps", "300", "--n_paths", "1000", "--seed", "5"};
  auto w1 = common, w3 = common;
  w1.insert(w1.end(), {"--workers", "1"});
  w3.insert(w3.end(), {"--workers", "3"});
  std::string a, b;
  CHECK(run(w1, &a) == 0);
  CHECK(run(w3, &b) == 0);
  CHECK(a == b);
}

TEST_CASE("seed can come from the environment") {
  const std::vector<std::string> args = {"simulate", "--n_steps", "50",
                                         "--format", "json"};
  ::setenv("LRI_SEED", "123", 1);
  std::string from_env;
  CHECK(run(args, &from_env) == 0);
  ::unsetenv("LRI_SEED");

  auto seeded = args;
  seeded.insert(seeded.end(), {"--seed", "123"});
  std::string from_flag;
  CHECK(run(seeded, &from_flag) == 0);
  CHECK(from_env == from_flag);

  ::setenv("LRI_SEED", "12abc", 1);
  CHECK(run(args) != 0);
  ::unsetenv("LRI_SEED");
}

TEST_CASE("classify: prints one verdict word") {
  std::string text;
  CHECK(run({"classify", "--schedule", R"({"kind":"power","c":1,"alpha":1})",
             "--p_b", "0.5"},
            &text) == 0);
  CHECK(text == "Infallible\n");
  CHECK(run({"classify", "--schedule", R"({"kind":"constant","gamma":0.1})",
             "--p_b", "0.5"},
            &text) == 0);
  CHECK(text == "Fallible\n");
  CHECK(run({"classify", "--schedule", R"({"kind":"power","c":3,"alpha":1})",
             "--p_b", "0.5"},
            &text) == 0);
  CHECK(text == "Fallible\n");
}

TEST_CASE("polya: urn runs match the always-rewarding pair") {
  const std::string csv_path = tmp_name("urn");
  std::string text;
  CHECK(run({"polya", "--r", "2", "--b", "3", "--n_steps", "500", "--seed", "9",
             "--out", csv_path},
            &text) == 0);
  const json j = json::parse(text);
  CHECK(j["bandit_max_diff"].get<double>() <= 1e-12);
  CHECK(j["x_final"].get<double>() > 0.0);
  CHECK(j["x_final"].get<double>() < 1.0);
  const std::string csv = slurp(csv_path);
  ::unlink(csv_path.c_str());
  CHECK(csv.rfind("n,beta,x\n", 0) == 0);
  CHECK(count_lines(csv) == 502);
}

TEST_CASE("solve: grid endpoints pinned, report summarizes the run") {
  const std::string csv_path = tmp_name("solve");
  std::string text;
  CHECK(run({"solve", "--gamma", "0.2", "--p_a", "0.7", "--p_b", "0.3",
             "--grid_n", "129", "--out", csv_path},
            &text) == 0);
  const json j = json::parse(text);
  CHECK(j["grid_points"].get<std::uint64_t>() == 129);
  CHECK(j["iterations"].get<std::uint64_t>() > 0);
  CHECK(j["residual"].get<double>() <= 1e-10);
  const std::string csv = slurp(csv_path);
  ::unlink(csv_path.c_str());
  CHECK(csv.rfind("x,u\n0,0\n", 0) == 0);
  CHECK(csv.find("\n1,1\n") != std::string::npos);
}

TEST_CASE("stop: certificate JSON round trips the fields") {
  std::string text;
  CHECK(run({"stop", "--p_a", "0.9", "--p_b", "0.1", "--x0", "0.5",
             "--epsilon", "0.5", "--horizon", "10000", "--seed", "3"},
            &text) == 0);
  const json j = json::parse(text);
  CHECK(j["epsilon"].get<double>() == 0.5);
  REQUIRE(!j["certificate"].is_null());
  const auto& c = j["certificate"];
  CHECK(c["bound"].get<double>() <= 0.5);
  CHECK(c["n"].get<std::uint64_t>() >= 1);
  CHECK((c["target"] == "A" || c["target"] == "B"));
  CHECK(c["tail_sq"].get<double>() > 0.0);

  CHECK(run({"stop", "--p_a", "0.9", "--p_b", "0.1", "--x0", "0.5",
             "--epsilon", "1e-12", "--horizon", "50", "--seed", "3"},
            &text) == 0);
  const json none = json::parse(text);
  CHECK(none["certificate"].is_null());
  CHECK(none["steps_run"].get<std::uint64_t>() == 50);
}

TEST_CASE("accept: per-criterion lines and exit status") {
  std::string text;
  CHECK(run({"accept", "--suite", "quick", "--criterion", "10"}, &text) == 0);
  CHECK(text.find("10 PASS") != std::string::npos);
  CHECK(text.find("1/1 criteria passed") != std::string::npos);
  CHECK(run({"accept", "--criterion", "99"}) != 0);
}
