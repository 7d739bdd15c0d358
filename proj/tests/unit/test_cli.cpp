#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "config.hpp"
#include "dgsmlab/report.hpp"

namespace fs = std::filesystem;
using dgsmlab::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_in_process(std::vector<std::string> args) {
  args.insert(args.begin(), "dgsm-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the real binary; returns the exit status and captured stderr.
Result run_binary(const std::string& args) {
  const auto err_path = fs::temp_directory_path() / "dgsmlab_cli_stderr.txt";
  const std::string cmd = std::string(DGSM_LAB_BIN) + " " + args + " 2>" + err_path.string();
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  std::ifstream e(err_path);
  std::stringstream es;
  es << e.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, es.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "dgsmlab_cli_tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

int status_lines(const std::string& err) {
  int n = 0;
  std::istringstream is(err);
  for (std::string line; std::getline(is, line);) n += line.rfind("status:", 0) == 0 ? 1 : 0;
  return n;
}

const std::string kSmallLinear = R"({
  "model": {"name": "linear", "coefficients": [1, 2]},
  "n_sobol": 500, "n_dgsm": 128, "replicates": 3, "seed": 5
})";

}  // namespace

TEST(Cli, AnalyzeWritesCsvToStdout) {
  const auto cfg = write_temp("small.json", kSmallLinear);
  const auto r = run_in_process({"analyze", "--config", cfg.string(), "--workers", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("input,S,S_sd,ST,ST_sd,nu,tau,C,upsilon\n", 0), 0u);
  EXPECT_EQ(status_lines(r.err), 1);
  EXPECT_EQ(r.err.rfind("status: ok", 0), 0u);
}

TEST(Cli, AnalyzeIsByteIdenticalForSameSeed) {
  const auto cfg = write_temp("small.json", kSmallLinear);
  const auto a = run_in_process({"analyze", cfg.string(), "--workers", "3"});
  const auto b = run_in_process({"analyze", cfg.string(), "--workers", "3"});
  EXPECT_EQ(a.out, b.out);
  const auto c = run_in_process({"analyze", cfg.string(), "--workers", "3", "--seed", "6"});
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto cfg = write_temp("fmt.json", R"({
    "model": "interaction", "n_sobol": 200, "n_dgsm": 64, "replicates": 2, "seed": 1,
    "format": "csv"})");
  const auto r = run_in_process({"--format", "json", "analyze", cfg.string(), "--seed", "77"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = dgsmlab::report_from_json(r.out);
  EXPECT_EQ(rep.seed, 77u);
  EXPECT_FALSE(rep.timestamp.empty());
}

TEST(Cli, OutputDirectory) {
  const auto dir = fs::temp_directory_path() / "dgsmlab_cli_out";
  fs::remove_all(dir);
  const auto cfg = write_temp("small.json", kSmallLinear);
  const auto r = run_in_process({"analyze", cfg.string(), "--output", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "linear.csv"));
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto mismatch = write_temp("mismatch.json", R"({
    "model": {"name": "linear", "coefficients": [1, 2]},
    "inputs": [{"family": "uniform", "a": 0, "b": 1}]})");
  auto r = run_in_process({"analyze", mismatch.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("kind=config"), std::string::npos);
  EXPECT_EQ(status_lines(r.err), 1);

  for (const std::string bad : {R"({"model": "nope"})", R"({"model": "interaction", "typo": 1})",
                                R"({"model": "interaction", "n_sobol": 0})", "not json",
                                R"({"model": "interaction", "inputs": [{"family": "normal", "mu": 0}, {"family": "uniform", "a": 0, "b": 1}]})",
                                R"({"model": "interaction", "inputs": [{"family": "normal", "mu": 0, "sigma": -1}, {"family": "uniform", "a": 0, "b": 1}]})"}) {
    const auto p = write_temp("bad.json", bad);
    r = run_in_process({"analyze", p.string()});
    EXPECT_EQ(r.code, 2) << bad << "\n" << r.err;
    EXPECT_EQ(status_lines(r.err), 1);
  }
  r = run_in_process({"analyze", "/nonexistent/config.json"});
  EXPECT_EQ(r.code, 2);
  r = run_in_process({"analyze"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, EvaluationFailureExitsThree) {
  const auto cfg = write_temp("fail.json", std::string(R"({
    "model": {"name": "external", "command": ")") + STUB_DIR + R"(/stub_failing_model", "dimension": 2},
    "n_sobol": 10, "n_dgsm": 4, "replicates": 1})");
  const auto r = run_in_process({"analyze", cfg.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("solver diverged"), std::string::npos) << r.err;
  EXPECT_EQ(status_lines(r.err), 1);
}

TEST(Cli, ExternalConfigExampleRuns) {
  const auto r = run_in_process({"analyze", std::string(CONFIG_DIR) + "/external.json", "--workers", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\nQ,"), std::string::npos);
}

TEST(Cli, ExampleConfigsParse) {
  for (const auto& entry : fs::directory_iterator(CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW({
      const auto cfg = dgsmlab::cli::load_config(entry.path());
      dgsmlab::cli::resolve(cfg);
    }) << entry.path();
  }
}

TEST(Cli, CheegerCommand) {
  auto r = run_in_process({"cheeger", "exponential", "lambda=4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("C1=0.25 C=0.25"), std::string::npos) << r.out;

  r = run_in_process({"cheeger", "normal", "mu=0.5", "sigma=0.1", "--both"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("C=0.01 method=sharp"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("numeric cheeger: C1=0.1253314137 C=0.06283185307"), std::string::npos) << r.out;

  r = run_in_process({"cheeger", "uniform", "a=0", "b=1"});
  EXPECT_NE(r.out.find("C=0.1013211836"), std::string::npos) << r.out;

  r = run_in_process({"cheeger", "gamma", "alpha=0.5", "beta=1", "--numeric"});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(status_lines(r.err), 1);

  r = run_in_process({"cheeger", "beta", "alpha=2", "beta=2", "--analytic"});
  EXPECT_EQ(r.code, 4);

  r = run_in_process({"cheeger", "normal", "mu=0"});
  EXPECT_EQ(r.code, 2);
  r = run_in_process({"cheeger", "normal", "mu=0", "sigma=1", "--numeric", "--analytic"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, BenchUnknownTable) {
  const auto r = run_in_process({"bench", "table9"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(status_lines(r.err), 1);
}

TEST(Cli, BenchMorrisDesk) {
  const auto r = run_in_process({"bench", "morris", "--budget", "0.1", "--workers", "2"});
  EXPECT_TRUE(r.code == 0 || r.code == 1);
  EXPECT_NE(r.out.find("PASS  C X5"), std::string::npos) << r.out;
  EXPECT_EQ(status_lines(r.err), 1);
}

TEST(Cli, UsageErrors) {
  auto r = run_in_process({});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(status_lines(r.err), 1);
  r = run_in_process({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  r = run_in_process({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(status_lines(r.err), 1);
}

TEST(CliBinary, ExitCodesAndStatusLine) {
  auto r = run_binary("bench nope");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(status_lines(r.err), 1);
  r = run_binary("cheeger gamma alpha=0.5 beta=1 --numeric");
  EXPECT_EQ(r.code, 4);
  r = run_binary("cheeger weibull k=2 lambda=0.5");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("C=0.3606737602"), std::string::npos);
}

TEST(CliBinary, WorkersEnvironmentFallback) {
  const auto cfg = write_temp("small.json", kSmallLinear);
  const auto a = run_binary("analyze " + cfg.string());
  setenv("DGSM_LAB_WORKERS", "3", 1);
  const auto b = run_binary("analyze " + cfg.string());
  setenv("DGSM_LAB_WORKERS", "zero", 1);
  const auto c = run_binary("analyze " + cfg.string());
  unsetenv("DGSM_LAB_WORKERS");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(c.code, 2);
}
