#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "sensorplace/instance.hpp"

namespace sensorplace {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data_file(const std::string& name) {
  return std::string(SENSORPLACE_DATA_DIR) + "/" + name;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sensorplace_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                 ->current_test_info()
                                                 ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, PlaceReportsExampleSensor) {
  const Outcome r = invoke({"place", data_file("example1.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["placement"], "0100");
  EXPECT_EQ(j["nodes"], json::array({1}));
  EXPECT_EQ(j["zeta"], 0);
  EXPECT_DOUBLE_EQ(j["trace_priori"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["trace_posteriori"].get<double>(), 0.0);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, AttackOnExplicitPlacement) {
  // Example dynamics with a relaxed attack budget written to a temp file.
  ProblemInstance inst = load_instance(data_file("example1.json"));
  inst.costs.attack_budget = 2;
  save_instance(inst, path("inst.json"));
  const Outcome r = invoke({"attack", path("inst.json"), "--placement", "1101"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["attack"], "1100");
  EXPECT_EQ(j["survivors"], "0001");
  EXPECT_NEAR(j["trace_priori"].get<double>(), 9.4438, 1e-9);
}

TEST_F(CliTest, VerifyAgreesOnGeneratedInstances) {
  for (int seed = 1; seed <= 20; ++seed) {
    const std::string file = path("gen" + std::to_string(seed) + ".json");
    const Outcome g = invoke({"gen", "--kind", "stochastic", "--nodes", "8",
                              "--extra-edges", "4", "--seed", std::to_string(seed),
                              "--max-budget", "12", "--out", file});
    ASSERT_EQ(g.code, cli::kOk) << g.err;
    const Outcome v = invoke({"verify", file});
    EXPECT_EQ(v.code, cli::kOk) << "seed " << seed << "\n" << v.out << v.err;
    EXPECT_TRUE(json::parse(v.out)["agree"].get<bool>());
  }
}

TEST_F(CliTest, ReduceSubsetSumWritesPathInstance) {
  const Outcome r = invoke({"reduce-subset-sum", "--sizes", "3,5", "--target", "7",
                            "--out", path("red.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const ProblemInstance inst = load_instance(path("red.json"));
  EXPECT_EQ(inst.system.size(), 5);
  EXPECT_EQ(inst.costs.placement_budget, 7);
  EXPECT_EQ(inst.costs.attack_budget, 6);
  EXPECT_EQ(inst.costs.placement_costs, (std::vector<std::int64_t>{3, 5, 1, 2, 4}));
}

TEST_F(CliTest, IdenticalArgumentsGiveIdenticalBytes) {
  const std::vector<std::string> args = {"gen", "--kind", "normal", "--nodes", "6",
                                         "--edges", "10", "--seed", "9",
                                         "--out", path("a.json")};
  ASSERT_EQ(invoke(args).code, cli::kOk);
  std::vector<std::string> again = args;
  again.back() = path("b.json");
  ASSERT_EQ(invoke(again).code, cli::kOk);
  std::ifstream a(path("a.json"));
  std::ifstream b(path("b.json"));
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());

  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"place", path("a.json")},
           {"resilient", path("a.json")},
           {"verify", path("a.json")},
           {"bound", path("a.json"), "--placement", "111111", "--sigma-v2", "0.1"}}) {
    const Outcome first = invoke(cmd);
    const Outcome second = invoke(cmd);
    EXPECT_EQ(first.code, second.code);
    EXPECT_EQ(first.out, second.out) << cmd.front();
    EXPECT_EQ(first.err, second.err);
  }
}

TEST_F(CliTest, ExperimentCsvIsDeterministicAcrossJobs) {
  const std::vector<std::string> base = {"experiment", "--problem", "gkfsp",
                                         "--realizations", "3", "--sigma-v2",
                                         "0.01:0.5:3", "--nodes", "6", "--edges", "9",
                                         "--seed", "4"};
  std::vector<std::string> one = base;
  one.insert(one.end(), {"--jobs", "1"});
  std::vector<std::string> two = base;
  two.insert(two.end(), {"--jobs", "2"});
  const Outcome a = invoke(one);
  const Outcome b = invoke(two);
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  // Header plus 3 realizations times 3 noise levels.
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 10);
  EXPECT_EQ(a.out.rfind("seed,problem,sigma_v2,opt,alg,bound,subopt", 0), 0u);
}

TEST_F(CliTest, EveryJsonReportCarriesTolerances) {
  ASSERT_EQ(invoke({"gen", "--nodes", "5", "--seed", "2", "--out", path("g.json")}).code,
            cli::kOk);
  const std::vector<std::vector<std::string>> commands = {
      {"place", path("g.json")},
      {"attack", path("g.json")},
      {"resilient", path("g.json")},
      {"verify", path("g.json"), "--problem", "gkfsa"},
      {"bound", path("g.json"), "--placement", "11111"},
      {"gen", "--nodes", "5", "--out", path("h.json")},
      {"reduce-subset-sum", "--sizes", "1,2", "--target", "3", "--out", path("r.json")},
      {"experiment", "--problem", "rgkfsp", "--realizations", "1", "--nodes", "5",
       "--edges", "8", "--out", path("e.csv")},
  };
  for (const auto& cmd : commands) {
    const Outcome r = invoke(cmd);
    ASSERT_EQ(r.code, cli::kOk) << cmd.front() << ": " << r.err;
    const json j = json::parse(r.out);
    ASSERT_TRUE(j.contains("tolerances")) << cmd.front();
    EXPECT_TRUE(j["tolerances"].contains("conv_tol"));
    EXPECT_TRUE(j["tolerances"].contains("rank_tol"));
  }
}

TEST_F(CliTest, GlobalFlagsReachTheReport) {
  const Outcome r = invoke({"--conv-tol", "1e-9", "place", data_file("example1.json"),
                            "--cap", "8"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["tolerances"]["conv_tol"].get<double>(), 1e-9);
  EXPECT_EQ(j["tolerances"]["brute_force_cap"], 8);
}

TEST_F(CliTest, ConfigFileSuppliesDefaultsAndFlagsOverride) {
  {
    std::ofstream cfg(path("cfg.toml"));
    cfg << "conv-tol = 1e-7\nverify-tol = 1e-6\n";
  }
  const Outcome r = invoke({"--config", path("cfg.toml"), "--verify-tol", "1e-5", "place",
                            data_file("example1.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["tolerances"]["conv_tol"].get<double>(), 1e-7);
  EXPECT_DOUBLE_EQ(j["tolerances"]["verify_tol"].get<double>(), 1e-5);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(invoke({}).code, cli::kUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"place"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"place", path("missing.json")}).code, cli::kUsage);
  EXPECT_EQ(invoke({"attack", data_file("example1.json"), "--placement", "10"}).code,
            cli::kUsage);
  EXPECT_EQ(invoke({"experiment", "--problem", "nope"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"experiment", "--problem", "gkfsp", "--nodes", "20"}).code,
            cli::kUsage);
  {
    std::ofstream bad(path("bad.json"));
    bad << "{\"A\": [[1]], ";
  }
  const Outcome parse = invoke({"place", path("bad.json")});
  EXPECT_EQ(parse.code, cli::kUsage);
  EXPECT_NE(parse.err.find("error"), std::string::npos);
}

TEST_F(CliTest, HelpExitsZero) {
  const Outcome r = invoke({"--help"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("resilient"), std::string::npos);
}

TEST_F(CliTest, UnaffordablePlacementExitsTwo) {
  ProblemInstance inst = load_instance(data_file("example1.json"));
  inst.costs.placement_costs = {5, 5, 5, 5};
  inst.costs.placement_budget = 4;
  save_instance(inst, path("poor.json"));
  const Outcome r = invoke({"place", path("poor.json")});
  EXPECT_EQ(r.code, cli::kInfeasible);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
}

TEST_F(CliTest, UnstableClosedLoopExitsFour) {
  ProblemInstance inst;
  inst.system.dynamics = (Eigen::MatrixXd(2, 2) << 0.5, 1.0, 1.0, 1.5).finished();
  inst.system.input_node = 0;
  inst.system.input_variance = 1.0;
  inst.system.sensor_noise = 0.1 * Eigen::MatrixXd::Identity(2, 2);
  inst.costs = CostModel::uniform(2, 1, 0);
  save_instance(inst, path("unstable.json"));
  const Outcome r = invoke({"bound", path("unstable.json"), "--placement", "10"});
  EXPECT_EQ(r.code, cli::kNumerical);
}

}  // namespace
}  // namespace sensorplace
