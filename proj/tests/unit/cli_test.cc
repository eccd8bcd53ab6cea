// Copyright 2026 The DivBS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "divbs/io.h"
#include "json.hpp"

namespace divbs::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Invocation {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Invocation Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("divbs_cli_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    io::WriteFileAtomic(dir_ / "hand.csv", "1,0\n1,0\n0,1\n");
    ::unsetenv("DIVBS_EPS");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    ::unsetenv("DIVBS_EPS");
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SelectHandExample) {
  for (const char* strategy : {"greedy", "divbs"}) {
    const Invocation r = Invoke({"select", "--features", Path("hand.csv"), "--strategy", strategy,
                          "--budget", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = r.report();
    EXPECT_EQ(j["indices"], json({0, 2}));
    EXPECT_EQ(j["step_scores"], json({2.0, 1.0}));
    EXPECT_EQ(j["config_echo"]["strategy"], strategy);
  }
}

TEST_F(CliTest, SelectBudgetRatio) {
  io::WriteFeatures(GaussianFeatures(1470, 4, 0), Path("g.bin"));
  const Invocation r = Invoke({"select", "--features", Path("g.bin"), "--strategy", "uniform",
                        "--budget-ratio", "0.1", "--out", Path("sel.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(io::ReadFileBytes(Path("sel.json")));
  EXPECT_EQ(j["indices"].size(), 147u);
  EXPECT_EQ(j["config_echo"]["budget"], 147);
}

TEST_F(CliTest, SelectUsageErrors) {
  const std::string f = Path("hand.csv");
  EXPECT_EQ(Invoke({"select", "--features", f, "--strategy", "fancy", "--budget", "1"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"select", "--features", f, "--strategy", "top_score", "--budget", "1"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"select", "--features", f, "--strategy", "divbs", "--budget", "1",
                    "--budget-ratio", "0.5"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"select", "--features", f, "--strategy", "divbs"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"select", "--strategy", "divbs", "--budget", "1"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({}).code, kExitUsage);
}

TEST_F(CliTest, SelectDataErrors) {
  const Invocation big = Invoke({"select", "--features", Path("hand.csv"), "--strategy", "divbs",
                          "--budget", "4"});
  EXPECT_EQ(big.code, kExitData);
  EXPECT_FALSE(big.err.empty());
  EXPECT_EQ(Invoke({"select", "--features", Path("missing.bin"), "--strategy", "divbs",
                    "--budget", "1"})
                .code,
            kExitData);
  io::WriteFileAtomic(Path("bad.csv"), "1,2\n3\n");
  const Invocation bad = Invoke({"select", "--features", Path("bad.csv"), "--strategy", "divbs",
                          "--budget", "1"});
  EXPECT_EQ(bad.code, kExitData);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
}

TEST_F(CliTest, SelectTopScoreWithScores) {
  io::WriteFileAtomic(Path("s.txt"), "3\n1\n2\n");
  const Invocation r = Invoke({"select", "--features", Path("hand.csv"), "--strategy", "top_score",
                        "--budget", "2", "--scores", Path("s.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.report()["indices"], json({0, 2}));
}

TEST_F(CliTest, EpsPrecedence) {
  // Rows (1,0) and (1,1e-3): the second is dependent only under a loose eps.
  io::WriteFileAtomic(Path("near.csv"), "1,0\n1,0.001\n");
  const std::vector<std::string> base{"select", "--features", Path("near.csv"), "--strategy",
                                      "divbs", "--budget", "2", "--pad", "none"};
  EXPECT_EQ(Invoke(base).report()["n_selected"], 2);
  ::setenv("DIVBS_EPS", "0.01", 1);
  const Invocation env = Invoke(base);
  EXPECT_EQ(env.report()["n_selected"], 1);
  EXPECT_EQ(env.report()["config_echo"]["eps"], 0.01);
  std::vector<std::string> flag = base;
  flag.insert(flag.end(), {"--eps", "1e-12"});
  EXPECT_EQ(Invoke(flag).report()["n_selected"], 2);
  ::setenv("DIVBS_EPS", "nonsense", 1);
  EXPECT_EQ(Invoke(base).code, kExitData);
}

TEST_F(CliTest, OracleCheckDefaultPasses) {
  const Invocation r = Invoke({"oracle-check", "--trials", "50"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = r.report();
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["greedy_ratios"].size(), 50u);
  EXPECT_GE(j["greedy_ratio"]["min"].get<double>(), j["bound"].get<double>() - 1e-9);
  EXPECT_EQ(Invoke({"oracle-check", "--trials", "50"}).out, r.out);
}

TEST_F(CliTest, OracleCheckBudgetOneIsExact) {
  const Invocation r = Invoke({"oracle-check", "--budget", "1", "--trials", "100", "--seed", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const json& v : r.report()["greedy_ratios"]) EXPECT_EQ(v.get<double>(), 1.0);
  for (const json& v : r.report()["divbs_ratios"]) EXPECT_EQ(v.get<double>(), 1.0);
}

TEST_F(CliTest, OracleCheckErrors) {
  EXPECT_EQ(Invoke({"oracle-check", "--n", "30", "--budget", "10", "--cap", "1000"}).code,
            kExitData);
  EXPECT_EQ(Invoke({"oracle-check", "--n", "3", "--budget", "4"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"oracle-check", "--trials", "0"}).code, kExitUsage);
}

TEST_F(CliTest, Metrics) {
  io::WriteFileAtomic(Path("sel.json"), R"({"indices": [0, 2]})");
  const Invocation r = Invoke({"metrics", "--features", Path("hand.csv"), "--selection", Path("sel.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.report()["knn_mean_cos_dist"]["1"], 1.0);
  EXPECT_EQ(r.report()["selection_rank"], 2);
  EXPECT_EQ(Invoke({"metrics", "--features", Path("hand.csv"), "--selection", Path("sel.json"),
                    "--ks", "2"})
                .code,
            kExitData);
  EXPECT_EQ(Invoke({"metrics", "--features", Path("hand.csv"), "--selection", Path("sel.json"),
                    "--ks", "a,b"})
                .code,
            kExitUsage);
}

TEST_F(CliTest, ToyIsReproducible) {
  const std::vector<std::string> args{"toy", "--strategy", "divbs", "--epochs", "3",
                                      "--seed", "2", "--scatter-csv", Path("pts.csv"),
                                      "--scatter-svg", Path("pts.svg")};
  const Invocation a = Invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const Invocation b = Invoke(args);
  EXPECT_EQ(a.out, b.out);
  const json j = a.report();
  EXPECT_EQ(j["budget"], 147);
  EXPECT_EQ(j["epoch_accuracy"].size(), 3u);
  EXPECT_TRUE(fs::exists(Path("pts.csv")));
  EXPECT_TRUE(fs::exists(Path("pts.svg")));
  EXPECT_EQ(Invoke({"toy", "--strategy", "nope"}).code, kExitUsage);
}

TEST_F(CliTest, Bench) {
  const Invocation r = Invoke({"bench", "--n", "40", "--d", "16", "--budget", "6", "--trials", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = r.report();
  EXPECT_GT(j["greedy"]["mean_seconds"].get<double>(), 0.0);
  EXPECT_GT(j["speedup"].get<double>(), 0.0);
}

}  // namespace
}  // namespace divbs::cli
