// Copyright 2026 The primesquare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "primesquare/cli.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace primesquare {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("primesquare_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(const std::string& sub) {
    RunConfig c;
    c.subcommand = sub;
    c.out = dir_;
    c.threads = 2;
    return c;
  }
  int run(const RunConfig& c) {
    std::ostringstream log;
    return dispatch(c, log);
  }
  std::string read(const std::string& name) {
    std::ifstream f(dir_ / name);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  nlohmann::json manifest() { return nlohmann::json::parse(read("manifest.json")); }
  std::vector<std::string> lines(const std::string& name) {
    std::vector<std::string> out;
    std::istringstream in(read(name));
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  fs::path dir_;
};

TEST_F(CliTest, ConstructFive) {
  auto c = config("construct");
  c.q0 = 5;
  EXPECT_EQ(run(c), kExitOk);
  const auto rec = nlohmann::json::parse(read("solution.json"));
  EXPECT_EQ(rec["t"], 12);
  EXPECT_EQ(rec["u"], 42);
  EXPECT_EQ(rec["magic_constant"], 177);
  const auto csv = lines("square.csv");
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], "schema_version,q0,t,u,square");
  EXPECT_EQ(csv[1], "1,5,12,42,\"71,5,101,89,59,29,17,113,47\"");
  const auto m = manifest();
  EXPECT_EQ(m["exit_code"], 0);
  EXPECT_EQ(m["config"]["q0"], 5);
  EXPECT_TRUE(m.contains("git_describe"));
  EXPECT_FALSE(fs::exists(dir_ / "square.csv.tmp"));
}

TEST_F(CliTest, ConstructSmallObstruction) {
  for (std::int64_t q0 : {2, 3}) {
    auto c = config("construct");
    c.q0 = q0;
    EXPECT_EQ(run(c), kExitSmallObstruction);
    EXPECT_EQ(manifest()["exit_code"], kExitSmallObstruction);
    EXPECT_EQ(manifest()["error"]["kind"], "small-obstruction");
  }
}

TEST_F(CliTest, ConstructExhausted) {
  auto c = config("construct");
  c.budget = 5;
  EXPECT_EQ(run(c), kExitExhausted);
  EXPECT_EQ(manifest()["derived"]["candidates_tested"], 5);
}

TEST_F(CliTest, ScanHundred) {
  auto c = config("scan");
  c.max = 100;
  EXPECT_EQ(run(c), kExitOk);
  const auto rows = lines("scan.csv");
  ASSERT_EQ(rows.size(), 24u);  // header + primes 5..97
  EXPECT_EQ(rows[0], "schema_version,q0,found,t,u,magic_constant,candidates_tested,verified");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].substr(0, 2), "1,");
    EXPECT_NE(rows[i].find(",1,"), std::string::npos);
    EXPECT_EQ(rows[i].back(), '1');
  }
  EXPECT_EQ(manifest()["derived"]["found"], 23);
}

TEST_F(CliTest, VerifyCodes) {
  auto c = config("verify");
  c.q0 = 5;
  c.square = "71,5,101,89,59,29,17,113,47";
  EXPECT_EQ(run(c), kExitOk);
  EXPECT_TRUE(nlohmann::json::parse(read("verify.json"))["passed"]);
  c.square = "2,7,6,9,5,1,4,3,8";
  EXPECT_EQ(run(c), kExitCheckFailed);
  c.square = "1,2,3";
  EXPECT_EQ(run(c), kExitInvalidConfig);
  c.square = "";
  EXPECT_EQ(run(c), kExitInvalidConfig);
}

TEST_F(CliTest, InvalidConfigStillWritesManifest) {
  auto c = config("mass");
  c.shrink = 0.9;
  c.support = 0.5;
  EXPECT_EQ(run(c), kExitInvalidConfig);
  EXPECT_EQ(manifest()["exit_code"], 1);
  c = config("nonsense");
  EXPECT_EQ(run(c), kExitInvalidConfig);
  c = config("mass");
  c.weight = "psi";
  EXPECT_EQ(run(c), kExitInvalidConfig);
  c = config("construct");
  c.strategy = "random";
  EXPECT_EQ(run(c), kExitInvalidConfig);
}

TEST_F(CliTest, ResourceBudget) {
  auto c = config("bdh");
  c.X = std::int64_t{1} << 31;
  c.Q = 10;
  EXPECT_EQ(run(c), kExitResource);
}

TEST_F(CliTest, LocalTable) {
  auto c = config("local");
  c.max = 13;
  EXPECT_EQ(run(c), kExitOk);
  const auto rows = lines("local.csv");
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0],
            "schema_version,p,core_count,g1_num,g1_den,g2_num,g2_den,gdelta_num,gdelta_den,sigma_p,beta_p");
  EXPECT_EQ(rows[4].substr(0, 19), "1,7,22,3,22,3,22,3,");
}

TEST_F(CliTest, StatsSubcommandsAreReproducible) {
  struct Case {
    const char* sub;
    std::vector<std::string> files;
  };
  const Case cases[] = {
      {"mass", {"mass.csv"}},
      {"joint", {"joint.csv"}},
      {"restricted", {"restricted.csv"}},
      {"discrepancy", {"discrepancy.csv", "discrepancy_summary.csv"}},
      {"bdh", {"bdh.csv", "bdh_summary.csv"}},
      {"diagcheck", {"diagcheck.csv"}},
      {"region", {"region.csv"}},
  };
  for (const auto& k : cases) {
    auto c = config(k.sub);
    c.X = std::string(k.sub) == "bdh" ? 5000 : 192;
    c.d = 11;
    c.Q = 30;
    ASSERT_EQ(run(c), kExitOk) << k.sub;
    std::vector<std::string> first;
    for (const auto& f : k.files) {
      first.push_back(read(f));
      EXPECT_EQ(first.back().rfind("schema_version,", 0), 0u) << f;
    }
    const auto m = manifest();
    if (std::string(k.sub) != "bdh" && std::string(k.sub) != "region") {
      EXPECT_EQ(m["derived"]["W"], 42);
      EXPECT_EQ(m["derived"]["a_W"], 0);
    }
    c.threads = 1;
    ASSERT_EQ(run(c), kExitOk) << k.sub;
    for (std::size_t i = 0; i < k.files.size(); ++i) EXPECT_EQ(read(k.files[i]), first[i]) << k.files[i];
  }
}

TEST_F(CliTest, ArgvParsing) {
  const std::string out = dir_.string();
  const char* argv[] = {"primesquare", "construct", "--q0", "7", "--strategy", "wtrick", "--out", out.c_str()};
  EXPECT_EQ(run_cli(8, const_cast<char**>(argv)), kExitOk);
  EXPECT_EQ(manifest()["config"]["strategy"], "wtrick");
  const char* bad[] = {"primesquare", "construct", "--q0", "seven"};
  EXPECT_EQ(run_cli(4, const_cast<char**>(bad)), kExitInvalidConfig);
  const char* none[] = {"primesquare"};
  EXPECT_EQ(run_cli(1, const_cast<char**>(none)), kExitInvalidConfig);
  const char* strict[] = {"primesquare", "construct", "--region-strict", "--out", out.c_str()};
  EXPECT_EQ(run_cli(5, const_cast<char**>(strict)), kExitOk);
  EXPECT_EQ(manifest()["config"]["strategy"], "region");
}

TEST_F(CliTest, WriteAtomic) {
  fs::create_directories(dir_);
  write_atomic(dir_ / "a.txt", "hello\n");
  EXPECT_EQ(read("a.txt"), "hello\n");
  write_atomic(dir_ / "a.txt", "bye\n");
  EXPECT_EQ(read("a.txt"), "bye\n");
}

}  // namespace
}  // namespace primesquare
