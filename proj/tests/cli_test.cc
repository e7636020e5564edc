// Copyright 2026 The Trustmesh Authors
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

#include "trustmesh/cli.h"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <fstream>
#include <sstream>

#include "test_util.h"
#include "trustmesh/config.h"
#include "trustmesh/integrator.h"

namespace trustmesh {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "trustctl");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_ = dir_.path() / "engine.json";
    std::ofstream(config_) << default_engine_config().to_json().dump();
    repo_ = (dir_.path() / "repo").string();
    ASSERT_EQ(run({"init", "--config", config_.string(), "--repo", repo_}).code, 0);
  }

  CliResult cmd(std::vector<std::string> args) {
    args.insert(args.end(), {"--config", config_.string(), "--repo", repo_});
    return run(std::move(args));
  }

  std::string enroll(const std::string& gov_id) {
    auto r = cmd({"register", "--tier", "standard", "--attrs",
                  json{{"email", {{"value", gov_id + "@x"}, {"verified", true}}},
                       {"gov_id", {{"value", gov_id}, {"verified", true}}}}
                      .dump()});
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out).at("principal");
  }

  testing::TempDir dir_;
  fs::path config_;
  std::string repo_;
};

TEST_F(CliTest, UnknownSubjectIsDomainError) {
  auto a = enroll("A");
  auto r = cmd({"opinion", "--viewer", a, "--subject", "p999999", "--mode", "dtc"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(r.err).at("error"), "UnknownPrincipal");
}

TEST_F(CliTest, AtcAndDtcPrintTheSameOpinion) {
  auto a = enroll("A");
  auto b = enroll("B");
  auto tx = json::parse(cmd({"tx", "--buyer", a, "--seller", b, "--cost", "40", "--scope",
                             "books", "--promised", "3", "--actual", "5"})
                            .out)
                .at("tx_id")
                .get<std::string>();
  ASSERT_EQ(cmd({"rate", "--rater", a, "--ratee", b, "--tx", tx, "--value", "0.6"}).code, 0);
  auto atc = cmd({"opinion", "--viewer", a, "--subject", b, "--mode", "atc"});
  auto dtc = cmd({"opinion", "--viewer", a, "--subject", b, "--mode", "dtc"});
  EXPECT_EQ(atc.code, 0);
  EXPECT_EQ(atc.out, dtc.out);
  EXPECT_TRUE(fs::exists(fs::path(repo_) / kAtcCacheFile));
  EXPECT_EQ(cmd({"opinion", "--viewer", a, "--subject", b, "--mode", "atc"}).out, dtc.out);
}

// The CLI prints what the library computes for the same inputs.
TEST_F(CliTest, OutputMatchesLibrary) {
  auto a = enroll("A");
  auto b = enroll("B");
  auto c = enroll("C");
  std::vector<std::tuple<std::string, std::string, std::string, double>> trades = {
      {a, b, "120.00", 0.9}, {c, b, "15.25", 0.3}, {b, a, "7.00", 1.0}};
  for (const auto& [buyer, seller, cost, value] : trades) {
    auto tx = json::parse(cmd({"tx", "--buyer", buyer, "--seller", seller, "--cost", cost,
                               "--scope", "home", "--promised", "4", "--actual", "6"})
                              .out)
                  .at("tx_id")
                  .get<std::string>();
    ASSERT_EQ(cmd({"rate", "--rater", buyer, "--ratee", seller, "--tx", tx, "--value",
                   std::to_string(value)})
                  .code,
              0);
  }
  auto printed = cmd({"opinion", "--viewer", a, "--subject", b, "--scope", "home", "--mode", "dtc"});
  ASSERT_EQ(printed.code, 0) << printed.err;

  auto repo = Repository::open(repo_);
  auto config = default_engine_config();
  auto expected = trust_opinion(*repo->snapshot(), PrincipalId(a), PrincipalId(b),
                                QueryContext{"home"}, config.engine_params());
  EXPECT_EQ(printed.out, opinion_to_json(expected).dump() + "\n");
}

TEST_F(CliTest, ReplayVerify) {
  auto a = enroll("A");
  enroll("B");
  EXPECT_EQ(run({"replay", "--repo", repo_, "--verify"}).code, 0);

  std::ofstream(fs::path(repo_) / Repository::kStateFile, std::ios::app) << " ";
  auto mismatch = run({"replay", "--repo", repo_, "--verify"});
  EXPECT_EQ(mismatch.code, 1);
  EXPECT_EQ(json::parse(mismatch.err).at("error"), "ReplayMismatch");
}

TEST_F(CliTest, CorruptLogIsReported) {
  enroll("A");
  auto log = slurp(fs::path(repo_) / Repository::kLogFile);
  // Drop the first event: the log now starts at seq 2.
  std::ofstream(fs::path(repo_) / Repository::kLogFile, std::ios::trunc)
      << log.substr(log.find('\n') + 1);
  auto r = run({"replay", "--repo", repo_, "--verify"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.err).at("error"), "CorruptLog");
}

TEST_F(CliTest, DomainErrorsExitOne) {
  auto a = enroll("A");
  auto b = enroll("B");
  auto c = enroll("C");
  auto tx = json::parse(cmd({"tx", "--buyer", a, "--seller", b, "--cost", "1", "--scope",
                             "books", "--promised", "1", "--actual", "1"})
                            .out)
                .at("tx_id")
                .get<std::string>();
  auto not_party = cmd({"rate", "--rater", c, "--ratee", b, "--tx", tx, "--value", "0"});
  EXPECT_EQ(not_party.code, 1);
  EXPECT_EQ(json::parse(not_party.err).at("error"), "NotAParty");
  auto disclosure = cmd({"register", "--tier", "standard", "--attrs", R"({"ssn":"1"})"});
  EXPECT_EQ(disclosure.code, 1);
  EXPECT_EQ(json::parse(disclosure.err).at("error"), "DisclosureViolation");
  auto self = cmd({"opinion", "--viewer", a, "--subject", a, "--mode", "dtc"});
  EXPECT_EQ(json::parse(self.err).at("error"), "SelfOpinion");
}

TEST_F(CliTest, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(cmd({"opinion", "--viewer", "p1"}).code, 2);
  EXPECT_EQ(cmd({"opinion", "--viewer", "p1", "--subject", "p2", "--mode", "fast"}).code, 2);
  EXPECT_EQ(run({"register", "--repo", repo_, "--tier", "standard", "--attrs", "{}"}).code, 2);

  auto bad = dir_.path() / "bad.json";
  auto j = default_engine_config().to_json();
  j["integration"]["alpha"] = 0.9;
  std::ofstream(bad) << j.dump();
  auto r = run({"init", "--config", bad.string(), "--repo", (dir_.path() / "r2").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err).at("error"), "InvalidConfig");
  EXPECT_FALSE(fs::exists(dir_.path() / "r2"));
}

TEST(CliSimulateTest, SameSeedGivesIdenticalFiles) {
  testing::TempDir dir;
  auto scenario = dir.path() / "scenario.json";
  std::ofstream(scenario) << R"({"seed": 4, "ticks": 30, "agents": [
      {"role": "buyer", "count": 6}, {"role": "seller", "count": 3, "honesty": 0.9},
      {"role": "seller", "count": 1, "honesty": 0.2}]})";
  for (const char* out : {"one", "two"}) {
    auto r = run({"simulate", "--scenario", scenario.string(), "--out-dir",
                  (dir.path() / out).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"events.jsonl", "state.json", "metrics.json", "metrics.csv"}) {
    auto one = slurp(dir.path() / "one" / f);
    EXPECT_FALSE(one.empty()) << f;
    EXPECT_EQ(one, slurp(dir.path() / "two" / f)) << f;
  }
  EXPECT_EQ(run({"replay", "--repo", (dir.path() / "one").string(), "--verify"}).code, 0);
}

TEST(CliSimulateTest, CompareWritesCsv) {
  testing::TempDir dir;
  auto scenario = dir.path() / "scenario.json";
  std::ofstream(scenario) << R"({"seed": 4, "ticks": 20, "agents": [
      {"role": "buyer", "count": 6}, {"role": "seller", "count": 3, "honesty": 0.9}]})";
  auto variants = dir.path() / "variants.json";
  std::ofstream(variants) << R"([{"name": "x"}, {"name": "y", "context": {"w_cost": 0}}])";
  auto r = run({"compare", "--scenario", scenario.string(), "--variants", variants.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, x, y;
  std::getline(lines, header);
  std::getline(lines, x);
  std::getline(lines, y);
  EXPECT_EQ(header.substr(0, 20), "variant,honest_mean,");
  EXPECT_EQ(x.substr(0, 2), "x,");
  EXPECT_EQ(y.substr(0, 2), "y,");
}

// The installed binary honours the exit-code contract too.
TEST(TrustctlBinaryTest, ExitCodes) {
  auto status = std::system(TRUSTCTL_PATH " >/dev/null 2>&1");
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  status = std::system(TRUSTCTL_PATH " replay --repo /nonexistent/repo --verify >/dev/null 2>&1");
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 1);
}

}  // namespace
}  // namespace trustmesh
