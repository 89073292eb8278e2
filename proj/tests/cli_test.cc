//
// Copyright 2026 The privgames Authors
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
//


#include "cli/cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace privgames::cli {
namespace {

using ::testing::HasSubstr;

Params P(absl::string_view text) { return *Params::Parse(text); }

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string TempPath(absl::string_view name) {
  return ::testing::TempDir() + std::string(name);
}

TEST(ParseRunConfigTest, SplitsTopLevelKeys) {
  PG_ASSERT_OK_AND_ASSIGN(
      RunConfig c, ParseRunConfig(P("experiment=MI_NOT_DPD\ntrials=500\nmaster_seed=3\n"
                                    "workers=4\nout=r.json\nemit_trials=true\nn=16")));
  EXPECT_EQ(c.experiment, "MI_NOT_DPD");
  EXPECT_EQ(c.options.trials, 500u);
  EXPECT_EQ(c.options.master_seed, 3u);
  EXPECT_EQ(c.options.workers, 4);
  EXPECT_TRUE(c.options.keep_trials);
  EXPECT_EQ(c.out, "r.json");
  EXPECT_EQ(c.trials_out, "r.json.trials.csv");
  EXPECT_EQ(c.params.entries().size(), 1u);
  EXPECT_EQ(c.params.entries().at("n"), "16");
}

TEST(ParseRunConfigTest, Defaults) {
  PG_ASSERT_OK_AND_ASSIGN(RunConfig c, ParseRunConfig(P("experiment=DP_BOUND"), 6));
  EXPECT_EQ(c.options.trials, 100000u);
  EXPECT_EQ(c.options.workers, 6);
  EXPECT_FALSE(c.emit_trials);
}

TEST(ParseRunConfigTest, Errors) {
  EXPECT_FALSE(ParseRunConfig(P("trials=10")).ok());
  const auto zero = ParseRunConfig(P("experiment=DP_BOUND\ntrials=0"));
  ASSERT_FALSE(zero.ok());
  EXPECT_THAT(zero.status().message(), HasSubstr("trials must be"));
  EXPECT_FALSE(ParseRunConfig(P("experiment=DP_BOUND\nworkers=0")).ok());
  EXPECT_FALSE(ParseRunConfig(P("experiment=DP_BOUND\nworkers=2000")).ok());
  EXPECT_FALSE(ParseRunConfig(P("experiment=DP_BOUND\nemit_trials=true")).ok());
}

TEST(ExitCodeTest, Mapping) {
  EXPECT_EQ(ExitCodeFor(Verdict::kPass), kExitPass);
  EXPECT_EQ(ExitCodeFor(Verdict::kFail), kExitFail);
  EXPECT_EQ(ExitCodeFor(Verdict::kInconclusive), kExitInconclusive);
}

ExperimentReport RunReport(absl::string_view id, absl::string_view params, uint64_t trials,
                     uint64_t seed, bool keep = false) {
  RunOptions o;
  o.trials = trials;
  o.master_seed = seed;
  o.keep_trials = keep;
  return *RunExperiment(id, P(params), o);
}

TEST(ReportToJsonTest, Schema) {
  const ExperimentReport r = RunReport("MI_NOT_DPD", "", 2000, 1);
  const nlohmann::json j = nlohmann::json::parse(ReportToJson(r));
  for (const char* key :
       {"experiment", "theorem_ref", "params", "master_seed", "trials", "estimates", "bound",
        "constant_c", "verdict", "degenerate_trials", "checks", "wall_time_seconds"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["experiment"], "MI_NOT_DPD");
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_EQ(j["trials"], 2000);
  EXPECT_DOUBLE_EQ(j["bound"].get<double>(), 0.125);
  EXPECT_DOUBLE_EQ(j["dpd_advantage"].get<double>(), 1.0);
  for (const auto& e : j["estimates"]) {
    for (const char* key : {"name", "mode", "point", "ci_low", "ci_high", "trials"}) {
      EXPECT_TRUE(e.contains(key)) << key;
    }
  }
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c.contains("name") && c.contains("verdict") && c.contains("detail"));
  }
}

TEST(ReportToJsonTest, AbsentAndNonFiniteValuesAreNull) {
  ExperimentReport r;
  r.experiment = "X";
  r.estimates.push_back({"x", "RATE", std::nan(""), 0.0, 1.0, 1});
  const nlohmann::json j = nlohmann::json::parse(ReportToJson(r));
  EXPECT_TRUE(j["bound"].is_null());
  EXPECT_TRUE(j["estimates"][0]["point"].is_null());
}

TEST(ReportToJsonTest, ByteIdenticalWithoutWallTime) {
  for (const ExperimentInfo& info : ListExperiments()) {
    if (info.id == "GAME") continue;
    RunOptions a;
    a.trials = 1000;
    a.master_seed = 17;
    a.workers = 1;
    RunOptions b = a;
    b.workers = 5;
    const auto ra = RunExperiment(info.id, Params(), a);
    const auto rb = RunExperiment(info.id, Params(), b);
    ASSERT_TRUE(ra.ok() && rb.ok()) << info.id;
    const std::string ja = ReportToJson(*ra, false);
    EXPECT_EQ(ja, ReportToJson(*rb, false)) << info.id;
    EXPECT_EQ(ja.find("wall_time"), std::string::npos);
  }
}

// The logged trials reproduce the reported win rate of the distinguisher.
TEST(TrialsToCsvTest, RoundTrip) {
  const ExperimentReport r = RunReport("MI_NOT_DPD", "n=16", 300, 5, true);
  const std::string csv = TrialsToCsv(r);
  std::vector<std::string> lines = absl::StrSplit(csv, '\n', absl::SkipEmpty());
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0], "estimate,trial_index,secret_bit,guess_bit,win,loss_value");
  std::map<std::string, std::pair<int, int>> per_estimate;  // wins, rows
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cells = absl::StrSplit(lines[i], ',');
    ASSERT_EQ(cells.size(), 6u) << lines[i];
    int win = 0;
    ASSERT_TRUE(absl::SimpleAtoi(cells[4], &win));
    if (!cells[2].empty() && !cells[3].empty()) {
      EXPECT_EQ(win, cells[2] == cells[3] ? 1 : 0);
    }
    per_estimate[cells[0]].first += win;
    per_estimate[cells[0]].second += 1;
  }
  ASSERT_TRUE(per_estimate.contains("dpd_advantage"));
  EXPECT_EQ(per_estimate["dpd_advantage"].first, 300);
  EXPECT_EQ(per_estimate["dpd_advantage"].second, 300);
}

TEST(RunConfigMainTest, WritesReportAndTrials) {
  const std::string out = TempPath("privgames_cli_report.json");
  std::remove(out.c_str());
  std::remove((out + ".trials.csv").c_str());
  PG_ASSERT_OK_AND_ASSIGN(
      RunConfig c, ParseRunConfig(P("experiment=MI_NOT_DPD\ntrials=4000\nemit_trials=true\nout=" +
                                    out)));
  std::ostringstream stream, diag;
  EXPECT_EQ(RunConfigMain(c, stream, diag), kExitPass);
  EXPECT_THAT(diag.str(), HasSubstr("MI_NOT_DPD: PASS"));
  const nlohmann::json j = nlohmann::json::parse(Slurp(out));
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_THAT(Slurp(out + ".trials.csv"), HasSubstr("estimate,trial_index"));
}

TEST(RunConfigMainTest, ReportToStreamWithoutOut) {
  PG_ASSERT_OK_AND_ASSIGN(RunConfig c, ParseRunConfig(P("experiment=DP_BOUND\ntrials=200")));
  std::ostringstream stream, diag;
  EXPECT_EQ(RunConfigMain(c, stream, diag), kExitPass);
  EXPECT_EQ(nlohmann::json::parse(stream.str())["experiment"], "DP_BOUND");
}

TEST(RunConfigMainTest, ConfigErrorsExitOne) {
  std::ostringstream stream, diag;
  PG_ASSERT_OK_AND_ASSIGN(RunConfig bad_key,
                          ParseRunConfig(P("experiment=DP_BOUND\ntrials=10\ncolour=red")));
  EXPECT_EQ(RunConfigMain(bad_key, stream, diag), kExitConfigError);
  EXPECT_THAT(diag.str(), HasSubstr("error:"));
  PG_ASSERT_OK_AND_ASSIGN(
      RunConfig unwritable,
      ParseRunConfig(P("experiment=DP_BOUND\ntrials=10\nout=/nonexistent-dir/x/report.json")));
  EXPECT_EQ(RunConfigMain(unwritable, stream, diag), kExitConfigError);
}

TEST(RunConfigMainTest, InconclusiveExitCode) {
  PG_ASSERT_OK_AND_ASSIGN(
      RunConfig c, ParseRunConfig(P("experiment=GAME\ntrials=2000\ngame.variant=MI_BB\ngame.n=3\n"
                                    "game.dist=bernoulli(0.5)\ntrainer.kind=MEMORIZER\n"
                                    "adversary.kind=ORACLE_MEMBER\nbound=1")));
  std::ostringstream stream, diag;
  EXPECT_EQ(RunConfigMain(c, stream, diag), kExitInconclusive);
}

TEST(TextTest, ListAndDescribe) {
  const std::string list = ListText();
  EXPECT_THAT(list, HasSubstr("MI_NOT_DPD"));
  EXPECT_THAT(list, HasSubstr("BAYES_SUM_MI"));
  EXPECT_THAT(list, HasSubstr("NOISY_SUM"));
  EXPECT_THAT(list, HasSubstr("MM_G1"));
  PG_ASSERT_OK_AND_ASSIGN(std::string d, DescribeText("CASE_STUDY_MM"));
  EXPECT_THAT(d, HasSubstr("components"));
  EXPECT_FALSE(DescribeText("NOPE").ok());
}

}  // namespace
}  // namespace privgames::cli
