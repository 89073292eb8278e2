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


#include "privgames/experiments.h"

#include <cmath>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace privgames {
namespace {

using ::testing::HasSubstr;

constexpr Verdict kP = Verdict::kPass;
constexpr Verdict kF = Verdict::kFail;
constexpr Verdict kI = Verdict::kInconclusive;

Params P(absl::string_view text) { return *Params::Parse(text); }

RunOptions Opts(uint64_t trials, uint64_t seed = 7, int workers = 1) {
  RunOptions o;
  o.trials = trials;
  o.master_seed = seed;
  o.workers = workers;
  return o;
}

TEST(VerdictTest, LessEqualTruthTable) {
  EXPECT_EQ(CheckLessEqual({0.1, 0.2}, {0.3, 0.4}), kP);
  EXPECT_EQ(CheckLessEqual({0.5, 0.6}, {0.3, 0.4}), kF);
  EXPECT_EQ(CheckLessEqual({0.3, 0.5}, {0.4, 0.6}), kI);
  EXPECT_EQ(CheckLessEqual({0.4, 0.4}, {0.4, 0.4}), kP);
  EXPECT_EQ(CheckLessEqual({0.2, 0.2}, {0.1, 0.3}), kI);
  EXPECT_EQ(CheckLessEqual({0.2, 0.2}, {0.1, 0.1}), kF);
}

TEST(VerdictTest, CloseUsesHalfWidths) {
  EXPECT_EQ(CheckClose({0.4, 0.6}, {0.55, 0.65}), kP);
  EXPECT_EQ(CheckClose({0.4, 0.5}, {0.6, 0.7}), kF);
  EXPECT_EQ(CheckClose({0.5, 0.5}, {0.5, 0.5}), kP);
  // Midpoints 0.45 and 0.6, half-widths 0.05 and 0.1: gap 0.15 = 0.15.
  EXPECT_EQ(CheckClose({0.4, 0.5}, {0.5, 0.7}), kP);
}

TEST(VerdictTest, ExactChecks) {
  EXPECT_EQ(CheckExactEqual(0.25, 0.25 + 1e-13), kP);
  EXPECT_EQ(CheckExactEqual(0.25, 0.25 + 1e-9), kF);
  EXPECT_EQ(CheckExactLessEqual(0.25 + 1e-13, 0.25), kP);
  EXPECT_EQ(CheckExactLessEqual(0.3, 0.25), kF);
}

TEST(VerdictTest, Combine) {
  EXPECT_EQ(CombineVerdicts({}), kP);
  const std::vector<Verdict> a = {kP, kI, kP};
  const std::vector<Verdict> b = {kI, kF, kP};
  const std::vector<Verdict> c = {kP, kP};
  EXPECT_EQ(CombineVerdicts(a), kI);
  EXPECT_EQ(CombineVerdicts(b), kF);
  EXPECT_EQ(CombineVerdicts(c), kP);
  EXPECT_EQ(VerdictName(kI), "INCONCLUSIVE");
}

TEST(RegistryTest, ListAndDescribe) {
  const std::vector<ExperimentInfo> all = ListExperiments();
  EXPECT_GE(all.size(), 14u);
  for (const ExperimentInfo& info : all) {
    auto d = DescribeExperiment(info.id);
    ASSERT_TRUE(d.ok()) << info.id;
    EXPECT_EQ(d->id, info.id);
    EXPECT_FALSE(d->summary.empty());
  }
  EXPECT_EQ(DescribeExperiment("NOPE").status().code(), absl::StatusCode::kInvalidArgument);
}

class EveryExperimentTest : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryExperimentTest, PassesWithDefaults) {
  PG_ASSERT_OK_AND_ASSIGN(ExperimentReport r, RunExperiment(GetParam(), Params(), Opts(20000)));
  EXPECT_EQ(r.experiment, GetParam());
  EXPECT_EQ(r.verdict, kP);
  for (const Check& c : r.checks) EXPECT_EQ(c.verdict, kP) << c.name << ": " << c.detail;
  EXPECT_FALSE(r.estimates.empty());
  for (const NamedEstimate& e : r.estimates) {
    EXPECT_LE(e.ci_low, e.point + 1e-12) << e.name;
    EXPECT_GE(e.ci_high, e.point - 1e-12) << e.name;
  }
  EXPECT_EQ(r.degenerate_trials, 0u);
}

TEST_P(EveryExperimentTest, DeterministicAcrossWorkers) {
  PG_ASSERT_OK_AND_ASSIGN(ExperimentReport a, RunExperiment(GetParam(), Params(), Opts(3000, 99, 1)));
  PG_ASSERT_OK_AND_ASSIGN(ExperimentReport b, RunExperiment(GetParam(), Params(), Opts(3000, 99, 7)));
  ASSERT_EQ(a.estimates.size(), b.estimates.size());
  for (size_t i = 0; i < a.estimates.size(); ++i) {
    EXPECT_EQ(a.estimates[i].name, b.estimates[i].name);
    EXPECT_EQ(a.estimates[i].point, b.estimates[i].point) << a.estimates[i].name;
    EXPECT_EQ(a.estimates[i].ci_low, b.estimates[i].ci_low);
    EXPECT_EQ(a.estimates[i].ci_high, b.estimates[i].ci_high);
  }
  EXPECT_EQ(a.verdict, b.verdict);
}

std::vector<std::string> DefaultRunnableIds() {
  std::vector<std::string> ids;
  for (const ExperimentInfo& info : ListExperiments()) {
    if (info.id != "GAME") ids.push_back(info.id);
  }
  return ids;
}

INSTANTIATE_TEST_SUITE_P(All, EveryExperimentTest, ::testing::ValuesIn(DefaultRunnableIds()),
                         [](const auto& info) { return info.param; });

TEST(RunExperimentTest, MiNotDpdReportsBoundAndPerfectDistinguisher) {
  PG_ASSERT_OK_AND_ASSIGN(ExperimentReport r, RunExperiment("MI_NOT_DPD", Params(), Opts(20000)));
  ASSERT_TRUE(r.bound.has_value());
  EXPECT_NEAR(*r.bound, 0.125, 1e-15);
  const NamedEstimate* dpd = r.Find("dpd_advantage");
  ASSERT_NE(dpd, nullptr);
  EXPECT_EQ(dpd->point, 1.0);
  const NamedEstimate* mi = r.Find("mi_advantage");
  ASSERT_NE(mi, nullptr);
  EXPECT_LE(mi->ci_low, 0.125);
  EXPECT_EQ(r.Find("nothing"), nullptr);
}

TEST(RunExperimentTest, ParamsAreRecorded) {
  PG_ASSERT_OK_AND_ASSIGN(ExperimentReport r, RunExperiment("MI_NOT_DPD", P("n=16"), Opts(2000)));
  bool found = false;
  for (const auto& [k, v] : r.params) found = found || (k == "n" && v == "16");
  EXPECT_TRUE(found);
  EXPECT_NEAR(*r.bound, 0.25, 1e-15);
}

TEST(RunExperimentTest, Errors) {
  EXPECT_EQ(RunExperiment("NOPE", Params(), Opts(10)).status().code(),
            absl::StatusCode::kInvalidArgument);
  const auto unknown_key = RunExperiment("MI_NOT_DPD", P("colour=blue"), Opts(10));
  EXPECT_EQ(unknown_key.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(unknown_key.status().message(), HasSubstr("colour"));
  const auto zero = RunExperiment("MI_NOT_DPD", Params(), Opts(0));
  EXPECT_EQ(zero.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(zero.status().message(), HasSubstr("trials must be"));
  const auto bad_value = RunExperiment("DP_BOUND", P("epsilon=-1"), Opts(10));
  EXPECT_EQ(bad_value.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(RunExperimentTest, PremiseViolation) {
  const auto odd = RunExperiment("MI_NOT_DPD", P("n=5"), Opts(10));
  EXPECT_FALSE(odd.ok());
  EXPECT_THAT(odd.status().message(), HasSubstr("premise"));
}

TEST(RunExperimentTest, CapabilityMismatch) {
  const auto r = RunExperiment(
      "GAME",
      P("game.variant=MI_BB\ngame.n=3\ngame.dist=uniform(8)\ntrainer.kind=MEMORIZER\n"
        "adversary.kind=MI_SET_MEMBER"),
      Opts(10));
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(RunExperimentTest, SigmaConventionIsAccepted) {
  EXPECT_TRUE(RunExperiment("DP_BOUND", P("sigma2_convention=paper_text"), Opts(500)).ok());
  EXPECT_FALSE(RunExperiment("DP_BOUND", P("sigma2_convention=bogus"), Opts(500)).ok());
}

TEST(RunExperimentTest, GameWithExactValue) {
  PG_ASSERT_OK_AND_ASSIGN(
      ExperimentReport r,
      RunExperiment("GAME",
                    P("game.variant=MI\ngame.n=2\ngame.dist=uniform(3)\ntrainer.kind=MEMORIZER\n"
                      "adversary.kind=MI_SET_MEMBER\nexact=true\nbound=1"),
                    Opts(5000)));
  const NamedEstimate* exact = r.Find("advantage_exact");
  ASSERT_NE(exact, nullptr);
  // Centered advantage 2 Pr[win] - 1 with Pr[win] = 1/2 + (2/3)^2 / 2.
  EXPECT_NEAR(exact->point, 4.0 / 9.0, 1e-12);
  EXPECT_EQ(r.verdict, kP);
}

TEST(RunExperimentTest, DegenerateTrialsBlockAPass) {
  PG_ASSERT_OK_AND_ASSIGN(
      ExperimentReport r,
      RunExperiment("GAME",
                    P("game.variant=MI_BB\ngame.n=3\ngame.dist=bernoulli(0.5)\n"
                      "trainer.kind=MEMORIZER\nadversary.kind=ORACLE_MEMBER\nbound=1"),
                    Opts(4000)));
  EXPECT_GT(r.degenerate_trials, 40u);
  EXPECT_EQ(r.verdict, kI);
  bool flagged = false;
  for (const Check& c : r.checks) flagged = flagged || (c.verdict == kI);
  EXPECT_TRUE(flagged);
}

TEST(RunExperimentTest, KeepTrials) {
  RunOptions o = Opts(100);
  o.keep_trials = true;
  PG_ASSERT_OK_AND_ASSIGN(ExperimentReport r, RunExperiment("MI_NOT_DPD", Params(), o));
  ASSERT_FALSE(r.trial_logs.empty());
  for (const TrialLog& log : r.trial_logs) EXPECT_EQ(log.records.size(), 100u) << log.name;
}

TEST(RunExperimentTest, CaseStudyExactIdentity) {
  PG_ASSERT_OK_AND_ASSIGN(ExperimentReport r, RunExperiment("CASE_STUDY_MM", Params(), Opts(5000)));
  const NamedEstimate* mm = r.Find("mm_advantage_exact");
  const NamedEstimate* dec = r.Find("decomposition_exact");
  ASSERT_NE(mm, nullptr);
  ASSERT_NE(dec, nullptr);
  EXPECT_NEAR(mm->point, dec->point, 1e-12);
}

}  // namespace
}  // namespace privgames
