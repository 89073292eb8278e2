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


#include "privgames/adversaries.h"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privgames/experiments.h"
#include "privgames/metrics.h"
#include "privgames/params.h"
#include "test_util.h"

namespace privgames {
namespace {

using ::privgames::testing::kZ99;
using ::privgames::testing::WilsonOracle;
using ::testing::StartsWith;

absl::StatusOr<GameDef> GameFrom(absl::string_view text) {
  absl::StatusOr<Params> p = Params::Parse(text);
  if (!p.ok()) return p.status();
  return BuildGame(*p, "");
}

absl::StatusOr<AdversaryPtr> AdversaryFrom(absl::string_view text) {
  absl::StatusOr<Params> p = Params::Parse(text);
  if (!p.ok()) return p.status();
  return BuildAdversary(*p, "");
}

// Extra keys needed to build each listed kind.
std::string ExtraKeys(absl::string_view kind) {
  if (kind == "SCALAR_THRESHOLD") return "t=1";
  if (kind == "SMI_FROM_RC") return "inner.kind=RC_SUM_SUBTRACT";
  if (kind == "DPD_FROM_RC") return "inner.kind=RC_SUM_SUBTRACT\nprior=uniform(2)\nS=[0]";
  if (kind == "DPD_FROM_MI" || kind == "RC_FROM_MI") {
    return "inner.kind=BAYES_SUM_MI\ndist=bernoulli(0.5)";
  }
  if (kind == "MI_FROM_AI") return "inner.kind=AI_SET_LOOKUP\nphi=0\npi=1";
  if (kind == "AI_FROM_MI") return "inner.kind=MI_SET_MEMBER";
  if (kind == "MM_MI_FORWARD" || kind == "MM_PI_FORWARD") {
    return "inner.kind=MM_MEAN_THRESHOLD\nmeta=mixture(bernoulli(0.2),bernoulli(0.8))\nn=2";
  }
  return "";
}

TEST(BuildAdversaryTest, EveryListedKindBuilds) {
  std::set<std::string> kinds;
  for (const AdversaryInfo& info : ListAdversaryKinds()) {
    EXPECT_TRUE(kinds.insert(info.kind).second) << "duplicate " << info.kind;
    EXPECT_FALSE(info.summary.empty());
    PG_ASSERT_OK_AND_ASSIGN(
        AdversaryPtr adv, AdversaryFrom(absl::StrCat("kind=", info.kind, "\n", ExtraKeys(info.kind))));
    EXPECT_THAT(adv->kind(), StartsWith(info.kind));
    AdversaryPtr fresh = adv->Fresh();
    EXPECT_EQ(fresh->kind(), adv->kind());
    EXPECT_EQ(fresh->access(), adv->access());
    bool any = false;
    for (GameVariant v : AllGameVariants()) {
      EXPECT_EQ(fresh->Supports(v), adv->Supports(v));
      any = any || adv->Supports(v);
    }
    EXPECT_TRUE(any) << info.kind;
  }
}

TEST(BuildAdversaryTest, RejectsBadParameters) {
  EXPECT_FALSE(AdversaryFrom("kind=NOPE").ok());
  EXPECT_FALSE(AdversaryFrom("kind=CONSTANT\nbit=2").ok());
  EXPECT_FALSE(AdversaryFrom("kind=BAYES_SUM_MI\np=1.5").ok());
  EXPECT_FALSE(AdversaryFrom("kind=SCALAR_THRESHOLD").ok());
  EXPECT_FALSE(AdversaryFrom("kind=AI_FROM_MI\ninner.kind=MI_SET_MEMBER\nscheme=all").ok());
  EXPECT_FALSE(AdversaryFrom("kind=SMI_FROM_RC").ok());
}

TEST(BuildAdversaryTest, AccessModels) {
  EXPECT_EQ(MakeOracleMember()->access(), Access::kBlackBox);
  EXPECT_EQ(MakeCanaryRanker()->access(), Access::kBlackBox);
  EXPECT_EQ(MakeMiSetMember()->access(), Access::kWhiteBox);
  EXPECT_EQ(MakeBayesSumMi()->access(), Access::kWhiteBox);
}

// Set lookup in MI with a memorizer: b = 0 always wins; b = 1 wins iff z0
// misses both S' and z1, which for uniform(k) has probability ((k-1)/k)^n.
TEST(MiSetMemberTest, ExactWinMatchesClosedForm) {
  for (int k : {2, 3, 5}) {
    for (size_t n : {1, 2, 3}) {
      PG_ASSERT_OK_AND_ASSIGN(
          GameDef g, GameFrom(absl::StrCat("variant=MI\nn=", n, "\ndist=uniform(", k, ")")));
      PG_ASSERT_OK_AND_ASSIGN(ExactOutcome exact,
                              EnumerateOutcome(g, Trainer::Memorizer(), *MakeMiSetMember()));
      const double oracle = 0.5 + 0.5 * std::pow((k - 1.0) / k, static_cast<double>(n));
      EXPECT_NEAR(exact.p_win, oracle, 1e-12) << "k=" << k << " n=" << n;
    }
  }
}

TEST(MiSetMemberTest, MonteCarloAgreesWithClosedForm) {
  PG_ASSERT_OK_AND_ASSIGN(GameDef g, GameFrom("variant=MI\nn=4\ndist=uniform(6)"));
  const uint64_t trials = 20000;
  PG_ASSERT_OK_AND_ASSIGN(
      TrialBatch batch, RunTrials(g, Trainer::Memorizer(), *MakeMiSetMember(), trials, RngStream(2), 1));
  uint64_t wins = 0;
  for (const TrialRecord& r : batch.records) wins += r.win;
  const auto [lo, hi] = WilsonOracle(static_cast<double>(wins), trials, kZ99);
  const double oracle = 0.5 + 0.5 * std::pow(5.0 / 6.0, 4.0);
  EXPECT_LE(lo, oracle);
  EXPECT_GE(hi, oracle);
}

TEST(BayesSumMiTest, UninformativeModelIsACoin) {
  PG_ASSERT_OK_AND_ASSIGN(GameDef g, GameFrom("variant=MI\nn=3\ndist=bernoulli(0.3)"));
  PG_ASSERT_OK_AND_ASSIGN(ExactOutcome exact,
                          EnumerateOutcome(g, Trainer::Constant(), *MakeBayesSumMi()));
  EXPECT_NEAR(exact.p_win, 0.5, 1e-12);
}

// Likelihood-ratio guessing is Bayes optimal for a fair secret, so no other
// decision rule on (theta, z0) can do better. Checked against every
// deterministic rule over the reachable (theta, z0) pairs at n = 2.
TEST(BayesSumMiTest, BeatsEveryDeterministicRule) {
  PG_ASSERT_OK_AND_ASSIGN(GameDef g, GameFrom("variant=MI\nn=2\ndist=bernoulli(0.4)"));
  PG_ASSERT_OK_AND_ASSIGN(ExactOutcome bayes, EnumerateOutcome(g, *Trainer::Sum(), *MakeBayesSumMi()));
  // Pr[theta = t, z0 = z, b] for theta in {0,1,2}, z in {0,1}.
  const double q = 0.4;
  auto pz = [&](int z) { return z == 1 ? q : 1.0 - q; };
  double joint[3][2][2] = {};
  for (int b : {0, 1}) {
    for (int s : {0, 1}) {
      for (int z0 : {0, 1}) {
        for (int z1 : {0, 1}) {
          const int theta = s + (b == 0 ? z0 : z1);
          joint[theta][z0][b] += 0.5 * pz(s) * pz(z0) * pz(z1);
        }
      }
    }
  }
  double best = 0.0;
  for (int t = 0; t < 3; ++t) {
    for (int z = 0; z < 2; ++z) best += std::max(joint[t][z][0], joint[t][z][1]);
  }
  EXPECT_NEAR(bayes.p_win, best, 1e-12);
}

TEST(DpdSetMemberTest, AlwaysWinsAgainstMemorizer) {
  PG_ASSERT_OK_AND_ASSIGN(GameDef g, GameFrom("variant=DPD\nn=4"));
  AdversaryPtr adv = MakeDpdSetMember(Example::Scalar(0), Example::Scalar(1), Example::Scalar(2));
  PG_ASSERT_OK_AND_ASSIGN(ExactOutcome exact, EnumerateOutcome(g, Trainer::Memorizer(), *adv));
  EXPECT_NEAR(exact.p_win, 1.0, 1e-12);
}

TEST(CanaryRankerTest, InsertedCanaryRanksFirst) {
  PG_ASSERT_OK_AND_ASSIGN(
      GameDef g, GameFrom("variant=RC_TARG\nn=3\nm=2\ndist=uniform_over((5,5);(6,6))\n"
                          "canary.template=(0,0)\ncanary.holes=1\ncanary.radix=8"));
  PG_ASSERT_OK_AND_ASSIGN(
      TrialBatch batch, RunTrials(g, Trainer::CountModel(), *MakeCanaryRanker(), 200, RngStream(8), 1));
  ASSERT_EQ(batch.records.size(), 200u);
  for (const TrialRecord& r : batch.records) {
    ASSERT_TRUE(r.secret_rank.has_value());
    EXPECT_EQ(*r.secret_rank, 0u);
    EXPECT_EQ(r.win, 1);
  }
}

TEST(PiLabelVoteTest, SeparatesLabelSkew) {
  PG_ASSERT_OK_AND_ASSIGN(
      GameDef g, GameFrom("variant=PI\nn=9\ndist=pmf(0|0:0.45;1|0:0.45;0|1:0.05;1|1:0.05)\n"
                          "dist_alt=pmf(0|0:0.05;1|0:0.05;0|1:0.45;1|1:0.45)"));
  PG_ASSERT_OK_AND_ASSIGN(
      TrialBatch batch, RunTrials(g, Trainer::Memorizer(), *MakePiLabelVote(), 2000, RngStream(6), 1));
  uint64_t wins = 0;
  for (const TrialRecord& r : batch.records) wins += r.win;
  EXPECT_GT(static_cast<double>(wins) / batch.records.size(), 0.6);
}

TEST(MmMeanThresholdTest, BeatsCoinOnSeparatedMixture) {
  PG_ASSERT_OK_AND_ASSIGN(
      GameDef g, GameFrom("variant=MM\nn=3\nmeta=mixture(bernoulli(0.1),bernoulli(0.9))"));
  PG_ASSERT_OK_AND_ASSIGN(ExactOutcome exact,
                          EnumerateOutcome(g, *Trainer::Sum(), *MakeMmMeanThreshold()));
  EXPECT_GT(exact.p_win, 0.6);
}

TEST(ScalarThresholdTest, GuessesByThreshold) {
  // theta = sum of S + z_b with S = [0;0] and z0 = 0, z1 = 1: theta >= 1 iff b = 1.
  PG_ASSERT_OK_AND_ASSIGN(GameDef g, GameFrom("variant=SMI\nn=3\nS=[0;0]\nz0=0\nz1=1"));
  PG_ASSERT_OK_AND_ASSIGN(ExactOutcome exact,
                          EnumerateOutcome(g, *Trainer::Sum(), *MakeScalarThreshold(1.0)));
  EXPECT_NEAR(exact.p_win, 1.0, 1e-12);
}

TEST(WrapperTest, SupportedVariants) {
  EXPECT_TRUE(MakeSmiFromRc(MakeRcSumSubtract(), LossKind::kDiscrete)->Supports(GameVariant::kSmi));
  EXPECT_TRUE(MakeDpdFromMi(MakeBayesSumMi(), *DataDistribution::Bernoulli(0.5))
                  ->Supports(GameVariant::kDpd));
  EXPECT_TRUE(MakeRcFromMi(MakeBayesSumMi(), *DataDistribution::Bernoulli(0.5))
                  ->Supports(GameVariant::kAiInformed));
  EXPECT_TRUE(MakeMiFromAi(MakeAiSetLookup(), {0}, {1})->Supports(GameVariant::kMiSampled));
  EXPECT_TRUE(MakeAiFromMi(MakeMiSetMember(), AiFromMiScheme::kSample)->Supports(GameVariant::kAi));
}

// The SMI wrapper inherits perfect reconstruction: it wins every trial.
TEST(WrapperTest, SmiFromPerfectReconstruction) {
  PG_ASSERT_OK_AND_ASSIGN(GameDef g, GameFrom("variant=SMI\nn=3\nS=[1;2]\nz0=0\nz1=3"));
  PG_ASSERT_OK_AND_ASSIGN(
      ExactOutcome exact,
      EnumerateOutcome(g, *Trainer::Sum(), *MakeSmiFromRc(MakeRcSumSubtract(), LossKind::kDiscrete)));
  EXPECT_NEAR(exact.p_win, 1.0, 1e-12);
}

}  // namespace
}  // namespace privgames
