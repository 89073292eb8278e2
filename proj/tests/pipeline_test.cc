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

#include "privgames/pipeline.h"

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace privgames {
namespace {

using ::testing::HasSubstr;

Model TrainOrDie(const Trainer& t, const Dataset& d, uint64_t seed = 0) {
  RandomSource r{RngStream(seed)};
  return *t.Train(d, r);
}

TEST(Sigma2Test, StandardAndPaperTextConventions) {
  const double l = std::log(1.25 / 1e-5);
  EXPECT_NEAR(GaussianSigma2(1.0, 1e-5, Sigma2Convention::kStandard), 2.0 * l, 1e-12);
  EXPECT_NEAR(GaussianSigma2(1.0, 1e-5, Sigma2Convention::kStandard), 23.47, 0.01);
  EXPECT_NEAR(GaussianSigma2(0.5, 1e-5, Sigma2Convention::kStandard), 2.0 * l / 0.25, 1e-12);
  EXPECT_NEAR(GaussianSigma2(0.5, 1e-5, Sigma2Convention::kPaperText), 2.0 * l / 0.5, 1e-12);
}

TEST(Sigma2Test, ConventionNamesRoundTrip) {
  for (auto c : {Sigma2Convention::kStandard, Sigma2Convention::kPaperText}) {
    EXPECT_EQ(*ParseSigma2Convention(Sigma2ConventionName(c)), c);
  }
  EXPECT_FALSE(ParseSigma2Convention("bogus").ok());
}

TEST(TrainerTest, KindNamesRoundTrip) {
  for (auto k : {TrainerKind::kSum, TrainerKind::kNoisySum, TrainerKind::kMemorizer,
                 TrainerKind::kFeatureProjector, TrainerKind::kCountModel,
                 TrainerKind::kConstant}) {
    EXPECT_EQ(*ParseTrainerKind(TrainerKindName(k)), k);
  }
  EXPECT_FALSE(ParseTrainerKind("SGD").ok());
}

TEST(TrainerTest, SumAddsTheAttribute) {
  auto t = *Trainer::Sum();
  Model m = TrainOrDie(t, {Example::Scalar(1), Example::Scalar(0), Example::Scalar(1)});
  EXPECT_DOUBLE_EQ(std::get<ScalarModel>(m).value, 2.0);
  auto t1 = *Trainer::Sum(1);
  EXPECT_DOUBLE_EQ(std::get<ScalarModel>(TrainOrDie(t1, {Example({5, 2}), Example({1, 3})})).value,
                   5.0);
}

TEST(TrainerTest, SumRejectsMissingAttribute) {
  auto t = *Trainer::Sum(2);
  RandomSource r{RngStream(0)};
  auto m = t.Train({Example({1, 2})}, r);
  EXPECT_EQ(m.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(TrainerTest, NoisySumRejectsBadParameters) {
  EXPECT_FALSE(Trainer::NoisySum(0.0, 1e-5).ok());
  EXPECT_FALSE(Trainer::NoisySum(1.0, 0.0).ok());
  EXPECT_FALSE(Trainer::NoisySum(1.0, 1.0).ok());
}

TEST(TrainerTest, NoisySumIsNotEnumerable) {
  auto t = *Trainer::NoisySum(1.0, 1e-5);
  Enumerator e;
  absl::Status s = e.ForEachAtom(
      [&](RandomSource& r) { return t.Train({}, r).status(); }, [](double) {});
  EXPECT_EQ(s.code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(s.message(), HasSubstr("NOISY_SUM"));
}

// Pure noise on the empty dataset: sample variance within 5% of sigma2.
TEST(TrainerTest, NoisySumVarianceOnEmptyData) {
  auto t = *Trainer::NoisySum(1.0, 1e-5);
  RandomSource r{RngStream(123)};
  constexpr int kN = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = std::get<ScalarModel>(*t.Train({}, r)).value;
    s += x;
    s2 += x * x;
  }
  const double var = (s2 - s * s / kN) / (kN - 1);
  EXPECT_NEAR(var / t.sigma2(), 1.0, 0.05);
}

TEST(TrainerTest, FeatureProjectorDropsLabels) {
  const Trainer t = Trainer::FeatureProjector();
  Model a = TrainOrDie(t, {Example({3}, 0), Example({5}, 1)});
  Model b = TrainOrDie(t, {Example({3}, 1), Example({5}, 0)});
  const auto& set = std::get<ExampleSetModel>(a);
  EXPECT_EQ(set.items.size(), 2u);
  EXPECT_TRUE(set.items.contains(Example::Scalar(3)));
  EXPECT_TRUE(set.items.contains(Example::Scalar(5)));
  EXPECT_EQ(Fingerprint(a), Fingerprint(b));
  EXPECT_DOUBLE_EQ(*Query(a, Example({3}, 1)), 1.0);
  EXPECT_DOUBLE_EQ(*Query(a, Example({4}, 1)), 0.0);
}

TEST(TrainerTest, MemorizerKeepsLabels) {
  Model m = TrainOrDie(Trainer::Memorizer(), {Example({3}, 0)});
  EXPECT_DOUBLE_EQ(*Query(m, Example({3}, 0)), 1.0);
  EXPECT_DOUBLE_EQ(*Query(m, Example({3}, 1)), 0.0);
}

TEST(TrainerTest, CountModelFrequencies) {
  Model m = TrainOrDie(Trainer::CountModel(),
                       {Example::Scalar(1), Example::Scalar(1), Example::Scalar(2),
                        Example::Scalar(3)});
  EXPECT_DOUBLE_EQ(*Query(m, Example::Scalar(1)), 0.5);
  EXPECT_DOUBLE_EQ(*Query(m, Example::Scalar(9)), 0.0);
  Model empty = TrainOrDie(Trainer::CountModel(), {});
  EXPECT_FALSE(Query(empty, Example::Scalar(1)).ok());
}

TEST(TrainerTest, ConstantIgnoresData) {
  EXPECT_EQ(Fingerprint(TrainOrDie(Trainer::Constant(), {Example::Scalar(1)})),
            Fingerprint(TrainOrDie(Trainer::Constant(), {})));
}

// Property: set-valued trainers are invariant under permutations of S.
TEST(TrainerProperty, PermutationInvariance) {
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 100; ++rep) {
    DataDistribution d = testing::RandomDistribution(gen, 2, 3, 9);
    RandomSource r{RngStream(rep)};
    Dataset s = SampleDataset(d, 6, r);
    Dataset p = s;
    std::shuffle(p.begin(), p.end(), gen);
    for (const Trainer& t : {Trainer::Memorizer(), Trainer::FeatureProjector(),
                             Trainer::CountModel(), *Trainer::Sum(1)}) {
      EXPECT_EQ(Fingerprint(TrainOrDie(t, s)), Fingerprint(TrainOrDie(t, p)));
    }
  }
}

TEST(OracleTest, BudgetExhaustionReturnsBottom) {
  Oracle o(ScalarModel{7.0}, 2);
  EXPECT_EQ(**o.Query(Example::Scalar(0)), 7.0);
  EXPECT_EQ(**o.Query(Example::Scalar(0)), 7.0);
  EXPECT_EQ(*o.Query(Example::Scalar(0)), std::nullopt);
  EXPECT_EQ(o.used(), 3);
}

TEST(OracleTest, UnlimitedWithoutBudget) {
  Oracle o(ExampleSetModel{{Example::Scalar(1)}, false});
  for (int i = 0; i < 100; ++i) ASSERT_TRUE((*o.Query(Example::Scalar(1))).has_value());
}

}  // namespace
}  // namespace privgames
