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

#include "privgames/prob.h"

#include <map>
#include <random>
#include <set>

#include "absl/container/flat_hash_set.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace privgames {
namespace {

using ::privgames::testing::kZ99;
using ::privgames::testing::RandomDistribution;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(ExampleTest, AbsentNeverEqualsARealExample) {
  EXPECT_EQ(Example::Absent(), Example::Absent());
  EXPECT_NE(Example::Absent(), Example());
  EXPECT_NE(Example::Absent(), Example::Scalar(0));
  EXPECT_TRUE(Example::Absent().absent());
}

TEST(ExampleTest, ToStringForms) {
  EXPECT_EQ(Example::Scalar(3).ToString(), "3");
  EXPECT_EQ(Example({3}, 1).ToString(), "3|1");
  EXPECT_EQ(Example({1, 2}, 0).ToString(), "(1,2)|0");
  EXPECT_EQ(Example::Absent().ToString(), "bot");
}

TEST(ExampleTest, LabelAndAttrEdits) {
  const Example z({4, 5}, 1);
  EXPECT_EQ(z.WithoutLabel(), Example({4, 5}));
  EXPECT_EQ(z.WithLabel(0), Example({4, 5}, 0));
  EXPECT_EQ(z.WithAttr(1, 9), Example({4, 9}, 1));
  EXPECT_EQ(Project(z, std::vector<size_t>{1}), Example({5}));
}

TEST(ExampleTest, OrderingIsStrictWeak) {
  std::set<Example> s = {Example::Scalar(2), Example::Scalar(1), Example({1, 0}),
                         Example::Absent(), Example::Scalar(1)};
  EXPECT_EQ(s.size(), 4u);
}

TEST(SchemaTest, InferAndAdmit) {
  std::vector<Example> support = {Example({0, 3}, 1), Example({2, 0}, 0)};
  Schema s = Schema::Infer(support);
  EXPECT_THAT(s.cardinalities, ElementsAre(3, 4));
  EXPECT_EQ(s.label_cardinality, 2);
  EXPECT_TRUE(s.Admits(Example({2, 3}, 1)));
  EXPECT_FALSE(s.Admits(Example({3, 0}, 1)));
  EXPECT_FALSE(s.Admits(Example({0, 0})));
}

TEST(DataDistributionTest, RejectsInvalidInput) {
  EXPECT_FALSE(DataDistribution::Create({Example::Scalar(0)}, {0.5}).ok());
  EXPECT_FALSE(
      DataDistribution::Create({Example::Scalar(0), Example::Scalar(1)}, {1.5, -0.5}).ok());
  EXPECT_FALSE(
      DataDistribution::Create({Example::Scalar(0), Example::Scalar(0)}, {0.5, 0.5}).ok());
  EXPECT_FALSE(DataDistribution::Create({}, {}).ok());
  EXPECT_FALSE(DataDistribution::Bernoulli(1.5).ok());
  EXPECT_FALSE(DataDistribution::UniformRange(0).ok());
}

TEST(DataDistributionTest, BernoulliMassAndMean) {
  auto d = *DataDistribution::Bernoulli(0.3);
  EXPECT_DOUBLE_EQ(d.Mass(Example::Scalar(1)), 0.3);
  EXPECT_DOUBLE_EQ(d.Mass(Example::Scalar(0)), 0.7);
  EXPECT_DOUBLE_EQ(d.Mass(Example::Scalar(7)), 0.0);
  EXPECT_DOUBLE_EQ(d.Mean(0), 0.3);
  EXPECT_EQ(d.IndexOf(Example::Scalar(5)), std::nullopt);
}

TEST(DataDistributionTest, ProductConcatenatesAttributes) {
  auto a = *DataDistribution::Bernoulli(0.25);
  auto b = *DataDistribution::UniformRange(3);
  std::vector<DataDistribution> f = {a, b};
  auto p = *DataDistribution::Product(f);
  EXPECT_EQ(p.size(), 6u);
  EXPECT_EQ(p.schema().arity(), 2u);
  EXPECT_NEAR(p.Mass(Example({1, 2})), 0.25 / 3.0, 1e-15);
}

TEST(DataDistributionTest, LabeledAttachesLabel) {
  auto d = (*DataDistribution::UniformRange(2)).Labeled(1, 2);
  for (const Example& z : d.support()) EXPECT_EQ(z.label(), 1);
  EXPECT_EQ(d.schema().label_cardinality, 2);
}

TEST(MetaDistributionTest, UniformOverComponents) {
  auto m = *MetaDistribution::Uniform(
      {*DataDistribution::Bernoulli(0.2), *DataDistribution::Bernoulli(0.8)});
  EXPECT_TRUE(m.IsUniform());
  EXPECT_EQ(m.size(), 2u);
  EXPECT_FALSE(MetaDistribution::Uniform({}).ok());
}

TEST(RngStreamTest, SamePathSameSequence) {
  RngStream a = RngStream(42).Derive("trial", 7);
  RngStream b = RngStream(42).Derive("trial", 7);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngStreamTest, DistinctPathsDiffer) {
  absl::flat_hash_set<uint64_t> first;
  for (uint64_t i = 0; i < 10000; ++i) {
    first.insert(RngStream(1).Derive("trial", i).NextU64());
  }
  first.insert(RngStream(2).Derive("trial", 0).NextU64());
  first.insert(RngStream(1).Derive("other", 0).NextU64());
  EXPECT_EQ(first.size(), 10002u);
}

TEST(RngStreamTest, UniformInUnitInterval) {
  RngStream s(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.NextUniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

// Fair bits drawn from per-trial substreams: mean within 0.5 +- 0.005.
TEST(RngStreamTest, TrialSubstreamsGiveFairBits) {
  const RngStream master(11);
  int ones = 0;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) {
    RandomSource r(master.Derive("trial", i));
    ones += r.Bit(0.5);
  }
  EXPECT_NEAR(static_cast<double>(ones) / kN, 0.5, 0.005);
}

TEST(SampleTest, BernoulliEmpiricalMean) {
  auto d = *DataDistribution::Bernoulli(0.5);
  RandomSource r{RngStream(5)};
  double sum = 0;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) sum += SampleExample(d, r).attr(0);
  EXPECT_NEAR(sum / kN, 0.5, 0.005);
}

TEST(SampleTest, SampleBitFractionOfZeros) {
  RandomSource r{RngStream(8)};
  int zeros = 0;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) zeros += *SampleBit(0.3, r) == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(zeros) / kN, 0.3, 0.005);
  EXPECT_FALSE(SampleBit(-0.1, r).ok());
  EXPECT_FALSE(SampleBit(1.1, r).ok());
}

// Chi-square over the 16 ordered outcomes of Bernoulli(0.5)^4.
TEST(SampleTest, DatasetOutcomesUniform) {
  auto d = *DataDistribution::Bernoulli(0.5);
  RandomSource r{RngStream(9)};
  std::map<Dataset, int> counts;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) ++counts[SampleDataset(d, 4, r)];
  ASSERT_EQ(counts.size(), 16u);
  double chi2 = 0.0;
  const double expected = kN / 16.0;
  for (const auto& [s, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99.9% quantile of chi-square with 15 degrees of freedom.
  EXPECT_LT(chi2, 37.7);
}

TEST(EnumeratorTest, DatasetAtomsHaveExactMass) {
  auto d = *DataDistribution::Bernoulli(0.5);
  Enumerator e;
  std::map<Dataset, double> mass;
  Dataset current;
  ASSERT_TRUE(e.ForEachAtom(
                   [&](RandomSource& r) {
                     current = SampleDataset(d, 4, r);
                     return absl::OkStatus();
                   },
                   [&](double w) { mass[current] += w; })
                  .ok());
  EXPECT_EQ(e.atoms(), 16u);
  for (const auto& [s, w] : mass) EXPECT_DOUBLE_EQ(w, 1.0 / 16.0);
}

TEST(EnumeratorTest, AtomLimitIsEnforced) {
  auto d = *DataDistribution::UniformRange(10);
  Enumerator e(50);
  absl::Status s = e.ForEachAtom(
      [&](RandomSource& r) {
        SampleDataset(d, 2, r);
        return absl::OkStatus();
      },
      [](double) {});
  EXPECT_EQ(s.code(), absl::StatusCode::kResourceExhausted);
}

TEST(EnumeratorTest, ZeroMassBranchesAreSkipped) {
  Enumerator e;
  double total = 0.0;
  ASSERT_TRUE(e.ForEachAtom(
                   [&](RandomSource& r) {
                     r.Bit(1.0);
                     r.Bit(0.25);
                     return absl::OkStatus();
                   },
                   [&](double w) { total += w; })
                  .ok());
  EXPECT_EQ(e.atoms(), 2u);
  EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(EnumeratorTest, GaussianIsNotEnumerable) {
  Enumerator e;
  absl::Status s = e.ForEachAtom(
      [&](RandomSource& r) { return r.Gaussian(1.0).status(); }, [](double) {});
  EXPECT_EQ(s.code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(s.message(), HasSubstr("aussian"));
}

// Property: for random distributions, enumerating one draw reproduces the
// mass function and the total mass is one.
TEST(EnumeratorProperty, SingleDrawMatchesMass) {
  std::mt19937_64 gen(20260101);
  for (int rep = 0; rep < 200; ++rep) {
    const DataDistribution d = RandomDistribution(gen, 1 + rep % 3, 4, 12);
    Enumerator e;
    std::map<Example, double> mass;
    Example current;
    ASSERT_TRUE(e.ForEachAtom(
                     [&](RandomSource& r) {
                       current = SampleExample(d, r);
                       return absl::OkStatus();
                     },
                     [&](double w) { mass[current] += w; })
                    .ok());
    double total = 0.0;
    for (const auto& [z, w] : mass) {
      EXPECT_NEAR(w, d.Mass(z), 1e-15);
      total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

// Property: Monte Carlo frequencies of single draws sit inside a 99% normal
// band around the mass function.
TEST(SampleProperty, FrequenciesMatchMass) {
  std::mt19937_64 gen(7);
  int outside = 0;
  int cells = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const DataDistribution d = RandomDistribution(gen, 2, 3, 6);
    RandomSource r{RngStream(rep)};
    std::map<Example, int> counts;
    constexpr int kN = 20000;
    for (int i = 0; i < kN; ++i) ++counts[SampleExample(d, r)];
    for (size_t i = 0; i < d.size(); ++i) {
      const double p = d.probs()[i];
      const double f = static_cast<double>(counts[d.support()[i]]) / kN;
      ++cells;
      if (std::abs(f - p) > kZ99 * std::sqrt(p * (1 - p) / kN)) ++outside;
    }
  }
  // About 1% of cells may fall outside by chance.
  EXPECT_LE(outside, std::max(3, cells / 20));
}

TEST(RandomSourceTest, DeriveIsDeterministic) {
  RandomSource a{RngStream(1)};
  RandomSource b{RngStream(1)};
  RandomSource da = a.Derive("x", 3);
  RandomSource db = b.Derive("x", 3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(da.UniformIndex(1000), db.UniformIndex(1000));
}

TEST(RandomSourceTest, GaussianMoments) {
  RandomSource r{RngStream(17)};
  double s = 0, s2 = 0;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) {
    const double x = *r.Gaussian(4.0);
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / kN, 0.0, 0.03);
  EXPECT_NEAR(s2 / kN, 4.0, 0.2);
}

}  // namespace
}  // namespace privgames
