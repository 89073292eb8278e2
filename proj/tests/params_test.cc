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

#include "privgames/params.h"

#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace privgames {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(ParseExampleTest, Forms) {
  EXPECT_EQ(*ParseExample("3"), Example::Scalar(3));
  EXPECT_EQ(*ParseExample("(1, 2)|0"), Example({1, 2}, 0));
  EXPECT_EQ(*ParseExample("7|1"), Example({7}, 1));
  EXPECT_EQ(*ParseExample("bot"), Example::Absent());
  EXPECT_FALSE(ParseExample("(1,").ok());
  EXPECT_FALSE(ParseExample("x").ok());
  EXPECT_FALSE(ParseExample("1 2").ok());
}

// Property: ToString output parses back to the same example.
TEST(ParseExampleProperty, RoundTrip) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> v(0, 50);
  for (int rep = 0; rep < 500; ++rep) {
    Example::Attrs attrs;
    const int arity = 1 + rep % 4;
    for (int i = 0; i < arity; ++i) attrs.push_back(v(gen));
    std::optional<AttrValue> label;
    if (rep % 3 == 0) label = v(gen) % 4;
    const Example z(attrs, label);
    auto back = ParseExample(z.ToString());
    ASSERT_TRUE(back.ok()) << z.ToString();
    EXPECT_EQ(*back, z);
  }
}

TEST(ParseDistributionTest, Builtins) {
  auto b = *ParseDistribution("bernoulli(0.25)");
  EXPECT_DOUBLE_EQ(b.Mass(Example::Scalar(1)), 0.25);
  auto u = *ParseDistribution("uniform(8)");
  EXPECT_EQ(u.size(), 8u);
  auto p = *ParseDistribution("point((1,2))");
  EXPECT_DOUBLE_EQ(p.Mass(Example({1, 2})), 1.0);
  auto o = *ParseDistribution("uniform_over((2)|0;(2)|1)");
  EXPECT_DOUBLE_EQ(o.Mass(Example({2}, 1)), 0.5);
  auto m = *ParseDistribution("pmf(0:0.1; 1:0.9)");
  EXPECT_DOUBLE_EQ(m.Mass(Example::Scalar(1)), 0.9);
  auto x = *ParseDistribution("product(uniform(2),uniform(4))");
  EXPECT_EQ(x.size(), 8u);
  auto l = *ParseDistribution("labeled(uniform(3),1,2)");
  EXPECT_DOUBLE_EQ(l.Mass(Example({2}, 1)), 1.0 / 3.0);
}

TEST(ParseDistributionTest, Errors) {
  EXPECT_FALSE(ParseDistribution("bernoulli(2)").ok());
  EXPECT_FALSE(ParseDistribution("pmf(0:0.5)").ok());
  EXPECT_FALSE(ParseDistribution("gauss(1)").ok());
  EXPECT_FALSE(ParseDistribution("uniform(3) trailing").ok());
}

TEST(ParseMixtureTest, UniformComponents) {
  auto m = *ParseMixture("mixture(bernoulli(0.2),bernoulli(0.5),bernoulli(0.8))");
  EXPECT_EQ(m.size(), 3u);
  EXPECT_TRUE(m.IsUniform());
  EXPECT_FALSE(ParseMixture("bernoulli(0.2)").ok());
}

TEST(ParseDatasetTest, Forms) {
  EXPECT_THAT(*ParseDataset("[1;2;bot]"),
              ElementsAre(Example::Scalar(1), Example::Scalar(2), Example::Absent()));
  EXPECT_TRUE(ParseDataset("[]")->empty());
  EXPECT_EQ(ParseDataset("repeat((3)|0,4)")->size(), 4u);
}

TEST(ParseIndexListTest, Forms) {
  EXPECT_THAT(*ParseIndexList("0, 2"), ElementsAre(0u, 2u));
  EXPECT_TRUE(ParseIndexList("")->empty());
  EXPECT_FALSE(ParseIndexList("a").ok());
}

TEST(ParamsTest, ParsesLinesAndComments) {
  auto p = *Params::Parse("# comment\n\nexperiment = MI_NOT_DPD\nn=64\nn=32\n");
  EXPECT_EQ(*p.GetString("experiment", std::nullopt), "MI_NOT_DPD");
  EXPECT_EQ(*p.GetUint("n", std::nullopt), 32u);
  EXPECT_FALSE(Params::Parse("novalue\n").ok());
  EXPECT_FALSE(Params::Parse("=3\n").ok());
}

TEST(ParamsTest, FallbacksAndErrorsNameTheKey) {
  Params p;
  p.Set("trainer.epsilon", "abc");
  EXPECT_EQ(*p.GetDouble("trainer.delta", 1e-5), 1e-5);
  auto bad = p.GetDouble("trainer.epsilon", std::nullopt);
  EXPECT_THAT(bad.status().message(), HasSubstr("trainer.epsilon"));
  auto missing = p.GetInt("n", std::nullopt);
  EXPECT_THAT(missing.status().message(), HasSubstr("missing required parameter 'n'"));
  p.Set("flag", "true");
  EXPECT_TRUE(*p.GetBool("flag", std::nullopt));
  p.Set("neg", "-1");
  EXPECT_FALSE(p.GetUint("neg", std::nullopt).ok());
  EXPECT_EQ(p.GetDistribution("d", "bernoulli(0.5)")->size(), 2u);
}

}  // namespace
}  // namespace privgames
