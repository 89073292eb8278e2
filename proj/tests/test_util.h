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

// Hand-rolled generators and closed-form oracles shared by the tests. The
// oracles are computed directly from their formulas, independently of the
// library code they check.

#ifndef PRIVGAMES_TESTS_TEST_UTIL_H_
#define PRIVGAMES_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "gtest/gtest.h"
#include "privgames/prob.h"

namespace privgames::testing {

#define PG_ASSERT_OK_AND_ASSIGN(lhs, expr)                    \
  PG_ASSERT_OK_AND_ASSIGN_IMPL(PG_CONCAT(_so_, __LINE__), lhs, expr)
#define PG_ASSERT_OK_AND_ASSIGN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                                 \
  ASSERT_TRUE(tmp.ok()) << tmp.status();             \
  lhs = std::move(*tmp)
#define PG_CONCAT(a, b) PG_CONCAT_INNER(a, b)
#define PG_CONCAT_INNER(a, b) a##b

// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959963984540054;
// Two-sided 99% standard normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

inline std::pair<double, double> WilsonOracle(double s, double n, double z) {
  const double p = s / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

// Binomial(n, p) pmf by the multiplicative recurrence.
inline std::vector<double> BinomialPmf(int n, double p) {
  std::vector<double> pmf(n + 1, 0.0);
  pmf[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k >= 1; --k) pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
    pmf[0] *= 1.0 - p;
  }
  return pmf;
}

// A random finite distribution with `arity` attributes of cardinality up to
// `max_card`, at most `max_support` distinct support points, and strictly
// positive masses.
inline DataDistribution RandomDistribution(std::mt19937_64& gen, size_t arity, int max_card,
                                           size_t max_support) {
  std::uniform_int_distribution<int> card(1, max_card);
  std::vector<AttrValue> cards(arity);
  size_t space = 1;
  for (auto& c : cards) {
    c = card(gen);
    space *= static_cast<size_t>(c);
  }
  std::vector<Example> all;
  for (size_t code = 0; code < space; ++code) {
    Example::Attrs attrs;
    size_t rest = code;
    for (AttrValue c : cards) {
      attrs.push_back(static_cast<AttrValue>(rest % static_cast<size_t>(c)));
      rest /= static_cast<size_t>(c);
    }
    all.emplace_back(attrs);
  }
  std::shuffle(all.begin(), all.end(), gen);
  const size_t k = std::uniform_int_distribution<size_t>(1, std::min(max_support, space))(gen);
  all.resize(k);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) total += (x = u(gen));
  for (double& x : w) x /= total;
  return *DataDistribution::Create(std::move(all), std::move(w));
}

}  // namespace privgames::testing

#endif  // PRIVGAMES_TESTS_TEST_UTIL_H_
