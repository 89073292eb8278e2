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

// Advantage estimation with Wilson intervals, closed-form bounds and the
// exact enumeration oracle.

#ifndef PRIVGAMES_METRICS_H_
#define PRIVGAMES_METRICS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privgames/games.h"
#include "privgames/pipeline.h"
#include "privgames/prob.h"

namespace privgames {

inline constexpr double kDefaultConfidence = 0.95;

struct Interval {
  double low = 0.0;
  double high = 0.0;

  double HalfWidth() const { return 0.5 * (high - low); }
  bool Contains(double x) const { return low <= x && x <= high; }
};

// Wilson score interval for a binomial proportion.
absl::StatusOr<Interval> WilsonInterval(uint64_t successes, uint64_t trials,
                                        double level = kDefaultConfidence);

enum class EstimateMode {
  kCentered,     // 2 Pr[win] - 1
  kConditional,  // Pr[E | b=0] - Pr[E | b=1]
  kBaseline,     // (Pr[win] - G) / (1 - G)
};

absl::string_view EstimateModeName(EstimateMode mode);
absl::StatusOr<EstimateMode> ParseEstimateMode(absl::string_view name);

struct AdvantageEstimate {
  EstimateMode mode = EstimateMode::kCentered;
  double baseline = 0.5;  // G, for kBaseline
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  uint64_t trials = 0;
  uint64_t wins = 0;
  // Conditional cells: trials with b = 0 / b = 1 and how many of each showed
  // the event E.
  uint64_t n_b0 = 0;
  uint64_t n_b1 = 0;
  uint64_t event_b0 = 0;
  uint64_t event_b1 = 0;

  Interval ci() const { return {ci_low, ci_high}; }
};

// In kConditional mode E is "guessed 0" when every record carries a guessed
// bit, and "won" otherwise (attribute and reconstruction games).
absl::StatusOr<AdvantageEstimate> EstimateAdvantage(
    std::span<const TrialRecord> records, EstimateMode mode, double baseline = 0.5,
    double level = kDefaultConfidence);

struct RcMetrics {
  double success = 0.0;
  Interval success_ci;
  // Best success of a data-independent guess: max over candidates c of
  // Pr_{z ~ prior}[loss(z, c) <= eta].
  double baseline_eq1 = 0.0;
  // Exact-match rate minus the prior's collision probability.
  double adv = 0.0;
};

absl::StatusOr<RcMetrics> ComputeRcMetrics(std::span<const TrialRecord> records, double eta,
                                           const DataDistribution& prior, LossKind loss,
                                           double level = kDefaultConfidence);

// Upper bound on the distinguishing advantage of (epsilon, delta)-DP.
absl::StatusOr<double> DpDistinguishingBound(double epsilon, double delta);

// 1/sqrt(n) for the noiseless sum of n fair bits; n >= 4 and even.
absl::StatusOr<double> SumMembershipBound(size_t n);

// Exact outcome probabilities of a game, from full enumeration.
struct ExactOutcome {
  double p_win = 0.0;
  double p_b0 = 0.0;
  double p_b1 = 0.0;
  double p_event_b0 = 0.0;  // Pr[E, b=0]
  double p_event_b1 = 0.0;  // Pr[E, b=1]
  double p_exact_match = 0.0;  // Pr[guess value == secret value]
  double degenerate = 0.0;
  uint64_t atoms = 0;
  // Joint law of (secret bit, guessed bit, win); -1 marks a missing bit.
  std::map<std::tuple<int, int, int>, double> joint;
};

absl::StatusOr<ExactOutcome> EnumerateOutcome(const GameDef& game, const Trainer& trainer,
                                              const Adversary& adversary,
                                              uint64_t max_atoms = 10'000'000);

// Exact advantage in the given mode. Fails when the game has degenerate
// mass, cannot be enumerated, or (kConditional) has a zero-mass cell.
absl::StatusOr<double> ExactAdvantage(const GameDef& game, const Trainer& trainer,
                                      const Adversary& adversary, EstimateMode mode,
                                      double baseline = 0.5);

// Applies `mode` to enumerated outcome probabilities.
absl::StatusOr<double> AdvantageFromOutcome(const ExactOutcome& outcome, EstimateMode mode,
                                            double baseline = 0.5);

// Success of the best possible reconstruction adversary in RC_FIXED /
// RC_RAN: it sees the model (and S) and answers with the posterior-optimal
// candidate from the prior's support.
absl::StatusOr<double> ExactBayesOptimalRcSuccess(const GameDef& game, const Trainer& trainer,
                                                  uint64_t max_atoms = 10'000'000);

}  // namespace privgames

#endif  // PRIVGAMES_METRICS_H_
