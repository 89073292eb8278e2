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

#include "privgames/metrics.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"
#include "boost/math/distributions/normal.hpp"
#include "privgames/status_macros.h"

namespace privgames {
namespace {

Interval Clamp(Interval in, double lo, double hi) {
  return {std::clamp(in.low, lo, hi), std::clamp(in.high, lo, hi)};
}

bool AllHaveGuessBits(std::span<const TrialRecord> records) {
  return std::all_of(records.begin(), records.end(),
                     [](const TrialRecord& r) { return r.guess_bit.has_value(); });
}

// Reports the model (and the known rest of the dataset) into a shared slot
// so the enumeration callback can group atoms by what an adversary sees.
class ViewProbe : public Adversary {
 public:
  explicit ViewProbe(std::shared_ptr<std::string> slot) : slot_(std::move(slot)) {}
  std::string kind() const override { return "VIEW_PROBE"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kRcFixed || v == GameVariant::kRcRan;
  }
  std::unique_ptr<Adversary> Fresh() const override {
    return std::make_unique<ViewProbe>(slot_);
  }
  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    Dataset rest = *obs.known_S;
    std::sort(rest.begin(), rest.end());
    std::string view = Fingerprint(*obs.model);
    for (const Example& x : rest) absl::StrAppend(&view, "#", x.ToString());
    *slot_ = std::move(view);
    return GuessResult{};
  }

 private:
  std::shared_ptr<std::string> slot_;
};

}  // namespace

absl::StatusOr<Interval> WilsonInterval(uint64_t successes, uint64_t trials, double level) {
  if (trials < 1) return absl::InvalidArgumentError("wilson interval needs trials >= 1");
  if (successes > trials) {
    return absl::InvalidArgumentError(
        absl::StrCat("successes ", successes, " exceed trials ", trials));
  }
  if (!(level > 0.0 && level < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("confidence level ", level, " not in (0,1)"));
  }
  const double z =
      boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval out = Clamp({center - half, center + half}, 0.0, 1.0);
  if (successes == 0) out.low = 0.0;
  if (successes == trials) out.high = 1.0;
  out.low = std::min(out.low, p);
  out.high = std::max(out.high, p);
  return out;
}

absl::string_view EstimateModeName(EstimateMode mode) {
  switch (mode) {
    case EstimateMode::kCentered: return "CENTERED";
    case EstimateMode::kConditional: return "CONDITIONAL";
    case EstimateMode::kBaseline: return "BASELINE";
  }
  return "?";
}

absl::StatusOr<EstimateMode> ParseEstimateMode(absl::string_view name) {
  for (EstimateMode m :
       {EstimateMode::kCentered, EstimateMode::kConditional, EstimateMode::kBaseline}) {
    if (EstimateModeName(m) == name) return m;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown estimate mode '", name, "'"));
}

absl::StatusOr<AdvantageEstimate> EstimateAdvantage(std::span<const TrialRecord> records,
                                                    EstimateMode mode, double baseline,
                                                    double level) {
  if (records.empty()) return absl::InvalidArgumentError("no trial records to estimate from");
  AdvantageEstimate est;
  est.mode = mode;
  est.baseline = baseline;
  est.trials = records.size();
  const bool bit_event = AllHaveGuessBits(records);
  for (const TrialRecord& r : records) {
    est.wins += static_cast<uint64_t>(r.win);
    if (!r.secret_bit) continue;
    const bool event = bit_event ? *r.guess_bit == 0 : r.win == 1;
    if (*r.secret_bit == 0) {
      ++est.n_b0;
      est.event_b0 += event ? 1 : 0;
    } else {
      ++est.n_b1;
      est.event_b1 += event ? 1 : 0;
    }
  }
  const double asr = static_cast<double>(est.wins) / static_cast<double>(est.trials);
  switch (mode) {
    case EstimateMode::kCentered: {
      PRIVGAMES_ASSIGN_OR_RETURN(Interval ci, WilsonInterval(est.wins, est.trials, level));
      est.point = 2.0 * asr - 1.0;
      est.ci_low = 2.0 * ci.low - 1.0;
      est.ci_high = 2.0 * ci.high - 1.0;
      break;
    }
    case EstimateMode::kBaseline: {
      if (!(baseline >= 0.0 && baseline < 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("baseline G=", baseline, " must lie in [0,1)"));
      }
      PRIVGAMES_ASSIGN_OR_RETURN(Interval ci, WilsonInterval(est.wins, est.trials, level));
      est.point = (asr - baseline) / (1.0 - baseline);
      est.ci_low = (ci.low - baseline) / (1.0 - baseline);
      est.ci_high = (ci.high - baseline) / (1.0 - baseline);
      break;
    }
    case EstimateMode::kConditional: {
      if (est.n_b0 + est.n_b1 != est.trials) {
        return absl::InvalidArgumentError("conditional mode needs a secret bit in every record");
      }
      if (est.n_b0 == 0) return absl::InvalidArgumentError("conditional cell b=0 is empty");
      if (est.n_b1 == 0) return absl::InvalidArgumentError("conditional cell b=1 is empty");
      PRIVGAMES_ASSIGN_OR_RETURN(Interval c0, WilsonInterval(est.event_b0, est.n_b0, level));
      PRIVGAMES_ASSIGN_OR_RETURN(Interval c1, WilsonInterval(est.event_b1, est.n_b1, level));
      est.point = static_cast<double>(est.event_b0) / static_cast<double>(est.n_b0) -
                  static_cast<double>(est.event_b1) / static_cast<double>(est.n_b1);
      est.ci_low = c0.low - c1.high;
      est.ci_high = c0.high - c1.low;
      break;
    }
  }
  return est;
}

absl::StatusOr<RcMetrics> ComputeRcMetrics(std::span<const TrialRecord> records, double eta,
                                           const DataDistribution& prior, LossKind loss,
                                           double level) {
  if (records.empty()) return absl::InvalidArgumentError("no trial records to estimate from");
  uint64_t ok = 0;
  uint64_t exact = 0;
  for (const TrialRecord& r : records) {
    if (r.game != GameVariant::kRcFixed && r.game != GameVariant::kRcRan) {
      return absl::InvalidArgumentError(absl::StrCat(
          "reconstruction metrics need RC_FIXED or RC_RAN records, got ", GameVariantName(r.game)));
    }
    if (!r.loss_value) return absl::InvalidArgumentError("record without a loss value");
    ok += *r.loss_value <= eta ? 1 : 0;
    exact += r.guess_value && r.secret_value && *r.guess_value == *r.secret_value ? 1 : 0;
  }
  RcMetrics out;
  const double n = static_cast<double>(records.size());
  out.success = static_cast<double>(ok) / n;
  PRIVGAMES_ASSIGN_OR_RETURN(out.success_ci, WilsonInterval(ok, records.size(), level));
  for (const Example& c : prior.support()) {
    double mass = 0.0;
    for (size_t i = 0; i < prior.size(); ++i) {
      if (Loss(loss, prior.support()[i], c) <= eta) mass += prior.probs()[i];
    }
    out.baseline_eq1 = std::max(out.baseline_eq1, mass);
  }
  double collision = 0.0;
  for (double p : prior.probs()) collision += p * p;
  out.adv = static_cast<double>(exact) / n - collision;
  return out;
}

absl::StatusOr<double> DpDistinguishingBound(double epsilon, double delta) {
  if (!(epsilon >= 0.0) || std::isinf(epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat("epsilon must be finite and >= 0, got ", epsilon));
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("delta must lie in [0,1], got ", delta));
  }
  // (e^eps - 1 + 2 delta) / (e^eps + 1), rewritten to stay finite for large eps.
  const double t = std::exp(-epsilon);
  return (1.0 - t + 2.0 * delta * t) / (1.0 + t);
}

absl::StatusOr<double> SumMembershipBound(size_t n) {
  if (n < 4 || n % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("the sum membership bound needs n >= 4 and even, got n=", n));
  }
  return 1.0 / std::sqrt(static_cast<double>(n));
}

absl::StatusOr<ExactOutcome> EnumerateOutcome(const GameDef& game, const Trainer& trainer,
                                              const Adversary& adversary, uint64_t max_atoms) {
  ExactOutcome out;
  const bool bit_game = IsBitGame(game.variant);
  PRIVGAMES_RETURN_IF_ERROR(EnumerateGame(
      game, trainer, adversary,
      [&](const TrialRecord* rec, double w) {
        ++out.atoms;
        if (rec == nullptr) {
          out.degenerate += w;
          return;
        }
        out.p_win += w * rec->win;
        if (rec->guess_value && rec->secret_value && *rec->guess_value == *rec->secret_value) {
          out.p_exact_match += w;
        }
        const int b = rec->secret_bit.value_or(-1);
        const int bhat = rec->guess_bit.value_or(-1);
        out.joint[{b, bhat, rec->win}] += w;
        const bool event = bit_game ? bhat == 0 : rec->win == 1;
        if (b == 0) {
          out.p_b0 += w;
          if (event) out.p_event_b0 += w;
        } else if (b == 1) {
          out.p_b1 += w;
          if (event) out.p_event_b1 += w;
        }
      },
      max_atoms));
  return out;
}

absl::StatusOr<double> AdvantageFromOutcome(const ExactOutcome& o, EstimateMode mode,
                                            double baseline) {
  if (o.degenerate > 0.0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "game has degenerate mass ", o.degenerate, "; exact advantage is undefined"));
  }
  switch (mode) {
    case EstimateMode::kCentered:
      return 2.0 * o.p_win - 1.0;
    case EstimateMode::kBaseline:
      if (!(baseline >= 0.0 && baseline < 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("baseline G=", baseline, " must lie in [0,1)"));
      }
      return (o.p_win - baseline) / (1.0 - baseline);
    case EstimateMode::kConditional:
      if (!(o.p_b0 > 0.0)) return absl::InvalidArgumentError("conditional cell b=0 has no mass");
      if (!(o.p_b1 > 0.0)) return absl::InvalidArgumentError("conditional cell b=1 has no mass");
      return o.p_event_b0 / o.p_b0 - o.p_event_b1 / o.p_b1;
  }
  return absl::InternalError("unhandled estimate mode");
}

absl::StatusOr<double> ExactAdvantage(const GameDef& game, const Trainer& trainer,
                                      const Adversary& adversary, EstimateMode mode,
                                      double baseline) {
  PRIVGAMES_ASSIGN_OR_RETURN(ExactOutcome o, EnumerateOutcome(game, trainer, adversary));
  return AdvantageFromOutcome(o, mode, baseline);
}

absl::StatusOr<double> ExactBayesOptimalRcSuccess(const GameDef& game, const Trainer& trainer,
                                                  uint64_t max_atoms) {
  if (game.variant != GameVariant::kRcFixed && game.variant != GameVariant::kRcRan) {
    return absl::InvalidArgumentError("Bayes-optimal reconstruction needs RC_FIXED or RC_RAN");
  }
  auto slot = std::make_shared<std::string>();
  ViewProbe probe(slot);
  // view -> (secret -> mass)
  absl::flat_hash_map<std::string, absl::flat_hash_map<Example, double>> joint;
  double degenerate = 0.0;
  PRIVGAMES_RETURN_IF_ERROR(EnumerateGame(
      game, trainer, probe,
      [&](const TrialRecord* rec, double w) {
        if (rec == nullptr) {
          degenerate += w;
          return;
        }
        joint[*slot][*rec->secret_value] += w;
      },
      max_atoms));
  if (degenerate > 0.0) {
    return absl::FailedPreconditionError("reconstruction game has degenerate mass");
  }
  const DataDistribution& prior = *game.rc_prior();
  double success = 0.0;
  for (const auto& [view, secrets] : joint) {
    double best = 0.0;
    for (const Example& c : prior.support()) {
      double mass = 0.0;
      for (const auto& [z, w] : secrets) {
        if (Loss(game.loss, z, c) <= game.eta) mass += w;
      }
      best = std::max(best, mass);
    }
    success += best;
  }
  return success;
}

}  // namespace privgames
