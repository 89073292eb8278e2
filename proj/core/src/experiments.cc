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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privgames/status_macros.h"

namespace privgames {
namespace {

constexpr char kSigma2Key[] = "sigma2_convention";

absl::Status Premise(absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("theorem premise violated: ", what));
}

class Session {
 public:
  Session(const ExperimentInfo& info, const Params& params, const RunOptions& options,
          ExperimentReport& report)
      : info_(info), params_(params), options_(options), report_(report) {}

  const RunOptions& options() const { return options_; }
  ExperimentReport& report() { return report_; }
  uint64_t attempted() const { return attempted_; }

  absl::StatusOr<std::string> Raw(absl::string_view key) {
    const ParamDoc* doc = nullptr;
    for (const ParamDoc& d : info_.params) {
      if (d.key == key) doc = &d;
    }
    if (doc == nullptr) {
      return absl::InternalError(absl::StrCat(info_.id, " reads undeclared parameter ", key));
    }
    PRIVGAMES_ASSIGN_OR_RETURN(std::string value, params_.GetString(key, doc->fallback));
    Record(key, value);
    return value;
  }

  absl::StatusOr<uint64_t> Uint(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(Params one, Single(key));
    return one.GetUint(key, std::nullopt);
  }
  absl::StatusOr<double> Double(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(Params one, Single(key));
    return one.GetDouble(key, std::nullopt);
  }
  absl::StatusOr<bool> Bool(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(Params one, Single(key));
    return one.GetBool(key, std::nullopt);
  }
  absl::StatusOr<Example> Ex(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(Params one, Single(key));
    return one.GetExample(key, std::nullopt);
  }
  absl::StatusOr<DataDistribution> Dist(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(Params one, Single(key));
    return one.GetDistribution(key, std::nullopt);
  }
  absl::StatusOr<MetaDistribution> Mixture(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(Params one, Single(key));
    return one.GetMixture(key, std::nullopt);
  }
  absl::StatusOr<std::vector<size_t>> Indices(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(Params one, Single(key));
    return one.GetIndexList(key, std::nullopt);
  }
  absl::StatusOr<LossKind> Loss(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::string raw, Raw(key));
    return ParseLossKind(raw);
  }
  absl::StatusOr<Sigma2Convention> Convention() {
    PRIVGAMES_ASSIGN_OR_RETURN(std::string raw, params_.GetString(kSigma2Key, "standard"));
    Record(kSigma2Key, raw);
    return ParseSigma2Convention(raw);
  }
  // A builtin adversary named by a parameter value.
  absl::StatusOr<AdversaryPtr> Adv(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::string kind, Raw(key));
    Params p;
    p.Set("kind", kind);
    absl::StatusOr<AdversaryPtr> adv = BuildAdversary(p, "");
    if (!adv.ok()) return absl::InvalidArgumentError(absl::StrCat(key, ": ", adv.status().message()));
    return adv;
  }
  // A trainer named by kind; NOISY_SUM reads epsilon, delta and the
  // convention when the schema declares them.
  absl::StatusOr<Trainer> Train(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::string kind, Raw(key));
    Params p;
    p.Set("kind", kind);
    if (kind == "NOISY_SUM") {
      PRIVGAMES_ASSIGN_OR_RETURN(std::string eps, Raw("epsilon"));
      PRIVGAMES_ASSIGN_OR_RETURN(std::string delta, Raw("delta"));
      p.Set("epsilon", eps);
      p.Set("delta", delta);
    }
    PRIVGAMES_ASSIGN_OR_RETURN(Sigma2Convention conv, Convention());
    return BuildTrainer(p, "", conv);
  }

  void Record(absl::string_view key, absl::string_view value) {
    for (const auto& [k, v] : report_.params) {
      if (k == key) return;
    }
    report_.params.emplace_back(std::string(key), std::string(value));
  }

  absl::StatusOr<TrialBatch> Run(absl::string_view name, const GameDef& game,
                                 const Trainer& trainer, const Adversary& adversary) {
    const RngStream master = RngStream(options_.master_seed).Derive(name, 0);
    PRIVGAMES_ASSIGN_OR_RETURN(
        TrialBatch batch,
        RunTrials(game, trainer, adversary, options_.trials, master, options_.workers));
    attempted_ += options_.trials;
    report_.degenerate_trials += batch.degenerate;
    if (batch.records.empty()) {
      return absl::ResourceExhaustedError(
          absl::StrCat(name, ": every trial was degenerate"));
    }
    if (options_.keep_trials) report_.trial_logs.push_back({std::string(name), batch.records});
    return batch;
  }

  absl::StatusOr<AdvantageEstimate> Measure(absl::string_view name, const GameDef& game,
                                            const Trainer& trainer, const Adversary& adversary,
                                            EstimateMode mode) {
    PRIVGAMES_ASSIGN_OR_RETURN(TrialBatch batch, Run(name, game, trainer, adversary));
    PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est, EstimateAdvantage(batch.records, mode));
    report_.estimates.push_back({std::string(name), std::string(EstimateModeName(mode)),
                                 est.point, est.ci_low, est.ci_high, est.trials});
    return est;
  }

  // Win rate with its Wilson interval.
  absl::StatusOr<Interval> Rate(absl::string_view name, const GameDef& game,
                                const Trainer& trainer, const Adversary& adversary,
                                double* point) {
    PRIVGAMES_ASSIGN_OR_RETURN(TrialBatch batch, Run(name, game, trainer, adversary));
    uint64_t wins = 0;
    for (const TrialRecord& r : batch.records) wins += static_cast<uint64_t>(r.win);
    PRIVGAMES_ASSIGN_OR_RETURN(Interval ci, WilsonInterval(wins, batch.records.size()));
    *point = static_cast<double>(wins) / static_cast<double>(batch.records.size());
    report_.estimates.push_back(
        {std::string(name), "RATE", *point, ci.low, ci.high, batch.records.size()});
    return ci;
  }

  void AddValue(absl::string_view name, absl::string_view mode, double value) {
    report_.estimates.push_back({std::string(name), std::string(mode), value, value, value, 0});
  }

  absl::StatusOr<double> Exact(absl::string_view name, const GameDef& game,
                               const Trainer& trainer, const Adversary& adversary,
                               EstimateMode mode) {
    PRIVGAMES_ASSIGN_OR_RETURN(double v, ExactAdvantage(game, trainer, adversary, mode));
    AddValue(name, absl::StrCat("EXACT_", EstimateModeName(mode)), v);
    return v;
  }

  void AddCheck(absl::string_view name, Verdict verdict, std::string detail) {
    report_.checks.push_back({std::string(name), verdict, std::move(detail)});
  }

 private:
  absl::StatusOr<Params> Single(absl::string_view key) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::string raw, Raw(key));
    Params one;
    one.Set(key, raw);
    return one;
  }

  const ExperimentInfo& info_;
  const Params& params_;
  const RunOptions& options_;
  ExperimentReport& report_;
  uint64_t attempted_ = 0;
};

std::string Fmt(double x) { return absl::StrFormat("%.10g", x); }

std::string IntervalText(const Interval& i) {
  return absl::StrCat("[", Fmt(i.low), ", ", Fmt(i.high), "]");
}

Interval Point(double x) { return {x, x}; }

GameDef MakeGame(GameVariant v, size_t n) {
  GameDef g;
  g.variant = v;
  g.n = n;
  return g;
}

absl::Status RequireCompatible(const GameDef& inner_game, const Adversary& inner) {
  absl::Status s = CheckCompatible(inner_game, inner);
  if (!s.ok()) {
    return absl::FailedPreconditionError(
        absl::StrCat("inner adversary for ", GameVariantName(inner_game.variant), ": ",
                     s.message()));
  }
  return absl::OkStatus();
}

void CheckUpper(Session& s, absl::string_view name, const AdvantageEstimate& est, double bound) {
  s.AddCheck(name, CheckLessEqual(est.ci(), Point(bound)),
             absl::StrCat("CI ", IntervalText(est.ci()), " vs bound ", Fmt(bound)));
}

void CheckAtLeast(Session& s, absl::string_view name, const AdvantageEstimate& est,
                  double threshold) {
  s.AddCheck(name, CheckLessEqual(Point(threshold), est.ci()),
             absl::StrCat("CI ", IntervalText(est.ci()), " vs threshold ", Fmt(threshold),
                          " (artifact policy)"));
}

void CheckPerfect(Session& s, absl::string_view name, const AdvantageEstimate& est) {
  s.AddCheck(name, est.wins == est.trials ? Verdict::kPass : Verdict::kFail,
             absl::StrCat(est.wins, " of ", est.trials, " trials won"));
}

void CheckExactPair(Session& s, absl::string_view name, double a, double b) {
  s.AddCheck(name, CheckExactEqual(a, b),
             absl::StrFormat("%.17g vs %.17g (|diff| = %.3g)", a, b, std::abs(a - b)));
}

// Exact enumeration where it is possible; other failures propagate.
absl::StatusOr<std::optional<double>> TryExact(Session& s, absl::string_view name,
                                               const GameDef& game, const Trainer& trainer,
                                               const Adversary& adversary, EstimateMode mode) {
  absl::StatusOr<double> v = s.Exact(name, game, trainer, adversary, mode);
  if (v.ok()) return std::optional<double>(*v);
  if (absl::IsFailedPrecondition(v.status()) || absl::IsResourceExhausted(v.status())) {
    s.AddCheck(absl::StrCat(name, " skipped"), Verdict::kPass,
               std::string(v.status().message()));
    return std::optional<double>();
  }
  return v.status();
}

absl::StatusOr<GameDef> InformedSumGame(size_t n) {
  GameDef g = MakeGame(GameVariant::kMiInformed, n);
  PRIVGAMES_ASSIGN_OR_RETURN(g.dist, DataDistribution::Bernoulli(0.5));
  return g;
}

absl::StatusOr<double> SumBound(size_t n) {
  absl::StatusOr<double> bound = SumMembershipBound(n);
  if (!bound.ok()) return Premise(bound.status().message());
  return bound;
}

// The resilient side shared by the sum-based separations.
absl::Status SumMembershipSide(Session& s, size_t n, double bound) {
  PRIVGAMES_ASSIGN_OR_RETURN(GameDef mi, InformedSumGame(n));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer sum, Trainer::Sum());
  AdversaryPtr bayes = MakeBayesSumMi();
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est,
                             s.Measure("mi_advantage", mi, sum, *bayes, EstimateMode::kCentered));
  CheckUpper(s, "mi_advantage <= 1/sqrt(n)", est, bound);
  return absl::OkStatus();
}

absl::Status RunMiNotDpd(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double bound, SumBound(n));
  s.report().bound = bound;
  PRIVGAMES_RETURN_IF_ERROR(SumMembershipSide(s, n, bound));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer sum, Trainer::Sum());
  AdversaryPtr dpd = MakeDpdSumExact();
  PRIVGAMES_ASSIGN_OR_RETURN(
      AdvantageEstimate est,
      s.Measure("dpd_advantage", MakeGame(GameVariant::kDpd, n), sum, *dpd,
                EstimateMode::kCentered));
  CheckPerfect(s, "dpd_advantage == 1", est);
  return absl::OkStatus();
}

absl::Status RunMiNotPi(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double threshold, s.Double("threshold"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double bound, SumBound(n));
  s.report().bound = bound;
  PRIVGAMES_RETURN_IF_ERROR(SumMembershipSide(s, n, bound));
  GameDef pi = MakeGame(GameVariant::kPiGen, n);
  PRIVGAMES_ASSIGN_OR_RETURN(pi.dist, s.Dist("dist0"));
  PRIVGAMES_ASSIGN_OR_RETURN(pi.dist_alt, s.Dist("dist1"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer sum, Trainer::Sum());
  AdversaryPtr mean = MakePiMean();
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est,
                             s.Measure("pi_advantage", pi, sum, *mean, EstimateMode::kCentered));
  CheckAtLeast(s, "pi_advantage >= threshold", est, threshold);
  return absl::OkStatus();
}

absl::Status RunMiNotRc(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double bound, SumBound(n));
  s.report().bound = bound;
  PRIVGAMES_RETURN_IF_ERROR(SumMembershipSide(s, n, bound));
  GameDef rc = MakeGame(GameVariant::kRcRan, n);
  PRIVGAMES_ASSIGN_OR_RETURN(rc.dist, DataDistribution::Bernoulli(0.5));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer sum, Trainer::Sum());
  AdversaryPtr subtract = MakeRcSumSubtract();
  PRIVGAMES_ASSIGN_OR_RETURN(TrialBatch batch, s.Run("rc_success", rc, sum, *subtract));
  PRIVGAMES_ASSIGN_OR_RETURN(RcMetrics m,
                             ComputeRcMetrics(batch.records, rc.eta, *rc.dist, rc.loss));
  s.report().estimates.push_back({"rc_success", "RATE", m.success, m.success_ci.low,
                                  m.success_ci.high, batch.records.size()});
  s.AddValue("rc_baseline", "RC_BASELINE", m.baseline_eq1);
  s.AddValue("rc_advantage", "RC_COLLISION", m.adv);
  uint64_t wins = 0;
  for (const TrialRecord& r : batch.records) wins += static_cast<uint64_t>(r.win);
  s.AddCheck("rc_success == 1", wins == batch.records.size() ? Verdict::kPass : Verdict::kFail,
             absl::StrCat(wins, " of ", batch.records.size(), " reconstructions exact"));
  return absl::OkStatus();
}

// Exact Pr[x in S] for S ~ D^n, x ~ D.
absl::StatusOr<double> ExactMembershipMass(const DataDistribution& dist, size_t n) {
  Enumerator e;
  bool hit = false;
  double mass = 0.0;
  PRIVGAMES_RETURN_IF_ERROR(e.ForEachAtom(
      [&](RandomSource& rng) {
        Dataset S = SampleDataset(dist, n, rng);
        Example x = SampleExample(dist, rng);
        hit = std::find(S.begin(), S.end(), x) != S.end();
        return absl::OkStatus();
      },
      [&](double w) {
        if (hit) mass += w;
      }));
  return mass;
}

absl::Status RunPiNotMi(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t support, s.Uint("support"));
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution d,
                             DataDistribution::UniformRange(static_cast<AttrValue>(support)));
  const Trainer projector = Trainer::FeatureProjector();
  s.report().bound = 0.0;

  GameDef mi = MakeGame(GameVariant::kMi, n);
  mi.dist = d;
  AdversaryPtr member = MakeMiSetMember();
  PRIVGAMES_ASSIGN_OR_RETURN(double mi_exact, s.Exact("mi_advantage_exact", mi, projector,
                                                      *member, EstimateMode::kCentered));
  PRIVGAMES_ASSIGN_OR_RETURN(double in_s, ExactMembershipMass(d, n));
  s.AddValue("pr_x_in_S_exact", "EXACT_RATE", in_s);
  CheckExactPair(s, "mi_advantage_exact == 1 - Pr[x in S]", mi_exact, 1.0 - in_s);
  PRIVGAMES_RETURN_IF_ERROR(
      s.Measure("mi_advantage", mi, projector, *member, EstimateMode::kCentered).status());

  GameDef pi = MakeGame(GameVariant::kPiGen, n);
  pi.dist = d.Labeled(0, 2);
  pi.dist_alt = d.Labeled(1, 2);
  AdversaryPtr vote = MakePiLabelVote();
  PRIVGAMES_ASSIGN_OR_RETURN(double pi_exact, s.Exact("pi_advantage_exact", pi, projector,
                                                      *vote, EstimateMode::kCentered));
  CheckExactPair(s, "pi_advantage_exact == 0", pi_exact, 0.0);
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate pi_est,
                             s.Measure("pi_advantage", pi, projector, *vote,
                                       EstimateMode::kCentered));
  s.AddCheck("pi_advantage CI contains 0", pi_est.ci().Contains(0.0) ? Verdict::kPass
                                                                     : Verdict::kFail,
             absl::StrCat("CI ", IntervalText(pi_est.ci())));
  return absl::OkStatus();
}

absl::Status RunRcNotDpd(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution prior, s.Dist("prior"));
  PRIVGAMES_ASSIGN_OR_RETURN(Example z0, s.Ex("z0"));
  PRIVGAMES_ASSIGN_OR_RETURN(Example z1, s.Ex("z1"));
  PRIVGAMES_ASSIGN_OR_RETURN(Example fill, s.Ex("fill"));
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  const Trainer projector = Trainer::FeatureProjector();

  GameDef rc = MakeGame(GameVariant::kRcFixed, n);
  rc.prior = prior;
  rc.fixed_S = Dataset(n - 1, fill);
  PRIVGAMES_ASSIGN_OR_RETURN(double bayes, ExactBayesOptimalRcSuccess(rc, projector));
  s.AddValue("rc_bayes_success_exact", "EXACT_RATE", bayes);
  double baseline = 0.0;
  for (const Example& c : prior.support()) {
    double mass = 0.0;
    for (size_t i = 0; i < prior.size(); ++i) {
      if (Loss(rc.loss, prior.support()[i], c) <= rc.eta) mass += prior.probs()[i];
    }
    baseline = std::max(baseline, mass);
  }
  s.AddValue("rc_baseline", "RC_BASELINE", baseline);
  s.report().bound = baseline;
  CheckExactPair(s, "rc_bayes_success_exact == baseline", bayes, baseline);

  GameDef dpd = MakeGame(GameVariant::kDpd, n);
  AdversaryPtr member = MakeDpdSetMember(z0, z1, fill);
  PRIVGAMES_ASSIGN_OR_RETURN(double dpd_exact, s.Exact("dpd_advantage_exact", dpd, projector,
                                                       *member, EstimateMode::kCentered));
  CheckExactPair(s, "dpd_advantage_exact == 1", dpd_exact, 1.0);
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est, s.Measure("dpd_advantage", dpd, projector,
                                                              *member, EstimateMode::kCentered));
  CheckPerfect(s, "dpd_advantage == 1", est);
  return absl::OkStatus();
}

absl::StatusOr<Trainer> NoisySumFrom(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const double eps, s.Double("epsilon"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double delta, s.Double("delta"));
  PRIVGAMES_ASSIGN_OR_RETURN(Sigma2Convention conv, s.Convention());
  return Trainer::NoisySum(eps, delta, 0, conv);
}

absl::Status RunDpdNotPi(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double threshold, s.Double("threshold"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer noisy, NoisySumFrom(s));
  PRIVGAMES_ASSIGN_OR_RETURN(const double bound,
                             DpDistinguishingBound(noisy.epsilon(), noisy.delta()));
  s.report().bound = bound;
  s.AddValue("sigma2", "VALUE", noisy.sigma2());
  AdversaryPtr dpd = MakeDpdSumExact();
  PRIVGAMES_ASSIGN_OR_RETURN(
      AdvantageEstimate dpd_est,
      s.Measure("dpd_advantage", MakeGame(GameVariant::kDpd, n), noisy, *dpd,
                EstimateMode::kCentered));
  CheckUpper(s, "dpd_advantage <= dp bound", dpd_est, bound);
  GameDef pi = MakeGame(GameVariant::kPiGen, n);
  PRIVGAMES_ASSIGN_OR_RETURN(pi.dist, s.Dist("dist0"));
  PRIVGAMES_ASSIGN_OR_RETURN(pi.dist_alt, s.Dist("dist1"));
  AdversaryPtr mean = MakePiMean();
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate pi_est,
                             s.Measure("pi_advantage", pi, noisy, *mean, EstimateMode::kCentered));
  CheckAtLeast(s, "pi_advantage >= threshold", pi_est, threshold);
  return absl::OkStatus();
}

absl::Status RunDpBound(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer noisy, NoisySumFrom(s));
  PRIVGAMES_ASSIGN_OR_RETURN(const double bound,
                             DpDistinguishingBound(noisy.epsilon(), noisy.delta()));
  s.report().bound = bound;
  s.AddValue("sigma2", "VALUE", noisy.sigma2());
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution coin, DataDistribution::Bernoulli(0.5));
  std::vector<std::pair<std::string, AdversaryPtr>> adversaries;
  adversaries.emplace_back("dpd_sum_exact", MakeDpdSumExact());
  adversaries.emplace_back("dpd_from_mi", MakeDpdFromMi(MakeBayesSumMi(), coin));
  adversaries.emplace_back(
      "dpd_from_rc", MakeDpdFromRc(MakeRcSumSubtract(), coin, Dataset(n - 1, Example::Scalar(0)),
                                   LossKind::kDiscrete, 0.0));
  const GameDef dpd = MakeGame(GameVariant::kDpd, n);
  for (const auto& [name, adv] : adversaries) {
    PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est,
                               s.Measure(absl::StrCat(name, "_advantage"), dpd, noisy, *adv,
                                         EstimateMode::kCentered));
    CheckUpper(s, absl::StrCat(name, "_advantage <= dp bound"), est, bound);
  }
  return absl::OkStatus();
}

// Attribute-game instance over `dist` with projections from the session.
absl::StatusOr<GameDef> AttributeGame(Session& s, GameVariant v, const DataDistribution& dist,
                                      size_t n) {
  GameDef g = MakeGame(v, n);
  g.dist = dist;
  PRIVGAMES_ASSIGN_OR_RETURN(g.phi, s.Indices("phi"));
  PRIVGAMES_ASSIGN_OR_RETURN(g.pi_proj, s.Indices("pi"));
  PRIVGAMES_RETURN_IF_ERROR(Validate(g));
  return g;
}

absl::Status RunMiToAi(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution dist, s.Dist("dist"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, s.Train("trainer"));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr inner, s.Adv("inner"));
  PRIVGAMES_ASSIGN_OR_RETURN(const bool exact, s.Bool("exact"));
  PRIVGAMES_ASSIGN_OR_RETURN(GameDef ai, AttributeGame(s, GameVariant::kAi, dist, n));
  PRIVGAMES_RETURN_IF_ERROR(RequireCompatible(ai, *inner));
  GameDef mi = MakeGame(GameVariant::kMiSampled, n);
  mi.dist = dist;
  AdversaryPtr wrapped = MakeMiFromAi(inner->Fresh(), ai.phi, ai.pi_proj);
  s.report().constant_c = 1.0;

  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate ai_est, s.Measure("ai_advantage", ai, trainer,
                                                                 *inner, EstimateMode::kConditional));
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate mi_est, s.Measure("mi_advantage", mi, trainer,
                                                                 *wrapped, EstimateMode::kConditional));
  s.report().bound = ai_est.point;
  s.AddCheck("mi_advantage ~= ai_advantage", CheckClose(mi_est.ci(), ai_est.ci()),
             absl::StrCat(IntervalText(mi_est.ci()), " vs ", IntervalText(ai_est.ci())));
  if (exact) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> ai_x,
                               TryExact(s, "ai_advantage_exact", ai, trainer, *inner,
                                        EstimateMode::kConditional));
    PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> mi_x,
                               TryExact(s, "mi_advantage_exact", mi, trainer, *wrapped,
                                        EstimateMode::kConditional));
    if (ai_x && mi_x) CheckExactPair(s, "mi_advantage_exact == ai_advantage_exact", *mi_x, *ai_x);
  }
  return absl::OkStatus();
}

// Number of pi-values completing each phi-view; every view must have the
// same count and phi, pi must cover all attributes.
absl::StatusOr<size_t> CompletionCount(const GameDef& ai) {
  const DataDistribution& d = *ai.dist;
  const size_t arity = d.schema().arity();
  absl::flat_hash_set<size_t> covered(ai.phi.begin(), ai.phi.end());
  covered.insert(ai.pi_proj.begin(), ai.pi_proj.end());
  if (covered.size() != arity) {
    return Premise("phi and pi must together cover every attribute");
  }
  absl::flat_hash_map<Example, absl::flat_hash_set<Example>> completions;
  for (const Example& z : d.support()) {
    completions[Project(z, ai.phi)].insert(Project(z, ai.pi_proj));
  }
  std::optional<size_t> m;
  for (const auto& [view, values] : completions) {
    if (m && *m != values.size()) {
      return Premise("every phi-view must admit the same number m of completions");
    }
    m = values.size();
  }
  return m.value_or(0);
}

absl::Status RunAiToMi(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution dist, s.Dist("dist"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, s.Train("trainer"));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr inner, s.Adv("inner"));
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string scheme_name, s.Raw("scheme"));
  PRIVGAMES_ASSIGN_OR_RETURN(const bool exact, s.Bool("exact"));
  AiFromMiScheme scheme;
  if (scheme_name == "sample") {
    scheme = AiFromMiScheme::kSample;
  } else if (scheme_name == "enumerate") {
    scheme = AiFromMiScheme::kEnumerate;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("scheme: expected sample or enumerate, got '", scheme_name, "'"));
  }
  PRIVGAMES_ASSIGN_OR_RETURN(GameDef ai, AttributeGame(s, GameVariant::kAi, dist, n));
  PRIVGAMES_ASSIGN_OR_RETURN(const size_t m, CompletionCount(ai));
  GameDef mi = MakeGame(GameVariant::kMiSampled, n);
  mi.dist = dist;
  PRIVGAMES_RETURN_IF_ERROR(RequireCompatible(mi, *inner));
  AdversaryPtr wrapped = MakeAiFromMi(inner->Fresh(), scheme);
  const double c = 1.0 / static_cast<double>(m);
  s.report().constant_c = c;
  s.AddValue("m", "VALUE", static_cast<double>(m));

  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate mi_est, s.Measure("mi_advantage", mi, trainer,
                                                                 *inner, EstimateMode::kConditional));
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate ai_est, s.Measure("ai_advantage", ai, trainer,
                                                                 *wrapped, EstimateMode::kConditional));
  s.report().bound = c * mi_est.point;
  const Interval scaled{c * mi_est.ci_low, c * mi_est.ci_high};
  s.AddCheck("ai_advantage ~= mi_advantage / m", CheckClose(ai_est.ci(), scaled),
             absl::StrCat(IntervalText(ai_est.ci()), " vs ", IntervalText(scaled)));
  if (exact) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> mi_x,
                               TryExact(s, "mi_advantage_exact", mi, trainer, *inner,
                                        EstimateMode::kConditional));
    PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> ai_x,
                               TryExact(s, "ai_advantage_exact", ai, trainer, *wrapped,
                                        EstimateMode::kConditional));
    if (ai_x && mi_x) {
      CheckExactPair(s, "ai_advantage_exact == mi_advantage_exact / m", *ai_x, c * *mi_x);
    }
  }
  return absl::OkStatus();
}

double MaxJointGap(const ExactOutcome& a, const ExactOutcome& b) {
  double gap = 0.0;
  for (const auto& [key, w] : a.joint) {
    auto it = b.joint.find(key);
    gap = std::max(gap, std::abs(w - (it == b.joint.end() ? 0.0 : it->second)));
  }
  for (const auto& [key, w] : b.joint) {
    if (!a.joint.contains(key)) gap = std::max(gap, std::abs(w));
  }
  return gap;
}

absl::Status RunDpdToMi(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution dist, s.Dist("dist"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, s.Train("trainer"));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr inner, s.Adv("inner"));
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t exact_n, s.Uint("exact_n"));
  GameDef mi = MakeGame(GameVariant::kMi, n);
  mi.dist = dist;
  PRIVGAMES_RETURN_IF_ERROR(RequireCompatible(mi, *inner));
  AdversaryPtr wrapped = MakeDpdFromMi(inner->Fresh(), dist);
  const GameDef dpd = MakeGame(GameVariant::kDpd, n);
  s.report().constant_c = 1.0;

  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate mi_est, s.Measure("mi_advantage", mi, trainer,
                                                                 *inner, EstimateMode::kCentered));
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate dpd_est, s.Measure("dpd_advantage", dpd, trainer,
                                                                  *wrapped, EstimateMode::kCentered));
  s.report().bound = mi_est.point;
  s.AddCheck("dpd_advantage ~= mi_advantage", CheckClose(dpd_est.ci(), mi_est.ci()),
             absl::StrCat(IntervalText(dpd_est.ci()), " vs ", IntervalText(mi_est.ci())));
  if (exact_n > 0) {
    GameDef mi_small = mi;
    mi_small.n = exact_n;
    const GameDef dpd_small = MakeGame(GameVariant::kDpd, exact_n);
    absl::StatusOr<ExactOutcome> mi_o = EnumerateOutcome(mi_small, trainer, *inner);
    absl::StatusOr<ExactOutcome> dpd_o = EnumerateOutcome(dpd_small, trainer, *wrapped);
    if (!mi_o.ok() || !dpd_o.ok()) {
      const absl::Status& bad = mi_o.ok() ? dpd_o.status() : mi_o.status();
      if (!absl::IsFailedPrecondition(bad) && !absl::IsResourceExhausted(bad)) return bad;
      s.AddCheck("exact oracle skipped", Verdict::kPass, std::string(bad.message()));
      return absl::OkStatus();
    }
    PRIVGAMES_ASSIGN_OR_RETURN(double mi_x, AdvantageFromOutcome(*mi_o, EstimateMode::kCentered));
    PRIVGAMES_ASSIGN_OR_RETURN(double dpd_x,
                               AdvantageFromOutcome(*dpd_o, EstimateMode::kCentered));
    s.AddValue("mi_advantage_exact", "EXACT_CENTERED", mi_x);
    s.AddValue("dpd_advantage_exact", "EXACT_CENTERED", dpd_x);
    CheckExactPair(s, "dpd_advantage_exact == mi_advantage_exact", dpd_x, mi_x);
    const double gap = MaxJointGap(*mi_o, *dpd_o);
    s.AddCheck("joint (b, guess) laws identical", gap <= kExactTolerance ? Verdict::kPass
                                                                        : Verdict::kFail,
               absl::StrFormat("max |difference| = %.3g", gap));
  }
  return absl::OkStatus();
}

// Worst case over z0 in the prior's support of Pr_{z1 ~ prior}[loss > 2 eta].
double Alpha(const DataDistribution& prior, LossKind loss, double eta) {
  double alpha = 1.0;
  for (size_t i = 0; i < prior.size(); ++i) {
    if (prior.probs()[i] <= 0.0) continue;
    double far = 0.0;
    for (size_t j = 0; j < prior.size(); ++j) {
      if (Loss(loss, prior.support()[i], prior.support()[j]) > 2.0 * eta) far += prior.probs()[j];
    }
    alpha = std::min(alpha, far);
  }
  return alpha;
}

// Success rate gamma of the reconstruction adversary: exact when the game
// enumerates, else the Monte Carlo interval.
struct Gamma {
  double point = 0.0;
  Interval ci;
  bool exact = false;
};

absl::StatusOr<Gamma> MeasureGamma(Session& s, const GameDef& rc, const Trainer& trainer,
                                   const Adversary& inner) {
  Gamma g;
  PRIVGAMES_ASSIGN_OR_RETURN(g.ci, s.Rate("rc_success", rc, trainer, inner, &g.point));
  absl::StatusOr<ExactOutcome> o = EnumerateOutcome(rc, trainer, inner);
  if (o.ok() && o->degenerate == 0.0) {
    s.AddValue("rc_success_exact", "EXACT_RATE", o->p_win);
    g.point = o->p_win;
    g.ci = Point(o->p_win);
    g.exact = true;
  } else if (!o.ok() && !absl::IsFailedPrecondition(o.status()) &&
             !absl::IsResourceExhausted(o.status())) {
    return o.status();
  }
  return g;
}

absl::Status RunDpdToRc(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution prior, s.Dist("prior"));
  PRIVGAMES_ASSIGN_OR_RETURN(Example fill, s.Ex("fill"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double eta, s.Double("eta"));
  PRIVGAMES_ASSIGN_OR_RETURN(const LossKind loss, s.Loss("loss"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, s.Train("trainer"));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr inner, s.Adv("inner"));
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  const Dataset S(n - 1, fill);
  GameDef rc = MakeGame(GameVariant::kRcFixed, n);
  rc.prior = prior;
  rc.fixed_S = S;
  rc.eta = eta;
  rc.loss = loss;
  PRIVGAMES_RETURN_IF_ERROR(RequireCompatible(rc, *inner));

  const double alpha = Alpha(prior, loss, eta);
  s.AddValue("alpha_exact", "EXACT_RATE", alpha);
  PRIVGAMES_ASSIGN_OR_RETURN(Gamma gamma, MeasureGamma(s, rc, trainer, *inner));
  if (gamma.ci.high < 0.5) return Premise("gamma >= 1/2");
  const double c = 2.0 * alpha;
  s.report().constant_c = c;
  const double bound = c * (gamma.point - 0.5);
  s.report().bound = bound;
  const Interval bound_ci{c * (gamma.ci.low - 0.5), c * (gamma.ci.high - 0.5)};

  AdversaryPtr wrapped = MakeDpdFromRc(inner->Fresh(), prior, S, loss, eta);
  const GameDef dpd = MakeGame(GameVariant::kDpd, n);
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est, s.Measure("dpd_advantage", dpd, trainer,
                                                              *wrapped, EstimateMode::kCentered));
  PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> exact,
                             TryExact(s, "dpd_advantage_exact", dpd, trainer, *wrapped,
                                      EstimateMode::kCentered));
  if (exact && gamma.exact) {
    s.AddCheck("dpd_advantage_exact >= 2 alpha (gamma - 1/2)",
               CheckExactLessEqual(bound, *exact),
               absl::StrFormat("%.17g >= %.17g", *exact, bound));
  } else {
    s.AddCheck("dpd_advantage >= 2 alpha (gamma - 1/2)", CheckLessEqual(bound_ci, est.ci()),
               absl::StrCat(IntervalText(est.ci()), " vs ", IntervalText(bound_ci)));
  }
  return absl::OkStatus();
}

absl::Status RunSmiToRc(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(Example fill, s.Ex("fill"));
  PRIVGAMES_ASSIGN_OR_RETURN(Example z0, s.Ex("z0"));
  PRIVGAMES_ASSIGN_OR_RETURN(Example z1, s.Ex("z1"));
  PRIVGAMES_ASSIGN_OR_RETURN(const double eta, s.Double("eta"));
  PRIVGAMES_ASSIGN_OR_RETURN(const LossKind loss, s.Loss("loss"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, s.Train("trainer"));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr inner, s.Adv("inner"));
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (!(eta < Loss(loss, z0, z1) / 2.0)) return Premise("eta < loss(z0, z1) / 2");
  const Dataset S(n - 1, fill);
  GameDef rc = MakeGame(GameVariant::kRcFixed, n);
  PRIVGAMES_ASSIGN_OR_RETURN(rc.prior, DataDistribution::Uniform({z0, z1}));
  rc.fixed_S = S;
  rc.eta = eta;
  rc.loss = loss;
  PRIVGAMES_RETURN_IF_ERROR(RequireCompatible(rc, *inner));
  PRIVGAMES_ASSIGN_OR_RETURN(Gamma gamma, MeasureGamma(s, rc, trainer, *inner));
  const double bound = 2.0 * gamma.point - 1.0;
  s.report().bound = bound;
  s.report().constant_c = 2.0;
  const Interval bound_ci{2.0 * gamma.ci.low - 1.0, 2.0 * gamma.ci.high - 1.0};

  GameDef smi = MakeGame(GameVariant::kSmi, n);
  smi.fixed_S = S;
  smi.fixed_z0 = z0;
  smi.fixed_z1 = z1;
  AdversaryPtr wrapped = MakeSmiFromRc(inner->Fresh(), loss);
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est, s.Measure("smi_advantage", smi, trainer,
                                                              *wrapped, EstimateMode::kCentered));
  PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> exact,
                             TryExact(s, "smi_advantage_exact", smi, trainer, *wrapped,
                                      EstimateMode::kCentered));
  if (exact && gamma.exact) {
    s.AddCheck("smi_advantage_exact >= 2 gamma - 1", CheckExactLessEqual(bound, *exact),
               absl::StrFormat("%.17g >= %.17g", *exact, bound));
  } else {
    s.AddCheck("smi_advantage >= 2 gamma - 1", CheckLessEqual(bound_ci, est.ci()),
               absl::StrCat(IntervalText(est.ci()), " vs ", IntervalText(bound_ci)));
  }
  return absl::OkStatus();
}

absl::Status RunRcToMi(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution dist, s.Dist("dist"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, s.Train("trainer"));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr inner, s.Adv("inner"));
  PRIVGAMES_ASSIGN_OR_RETURN(const bool exact, s.Bool("exact"));
  GameDef mi = MakeGame(GameVariant::kMi, n);
  mi.dist = dist;
  PRIVGAMES_RETURN_IF_ERROR(RequireCompatible(mi, *inner));
  // The informed attribute game with nothing revealed and everything to
  // infer; its conditional advantage is the reconstruction advantage.
  GameDef informed = MakeGame(GameVariant::kAiInformed, n);
  informed.dist = dist;
  for (size_t i = 0; i < dist.schema().arity(); ++i) informed.pi_proj.push_back(i);
  GameDef rc_ran = MakeGame(GameVariant::kRcRan, n);
  rc_ran.dist = dist;
  AdversaryPtr wrapped = MakeRcFromMi(inner->Fresh(), dist);
  const double c = 1.0 / static_cast<double>(dist.size());
  s.report().constant_c = c;
  double collision = 0.0;
  for (double p : dist.probs()) collision += p * p;

  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate mi_est, s.Measure("mi_advantage", mi, trainer,
                                                                 *inner, EstimateMode::kConditional));
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate rc_est,
                             s.Measure("rc_advantage", informed, trainer, *wrapped,
                                       EstimateMode::kConditional));
  s.report().bound = c * mi_est.point;
  const Interval scaled{c * mi_est.ci_low, c * mi_est.ci_high};
  s.AddCheck("rc_advantage ~= mi_advantage / |supp(D)|", CheckClose(rc_est.ci(), scaled),
             absl::StrCat(IntervalText(rc_est.ci()), " vs ", IntervalText(scaled)));
  PRIVGAMES_ASSIGN_OR_RETURN(TrialBatch ran, s.Run("rc_ran", rc_ran, trainer, *wrapped));
  PRIVGAMES_ASSIGN_OR_RETURN(RcMetrics m,
                             ComputeRcMetrics(ran.records, rc_ran.eta, dist, rc_ran.loss));
  s.AddValue("rc_ran_collision_advantage", "RC_COLLISION", m.adv);
  if (exact) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> mi_x,
                               TryExact(s, "mi_advantage_exact", mi, trainer, *inner,
                                        EstimateMode::kConditional));
    PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> rc_x,
                               TryExact(s, "rc_advantage_exact", informed, trainer, *wrapped,
                                        EstimateMode::kConditional));
    if (mi_x && rc_x) {
      CheckExactPair(s, "rc_advantage_exact == mi_advantage_exact / |supp(D)|", *rc_x,
                     c * *mi_x);
    }
    absl::StatusOr<ExactOutcome> o = EnumerateOutcome(rc_ran, trainer, *wrapped);
    if (o.ok() && o->degenerate == 0.0) {
      s.AddValue("rc_ran_collision_advantage_exact", "EXACT_RC_COLLISION",
                 o->p_exact_match - collision);
    }
  }
  return absl::OkStatus();
}

struct Decomposition {
  double mm = 0.0;
  std::vector<double> mi;
  std::vector<std::vector<double>> pi;  // pi[i][j], i != j
};

double Mean(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

absl::Status RunCaseStudyMm(Session& s) {
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, s.Uint("n"));
  PRIVGAMES_ASSIGN_OR_RETURN(MetaDistribution comps, s.Mixture("components"));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, s.Train("trainer"));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr adv, s.Adv("adversary"));
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t exact_n, s.Uint("exact_n"));
  PRIVGAMES_ASSIGN_OR_RETURN(std::string exact_raw, s.Raw("exact_components"));
  const size_t K = comps.size();
  if (K < 2) return absl::InvalidArgumentError("components: mixture needs K >= 2");

  auto mm_game = [](const MetaDistribution& meta, size_t size) {
    GameDef g = MakeGame(GameVariant::kMm, size);
    g.meta = meta;
    return g;
  };
  auto mi_game = [](const DataDistribution& d, size_t size) {
    GameDef g = MakeGame(GameVariant::kMiSampled, size);
    g.dist = d;
    return g;
  };
  auto pi_game = [](const DataDistribution& d0, const DataDistribution& d1, size_t size) {
    GameDef g = MakeGame(GameVariant::kPiGen, size);
    g.dist = d0;
    g.dist_alt = d1;
    return g;
  };
  const GameDef mm = mm_game(comps, n);
  PRIVGAMES_RETURN_IF_ERROR(RequireCompatible(mm, *adv));
  const auto& d = comps.support();

  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate mm_est, s.Measure("mm_advantage", mm, trainer,
                                                                 *adv, EstimateMode::kConditional));
  AdversaryPtr mi_fwd = MakeMmMiForward(adv->Fresh(), mm);
  AdversaryPtr pi_fwd = MakeMmPiForward(adv->Fresh(), mm);
  Interval mi_max{-std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  Interval pi_max = mi_max;
  double mi_point = mi_max.low;
  double pi_point = mi_max.low;
  for (size_t i = 0; i < K; ++i) {
    PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate e,
                               s.Measure(absl::StrCat("mi_", i, "_advantage"), mi_game(d[i], n),
                                         trainer, *mi_fwd, EstimateMode::kConditional));
    mi_max = {std::max(mi_max.low, e.ci_low), std::max(mi_max.high, e.ci_high)};
    mi_point = std::max(mi_point, e.point);
  }
  for (size_t i = 0; i < K; ++i) {
    for (size_t j = 0; j < K; ++j) {
      if (i == j) continue;
      PRIVGAMES_ASSIGN_OR_RETURN(
          AdvantageEstimate e,
          s.Measure(absl::StrCat("pi_", i, "_", j, "_advantage"), pi_game(d[i], d[j], n),
                    trainer, *pi_fwd, EstimateMode::kConditional));
      pi_max = {std::max(pi_max.low, e.ci_low), std::max(pi_max.high, e.ci_high)};
      pi_point = std::max(pi_point, e.point);
    }
  }
  const Interval bound_ci{mi_max.low + pi_max.low, mi_max.high + pi_max.high};
  s.report().bound = mi_point + pi_point;
  s.AddCheck("mm_advantage <= max_i mi_i + max_ij pi_ij", CheckLessEqual(mm_est.ci(), bound_ci),
             absl::StrCat(IntervalText(mm_est.ci()), " vs ", IntervalText(bound_ci)));

  if (exact_n == 0) return absl::OkStatus();
  MetaDistribution small = comps;
  if (!exact_raw.empty()) {
    PRIVGAMES_ASSIGN_OR_RETURN(small, ParseMixture(exact_raw));
  }
  const size_t k = small.size();
  if (k < 2) return absl::InvalidArgumentError("exact_components: mixture needs K >= 2");
  const GameDef mm_small = mm_game(small, exact_n);
  AdversaryPtr mi_small = MakeMmMiForward(adv->Fresh(), mm_small);
  AdversaryPtr pi_small = MakeMmPiForward(adv->Fresh(), mm_small);
  Decomposition dec;
  PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> mm_x,
                             TryExact(s, "mm_advantage_exact", mm_small, trainer, *adv,
                                      EstimateMode::kConditional));
  if (!mm_x) return absl::OkStatus();
  dec.mm = *mm_x;
  std::vector<double> pis;
  for (size_t i = 0; i < k; ++i) {
    PRIVGAMES_ASSIGN_OR_RETURN(
        double v, s.Exact(absl::StrCat("mi_", i, "_advantage_exact"),
                          mi_game(small.support()[i], exact_n), trainer, *mi_small,
                          EstimateMode::kConditional));
    dec.mi.push_back(v);
  }
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      PRIVGAMES_ASSIGN_OR_RETURN(
          double v, s.Exact(absl::StrCat("pi_", i, "_", j, "_advantage_exact"),
                            pi_game(small.support()[i], small.support()[j], exact_n), trainer,
                            *pi_small, EstimateMode::kConditional));
      pis.push_back(v);
    }
  }
  const double identity = Mean(dec.mi) + Mean(pis);
  s.AddValue("decomposition_exact", "EXACT_CONDITIONAL", identity);
  CheckExactPair(s, "mm_advantage_exact == mean_i mi_i + mean_ij pi_ij", dec.mm, identity);
  const double bound_x = *std::max_element(dec.mi.begin(), dec.mi.end()) +
                         *std::max_element(pis.begin(), pis.end());
  s.AddCheck("mm_advantage_exact <= max_i mi_i + max_ij pi_ij",
             CheckExactLessEqual(dec.mm, bound_x),
             absl::StrFormat("%.17g <= %.17g", dec.mm, bound_x));
  return absl::OkStatus();
}

absl::Status RunGame(Session& s, const Params& params) {
  for (const auto& [k, v] : params.entries()) s.Record(k, v);
  PRIVGAMES_ASSIGN_OR_RETURN(GameDef game, BuildGame(params, "game."));
  PRIVGAMES_ASSIGN_OR_RETURN(std::string conv_name,
                             params.GetString(kSigma2Key, std::string("standard")));
  PRIVGAMES_ASSIGN_OR_RETURN(Sigma2Convention conv, ParseSigma2Convention(conv_name));
  PRIVGAMES_ASSIGN_OR_RETURN(Trainer trainer, BuildTrainer(params, "trainer.", conv));
  PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr adv, BuildAdversary(params, "adversary."));
  PRIVGAMES_ASSIGN_OR_RETURN(std::string mode_name,
                             params.GetString("mode", std::string("CENTERED")));
  PRIVGAMES_ASSIGN_OR_RETURN(EstimateMode mode, ParseEstimateMode(mode_name));
  PRIVGAMES_ASSIGN_OR_RETURN(double baseline, params.GetDouble("baseline", 0.5));
  PRIVGAMES_ASSIGN_OR_RETURN(bool exact, params.GetBool("exact", false));
  PRIVGAMES_RETURN_IF_ERROR(Validate(game));
  PRIVGAMES_RETURN_IF_ERROR(CheckCompatible(game, *adv));

  PRIVGAMES_ASSIGN_OR_RETURN(TrialBatch batch, s.Run("advantage", game, trainer, *adv));
  PRIVGAMES_ASSIGN_OR_RETURN(AdvantageEstimate est,
                             EstimateAdvantage(batch.records, mode, baseline));
  s.report().estimates.push_back({"advantage", std::string(EstimateModeName(mode)), est.point,
                                  est.ci_low, est.ci_high, est.trials});
  if (IsReconstructionGame(game.variant) && game.variant != GameVariant::kRcUntarg &&
      game.variant != GameVariant::kRcTarg) {
    PRIVGAMES_ASSIGN_OR_RETURN(
        RcMetrics m, ComputeRcMetrics(batch.records, game.eta, *game.rc_prior(), game.loss));
    s.AddValue("rc_baseline", "RC_BASELINE", m.baseline_eq1);
    s.AddValue("rc_advantage", "RC_COLLISION", m.adv);
  }
  if (params.Has("bound")) {
    PRIVGAMES_ASSIGN_OR_RETURN(double bound, params.GetDouble("bound", std::nullopt));
    s.report().bound = bound;
    CheckUpper(s, "advantage <= bound", est, bound);
  }
  if (exact) {
    PRIVGAMES_ASSIGN_OR_RETURN(double x, ExactAdvantage(game, trainer, *adv, mode, baseline));
    s.AddValue("advantage_exact", absl::StrCat("EXACT_", EstimateModeName(mode)), x);
  }
  return absl::OkStatus();
}

using Body = std::function<absl::Status(Session&, const Params&)>;

struct Entry {
  ExperimentInfo info;
  Body body;
};

Body Simple(absl::Status (*fn)(Session&)) {
  return [fn](Session& s, const Params&) { return fn(s); };
}

const std::vector<Entry>& Registry() {
  static const auto* registry = new std::vector<Entry>{
      {{"MI_NOT_DPD",
        "MI resilience does not imply DPD resilience: on sums of fair bits Adv_MI <= 1/sqrt(n) "
        "while a DP distinguisher has advantage 1",
        "Bayes-optimal informed MI attack vs the sum-subtracting DPD attack",
        {{"n", "64", "dataset size (>= 4, even)"}}},
       Simple(RunMiNotDpd)},
      {{"MI_NOT_PI",
        "MI resilience does not imply PI resilience: sums are MI-resilient yet theta/n "
        "estimates the property",
        "Bayes MI attack vs nearest-mean property inference",
        {{"n", "64", "dataset size (>= 4, even)"},
         {"dist0", "bernoulli(0.2)", "D0 for the property game"},
         {"dist1", "bernoulli(0.8)", "D1 for the property game"},
         {"threshold", "0.9", "vulnerable-side threshold (artifact policy)"}}},
       Simple(RunMiNotPi)},
      {{"MI_NOT_RC",
        "MI resilience does not imply RC resilience: theta - sum(S) reconstructs z",
        "Bayes MI attack vs sum subtraction on RC_RAN",
        {{"n", "64", "dataset size (>= 4, even)"}}},
       Simple(RunMiNotRc)},
      {{"PI_NOT_MI",
        "PI resilience does not imply MI resilience: feature projection hides labels "
        "(Adv_PI = 0) yet Adv_MI = 1 - Pr[x in S]",
        "set-membership MI and label-vote PI against FEATURE_PROJECTOR",
        {{"n", "4", "dataset size"}, {"support", "8", "uniform support size"}}},
       Simple(RunPiNotMi)},
      {{"RC_NOT_DPD",
        "RC resilience does not imply DPD resilience: feature projection keeps reconstruction "
        "at baseline yet separates adjacent datasets",
        "Bayes-optimal reconstruction vs set-membership DPD against FEATURE_PROJECTOR",
        {{"n", "8", "dataset size"},
         {"prior", "uniform_over((2)|0;(2)|1;(2)|2;(2)|3;(2)|4;(2)|5;(2)|6;(2)|7)",
          "reconstruction prior"},
         {"z0", "(0)|0", "DPD challenge z0"},
         {"z1", "(1)|0", "DPD challenge z1"},
         {"fill", "(3)|0", "the n-1 fixed training points"}}},
       Simple(RunRcNotDpd)},
      {{"DPD_NOT_PI",
        "DP does not imply PI resilience: (eps, delta)-DP sums keep Adv_DPD under "
        "(e^eps - 1 + 2 delta)/(e^eps + 1) yet reveal the property",
        "DPD attack vs nearest-mean property inference on NOISY_SUM",
        {{"n", "256", "dataset size"},
         {"epsilon", "1", "privacy parameter epsilon"},
         {"delta", "1e-5", "privacy parameter delta"},
         {"dist0", "bernoulli(0.2)", "D0 for the property game"},
         {"dist1", "bernoulli(0.8)", "D1 for the property game"},
         {"threshold", "0.9", "vulnerable-side threshold (artifact policy)"}}},
       Simple(RunDpdNotPi)},
      {{"DP_BOUND",
        "(eps, delta)-DP bounds DP distinguishing: Adv_DPD <= (e^eps - 1 + 2 delta)/(e^eps + 1)",
        "three DPD adversaries against NOISY_SUM",
        {{"n", "64", "dataset size"},
         {"epsilon", "1", "privacy parameter epsilon"},
         {"delta", "1e-5", "privacy parameter delta"}}},
       Simple(RunDpBound)},
      {{"MI_TO_AI",
        "MI reduces to AI: Adv_MI(A_MI) = Adv_AI(A_AI)",
        "wraps an AI adversary into an MI adversary and compares advantages",
        {{"n", "3", "dataset size"},
         {"dist", "product(uniform(2),uniform(4))", "data distribution"},
         {"phi", "0", "revealed attribute indices"},
         {"pi", "1", "inferred attribute indices"},
         {"trainer", "MEMORIZER", "noise-free trainer kind"},
         {"inner", "AI_SET_LOOKUP", "inner AI adversary kind"},
         {"exact", "true", "also run the enumeration oracle"}}},
       Simple(RunMiToAi)},
      {{"AI_TO_MI",
        "AI reduces to MI with c = 1/m: Adv_AI(A_AI) = (1/m) Adv_MI(A_MI)",
        "wraps an MI adversary into an AI adversary over the m completions",
        {{"n", "3", "dataset size"},
         {"dist", "product(uniform(2),uniform(4))", "data distribution"},
         {"phi", "0", "revealed attribute indices"},
         {"pi", "1", "inferred attribute indices"},
         {"trainer", "MEMORIZER", "noise-free trainer kind"},
         {"inner", "MI_SET_MEMBER", "inner MI adversary kind"},
         {"scheme", "sample", "candidate scheme: sample or enumerate"},
         {"exact", "true", "also run the enumeration oracle"}}},
       Simple(RunAiToMi)},
      {{"DPD_TO_MI",
        "DPD reduces to MI: Adv_DPD(A_DPD) = Adv_MI(A_MI)",
        "wraps an MI adversary into a DP distinguisher",
        {{"n", "64", "dataset size"},
         {"dist", "bernoulli(0.5)", "data distribution"},
         {"trainer", "SUM", "trainer kind"},
         {"epsilon", "1", "epsilon when trainer is NOISY_SUM"},
         {"delta", "1e-5", "delta when trainer is NOISY_SUM"},
         {"inner", "BAYES_SUM_MI", "inner MI adversary kind"},
         {"exact_n", "2", "dataset size for the enumeration oracle (0 disables)"}}},
       Simple(RunDpdToMi)},
      {{"DPD_TO_RC",
        "DPD reduces to RC: Adv_DPD >= 2 alpha (gamma - 1/2)",
        "wraps a reconstruction adversary into a DP distinguisher",
        {{"n", "64", "dataset size"},
         {"prior", "uniform(2)", "reconstruction prior pi"},
         {"fill", "0", "the n-1 fixed training points"},
         {"eta", "0", "reconstruction tolerance"},
         {"loss", "discrete", "loss: discrete or l1"},
         {"trainer", "SUM", "trainer kind"},
         {"epsilon", "1", "epsilon when trainer is NOISY_SUM"},
         {"delta", "1e-5", "delta when trainer is NOISY_SUM"},
         {"inner", "RC_SUM_SUBTRACT", "inner reconstruction adversary kind"}}},
       Simple(RunDpdToRc)},
      {{"SMI_TO_RC",
        "SMI reduces to RC: Adv_SMI >= 2 gamma - 1 when eta < loss(z0, z1)/2",
        "wraps a reconstruction adversary into a strong MI adversary",
        {{"n", "64", "dataset size"},
         {"fill", "0", "the n-1 fixed training points"},
         {"z0", "0", "challenge z0"},
         {"z1", "1", "challenge z1"},
         {"eta", "0", "reconstruction tolerance"},
         {"loss", "discrete", "loss: discrete or l1"},
         {"trainer", "SUM", "trainer kind"},
         {"epsilon", "1", "epsilon when trainer is NOISY_SUM"},
         {"delta", "1e-5", "delta when trainer is NOISY_SUM"},
         {"inner", "RC_SUM_SUBTRACT", "inner reconstruction adversary kind"}}},
       Simple(RunSmiToRc)},
      {{"RC_TO_MI",
        "RC reduces to MI with c = 1/|supp(D)|: Adv_RC(B) = Adv_MI(A) / |supp(D)|",
        "wraps an MI adversary into a reconstruction adversary",
        {{"n", "2", "dataset size"},
         {"dist", "bernoulli(0.5)", "data distribution (also the prior)"},
         {"trainer", "SUM", "noise-free trainer kind"},
         {"inner", "BAYES_SUM_MI", "inner MI adversary kind"},
         {"exact", "true", "also run the enumeration oracle"}}},
       Simple(RunRcToMi)},
      {{"CASE_STUDY_MM",
        "Mixture membership decomposes: Adv_MM <= max_i Adv_MI_i + max_{i!=j} Adv_PI_ij",
        "measures the mixture game and every forwarded MI_i / PI_ij game",
        {{"n", "32", "dataset size"},
         {"components", "mixture(bernoulli(0.2),bernoulli(0.5),bernoulli(0.8))",
          "the K mixture components"},
         {"trainer", "SUM", "trainer kind"},
         {"epsilon", "1", "epsilon when trainer is NOISY_SUM"},
         {"delta", "1e-5", "delta when trainer is NOISY_SUM"},
         {"adversary", "MM_MEAN_THRESHOLD", "mixture adversary kind"},
         {"exact_n", "2", "dataset size for the exact decomposition (0 disables)"},
         {"exact_components", "", "components for the exact check (empty: same)"}}},
       Simple(RunCaseStudyMm)},
      {{"GAME", "single game measurement",
        "runs one configured game/trainer/adversary triple",
        {{"game.*", "", "game definition (variant, n, dist, ...)"},
         {"trainer.*", "", "trainer (kind, attr, epsilon, delta)"},
         {"adversary.*", "", "adversary (kind and its parameters; wrappers nest under inner.)"},
         {"mode", "CENTERED", "CENTERED, CONDITIONAL or BASELINE"},
         {"baseline", "0.5", "G for BASELINE mode"},
         {"exact", "false", "also run the enumeration oracle"},
         {"bound", "", "optional upper bound to check"}}},
       RunGame},
  };
  return *registry;
}

absl::Status CheckKeys(const ExperimentInfo& info, const Params& params) {
  for (const auto& [key, value] : params.entries()) {
    if (key == kSigma2Key) continue;
    bool known = false;
    for (const ParamDoc& d : info.params) {
      if (d.key == key || (absl::EndsWith(d.key, ".*") &&
                           absl::StartsWith(key, d.key.substr(0, d.key.size() - 1)))) {
        known = true;
      }
    }
    if (!known) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, ": unknown parameter for experiment ", info.id));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Verdict CheckLessEqual(Interval a, Interval b) {
  const double d_low = a.low - b.high;
  const double d_high = a.high - b.low;
  if (d_low > 0.0) return Verdict::kFail;
  if (d_high <= 0.0) return Verdict::kPass;
  return Verdict::kInconclusive;
}

Verdict CheckClose(Interval a, Interval b) {
  const double mid_a = 0.5 * (a.low + a.high);
  const double mid_b = 0.5 * (b.low + b.high);
  return std::abs(mid_a - mid_b) <= a.HalfWidth() + b.HalfWidth() ? Verdict::kPass
                                                                  : Verdict::kFail;
}

Verdict CheckExactEqual(double a, double b, double tol) {
  return std::abs(a - b) <= tol ? Verdict::kPass : Verdict::kFail;
}

Verdict CheckExactLessEqual(double a, double b, double tol) {
  return a <= b + tol ? Verdict::kPass : Verdict::kFail;
}

Verdict CombineVerdicts(std::span<const Verdict> verdicts) {
  bool inconclusive = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::kFail) return Verdict::kFail;
    inconclusive |= v == Verdict::kInconclusive;
  }
  return inconclusive ? Verdict::kInconclusive : Verdict::kPass;
}

const NamedEstimate* ExperimentReport::Find(absl::string_view name) const {
  for (const NamedEstimate& e : estimates) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<ExperimentInfo> ListExperiments() {
  std::vector<ExperimentInfo> out;
  for (const Entry& e : Registry()) out.push_back(e.info);
  return out;
}

absl::StatusOr<ExperimentInfo> DescribeExperiment(absl::string_view id) {
  for (const Entry& e : Registry()) {
    if (e.info.id == id) return e.info;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown experiment id '", id, "'"));
}

absl::StatusOr<ExperimentReport> RunExperiment(absl::string_view id, const Params& params,
                                               const RunOptions& options) {
  const Entry* entry = nullptr;
  for (const Entry& e : Registry()) {
    if (e.info.id == id) entry = &e;
  }
  if (entry == nullptr) {
    return absl::InvalidArgumentError(absl::StrCat("unknown experiment id '", id, "'"));
  }
  if (options.trials < 1) return absl::InvalidArgumentError("trials must be ≥ 1");
  PRIVGAMES_RETURN_IF_ERROR(CheckKeys(entry->info, params));

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.experiment = entry->info.id;
  report.theorem_ref = entry->info.theorem_ref;
  report.master_seed = options.master_seed;
  report.trials = options.trials;
  Session session(entry->info, params, options, report);
  PRIVGAMES_RETURN_IF_ERROR(entry->body(session, params));

  std::vector<Verdict> verdicts;
  for (const Check& c : report.checks) verdicts.push_back(c.verdict);
  report.verdict = CombineVerdicts(verdicts);
  if (report.verdict == Verdict::kPass && session.attempted() > 0 &&
      static_cast<double>(report.degenerate_trials) >
          kMaxDegenerateFraction * static_cast<double>(session.attempted())) {
    report.verdict = Verdict::kInconclusive;
    report.checks.push_back(
        {"degenerate trials <= 1%", Verdict::kInconclusive,
         absl::StrCat(report.degenerate_trials, " of ", session.attempted(), " degenerate")});
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

absl::StatusOr<GameDef> BuildGame(const Params& p, absl::string_view prefix) {
  auto key = [&](absl::string_view k) { return absl::StrCat(prefix, k); };
  GameDef g;
  PRIVGAMES_ASSIGN_OR_RETURN(std::string variant, p.GetString(key("variant"), std::nullopt));
  absl::StatusOr<GameVariant> v = ParseGameVariant(variant);
  if (!v.ok()) return absl::InvalidArgumentError(absl::StrCat(key("variant"), ": ", v.status().message()));
  g.variant = *v;
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, p.GetUint(key("n"), std::nullopt));
  g.n = n;
  PRIVGAMES_ASSIGN_OR_RETURN(g.p, p.GetDouble(key("p"), 0.5));
  if (p.Has(key("dist"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.dist, p.GetDistribution(key("dist"), std::nullopt));
  }
  if (p.Has(key("dist_alt"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.dist_alt, p.GetDistribution(key("dist_alt"), std::nullopt));
  }
  if (p.Has(key("meta"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.meta, p.GetMixture(key("meta"), std::nullopt));
  }
  if (p.Has(key("prior"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.prior, p.GetDistribution(key("prior"), std::nullopt));
  }
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t m, p.GetUint(key("m"), 1));
  g.m = m;
  if (p.Has(key("universe"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.universe, p.GetDataset(key("universe"), std::nullopt));
  }
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n_pois, p.GetUint(key("n_pois"), 0));
  g.n_pois = n_pois;
  if (p.Has(key("S"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.fixed_S, p.GetDataset(key("S"), std::nullopt));
  }
  if (p.Has(key("z0"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.fixed_z0, p.GetExample(key("z0"), std::nullopt));
  }
  if (p.Has(key("z1"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.fixed_z1, p.GetExample(key("z1"), std::nullopt));
  }
  if (p.Has(key("Sstar"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(g.fixed_Sstar, p.GetDataset(key("Sstar"), std::nullopt));
  }
  PRIVGAMES_ASSIGN_OR_RETURN(g.phi, p.GetIndexList(key("phi"), std::string()));
  PRIVGAMES_ASSIGN_OR_RETURN(g.pi_proj, p.GetIndexList(key("pi"), std::string()));
  if (p.Has(key("canary.template"))) {
    CanaryFormat c;
    PRIVGAMES_ASSIGN_OR_RETURN(c.tmpl, p.GetExample(key("canary.template"), std::nullopt));
    PRIVGAMES_ASSIGN_OR_RETURN(c.holes, p.GetIndexList(key("canary.holes"), std::string()));
    PRIVGAMES_ASSIGN_OR_RETURN(const int64_t radix, p.GetInt(key("canary.radix"), 10));
    c.radix = static_cast<AttrValue>(radix);
    g.canary = std::move(c);
  }
  PRIVGAMES_ASSIGN_OR_RETURN(g.eta, p.GetDouble(key("eta"), 0.0));
  PRIVGAMES_ASSIGN_OR_RETURN(std::string loss, p.GetString(key("loss"), std::string("discrete")));
  PRIVGAMES_ASSIGN_OR_RETURN(g.loss, ParseLossKind(loss));
  if (p.Has(key("budget"))) {
    PRIVGAMES_ASSIGN_OR_RETURN(const int64_t budget, p.GetInt(key("budget"), std::nullopt));
    g.budget = budget;
  }
  absl::Status valid = Validate(g);
  if (!valid.ok()) return absl::InvalidArgumentError(absl::StrCat(prefix, ": ", valid.message()));
  return g;
}

absl::StatusOr<Trainer> BuildTrainer(const Params& p, absl::string_view prefix,
                                     Sigma2Convention convention) {
  auto key = [&](absl::string_view k) { return absl::StrCat(prefix, k); };
  PRIVGAMES_ASSIGN_OR_RETURN(std::string name, p.GetString(key("kind"), std::nullopt));
  absl::StatusOr<TrainerKind> kind = ParseTrainerKind(name);
  if (!kind.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(key("kind"), ": ", kind.status().message()));
  }
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t attr, p.GetUint(key("attr"), 0));
  switch (*kind) {
    case TrainerKind::kSum:
      return Trainer::Sum(attr);
    case TrainerKind::kNoisySum: {
      PRIVGAMES_ASSIGN_OR_RETURN(const double eps, p.GetDouble(key("epsilon"), std::nullopt));
      PRIVGAMES_ASSIGN_OR_RETURN(const double delta, p.GetDouble(key("delta"), std::nullopt));
      absl::StatusOr<Trainer> t = Trainer::NoisySum(eps, delta, attr, convention);
      if (!t.ok()) return absl::InvalidArgumentError(absl::StrCat(prefix, ": ", t.status().message()));
      return t;
    }
    case TrainerKind::kMemorizer: return Trainer::Memorizer();
    case TrainerKind::kFeatureProjector: return Trainer::FeatureProjector();
    case TrainerKind::kCountModel: return Trainer::CountModel();
    case TrainerKind::kConstant: return Trainer::Constant();
  }
  return absl::InternalError("unhandled trainer kind");
}

absl::StatusOr<AdversaryPtr> BuildAdversary(const Params& p, absl::string_view prefix) {
  auto key = [&](absl::string_view k) { return absl::StrCat(prefix, k); };
  PRIVGAMES_ASSIGN_OR_RETURN(std::string kind, p.GetString(key("kind"), std::nullopt));
  auto inner = [&]() { return BuildAdversary(p, key("inner.")); };
  if (kind == "RANDOM") return MakeRandomAdversary();
  if (kind == "CONSTANT") {
    PRIVGAMES_ASSIGN_OR_RETURN(const int64_t bit, p.GetInt(key("bit"), 0));
    if (bit != 0 && bit != 1) return absl::InvalidArgumentError(absl::StrCat(key("bit"), ": must be 0 or 1"));
    return MakeConstantAdversary(static_cast<int>(bit));
  }
  if (kind == "BAYES_SUM_MI") {
    std::optional<double> prob;
    if (p.Has(key("p"))) {
      PRIVGAMES_ASSIGN_OR_RETURN(prob, p.GetDouble(key("p"), std::nullopt));
      if (!(*prob >= 0.0 && *prob <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrCat(key("p"), ": must lie in [0,1]"));
      }
    }
    return MakeBayesSumMi(prob);
  }
  if (kind == "DPD_SUM_EXACT") return MakeDpdSumExact();
  if (kind == "PI_MEAN") return MakePiMean();
  if (kind == "RC_SUM_SUBTRACT") return MakeRcSumSubtract();
  if (kind == "MI_SET_MEMBER") return MakeMiSetMember();
  if (kind == "ORACLE_MEMBER") return MakeOracleMember();
  if (kind == "MI_POINT_PRIOR") {
    std::optional<Example> x0;
    if (p.Has(key("x0"))) {
      PRIVGAMES_ASSIGN_OR_RETURN(x0, p.GetExample(key("x0"), std::nullopt));
    }
    return MakeMiPointPrior(std::move(x0));
  }
  if (kind == "MM_MEAN_THRESHOLD") return MakeMmMeanThreshold();
  if (kind == "PI_LABEL_VOTE") return MakePiLabelVote();
  if (kind == "AI_SET_LOOKUP") return MakeAiSetLookup();
  if (kind == "DPD_SET_MEMBER") {
    PRIVGAMES_ASSIGN_OR_RETURN(Example z0, p.GetExample(key("z0"), Example::Scalar(0)));
    PRIVGAMES_ASSIGN_OR_RETURN(Example z1, p.GetExample(key("z1"), Example::Scalar(1)));
    PRIVGAMES_ASSIGN_OR_RETURN(Example fill, p.GetExample(key("fill"), Example::Scalar(0)));
    return MakeDpdSetMember(std::move(z0), std::move(z1), std::move(fill));
  }
  if (kind == "CANARY_RANKER") return MakeCanaryRanker();
  if (kind == "UNTARGETED_EXTRACTOR") return MakeUntargetedExtractor();
  if (kind == "SCALAR_THRESHOLD") {
    PRIVGAMES_ASSIGN_OR_RETURN(const double t, p.GetDouble(key("t"), std::nullopt));
    return MakeScalarThreshold(t);
  }
  if (kind == "SMI_FROM_RC") {
    PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr in, inner());
    PRIVGAMES_ASSIGN_OR_RETURN(std::string loss, p.GetString(key("loss"), std::string("discrete")));
    PRIVGAMES_ASSIGN_OR_RETURN(LossKind lk, ParseLossKind(loss));
    return MakeSmiFromRc(std::move(in), lk);
  }
  if (kind == "DPD_FROM_RC") {
    PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr in, inner());
    PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution prior, p.GetDistribution(key("prior"), std::nullopt));
    PRIVGAMES_ASSIGN_OR_RETURN(Dataset S, p.GetDataset(key("S"), std::nullopt));
    PRIVGAMES_ASSIGN_OR_RETURN(std::string loss, p.GetString(key("loss"), std::string("discrete")));
    PRIVGAMES_ASSIGN_OR_RETURN(LossKind lk, ParseLossKind(loss));
    PRIVGAMES_ASSIGN_OR_RETURN(const double eta, p.GetDouble(key("eta"), 0.0));
    return MakeDpdFromRc(std::move(in), std::move(prior), std::move(S), lk, eta);
  }
  if (kind == "DPD_FROM_MI" || kind == "RC_FROM_MI") {
    PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr in, inner());
    PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution dist, p.GetDistribution(key("dist"), std::nullopt));
    return kind == "DPD_FROM_MI" ? MakeDpdFromMi(std::move(in), std::move(dist))
                                 : MakeRcFromMi(std::move(in), std::move(dist));
  }
  if (kind == "MI_FROM_AI") {
    PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr in, inner());
    PRIVGAMES_ASSIGN_OR_RETURN(std::vector<size_t> phi, p.GetIndexList(key("phi"), std::string()));
    PRIVGAMES_ASSIGN_OR_RETURN(std::vector<size_t> pi, p.GetIndexList(key("pi"), std::nullopt));
    return MakeMiFromAi(std::move(in), std::move(phi), std::move(pi));
  }
  if (kind == "AI_FROM_MI") {
    PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr in, inner());
    PRIVGAMES_ASSIGN_OR_RETURN(std::string scheme, p.GetString(key("scheme"), std::string("sample")));
    if (scheme != "sample" && scheme != "enumerate") {
      return absl::InvalidArgumentError(absl::StrCat(key("scheme"), ": expected sample or enumerate"));
    }
    return MakeAiFromMi(std::move(in), scheme == "sample" ? AiFromMiScheme::kSample
                                                          : AiFromMiScheme::kEnumerate);
  }
  if (kind == "MM_MI_FORWARD" || kind == "MM_PI_FORWARD") {
    PRIVGAMES_ASSIGN_OR_RETURN(AdversaryPtr in, inner());
    GameDef mm;
    mm.variant = GameVariant::kMm;
    PRIVGAMES_ASSIGN_OR_RETURN(mm.meta, p.GetMixture(key("meta"), std::nullopt));
    PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t n, p.GetUint(key("n"), std::nullopt));
    mm.n = n;
    return kind == "MM_MI_FORWARD" ? MakeMmMiForward(std::move(in), std::move(mm))
                                   : MakeMmPiForward(std::move(in), std::move(mm));
  }
  return absl::InvalidArgumentError(
      absl::StrCat(key("kind"), ": unknown adversary kind '", kind, "'"));
}

}  // namespace privgames
