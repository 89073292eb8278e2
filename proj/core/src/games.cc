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

#include "privgames/games.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "privgames/status_macros.h"

namespace privgames {
namespace {

struct VariantName {
  GameVariant variant;
  absl::string_view name;
};

constexpr VariantName kVariantNames[] = {
    {GameVariant::kMiSampled, "MI_SAMPLED"},
    {GameVariant::kMi, "MI"},
    {GameVariant::kMiSkew, "MI_SKEW"},
    {GameVariant::kMiAdv, "MI_ADV"},
    {GameVariant::kMiBb, "MI_BB"},
    {GameVariant::kMiDiff, "MI_DIFF"},
    {GameVariant::kMiPois, "MI_POIS"},
    {GameVariant::kMiUser, "MI_USER"},
    {GameVariant::kMiSubj, "MI_SUBJ"},
    {GameVariant::kMiSq, "MI_SQ"},
    {GameVariant::kMiInformed, "MI_INFORMED"},
    {GameVariant::kAi, "AI"},
    {GameVariant::kAiInformed, "AI_INFORMED"},
    {GameVariant::kInv, "INV"},
    {GameVariant::kRcFixed, "RC_FIXED"},
    {GameVariant::kRcRan, "RC_RAN"},
    {GameVariant::kRcUntarg, "RC_UNTARG"},
    {GameVariant::kRcTarg, "RC_TARG"},
    {GameVariant::kPi, "PI"},
    {GameVariant::kPiGen, "PI_GEN"},
    {GameVariant::kDpd, "DPD"},
    {GameVariant::kSmi, "SMI"},
    {GameVariant::kMm, "MM"},
    {GameVariant::kMmG0, "MM_G0"},
    {GameVariant::kMmG1, "MM_G1"},
};

absl::Status Missing(const GameDef& g, absl::string_view field) {
  return absl::InvalidArgumentError(
      absl::StrCat(GameVariantName(g.variant), " requires game.", field));
}

absl::Status CheckProjection(const GameDef& g) {
  if (!g.dist) return Missing(g, "dist");
  if (g.pi_proj.empty()) return Missing(g, "pi");
  const size_t arity = g.dist->schema().arity();
  absl::flat_hash_set<size_t> seen;
  for (size_t i : g.phi) {
    if (i >= arity) return absl::InvalidArgumentError(absl::StrCat("phi index ", i, " >= arity ", arity));
    seen.insert(i);
  }
  for (size_t i : g.pi_proj) {
    if (i >= arity) return absl::InvalidArgumentError(absl::StrCat("pi index ", i, " >= arity ", arity));
    if (seen.contains(i)) {
      return absl::InvalidArgumentError(absl::StrCat("phi and pi share attribute ", i));
    }
  }
  return absl::OkStatus();
}

// Draws from `dist` conditioned on landing outside S.
absl::StatusOr<Example> SampleOutside(const DataDistribution& dist, const Dataset& S,
                                      RandomSource& rng) {
  absl::flat_hash_set<Example> members(S.begin(), S.end());
  if (rng.enumerating()) {
    std::vector<double> probs(dist.probs().begin(), dist.probs().end());
    double mass = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
      if (members.contains(dist.support()[i])) probs[i] = 0.0;
      mass += probs[i];
    }
    if (!(mass > 0.0)) {
      return absl::ResourceExhaustedError("degenerate game: support of D lies inside S");
    }
    for (double& p : probs) p /= mass;
    return dist.support()[rng.Choose(probs)];
  }
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    Example z = SampleExample(dist, rng);
    if (!members.contains(z)) return z;
  }
  return absl::ResourceExhaustedError(absl::StrCat(
      "degenerate game: no point outside S after ", kRejectionCap, " attempts"));
}

// Uniform draw from the universe conditioned on landing outside S.
absl::StatusOr<Example> SampleUniverseOutside(const std::vector<Example>& universe,
                                              const Dataset& S, RandomSource& rng) {
  absl::flat_hash_set<Example> members(S.begin(), S.end());
  if (rng.enumerating()) {
    std::vector<double> probs(universe.size(), 0.0);
    double count = 0.0;
    for (size_t i = 0; i < universe.size(); ++i) {
      if (!members.contains(universe[i])) {
        probs[i] = 1.0;
        count += 1.0;
      }
    }
    if (count == 0.0) {
      return absl::ResourceExhaustedError("degenerate game: universe lies inside S");
    }
    for (double& p : probs) p /= count;
    return universe[rng.Choose(probs)];
  }
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    const Example& z = universe[rng.UniformIndex(universe.size())];
    if (!members.contains(z)) return z;
  }
  return absl::ResourceExhaustedError(absl::StrCat(
      "degenerate game: no universe point outside S after ", kRejectionCap, " attempts"));
}

class Challenger {
 public:
  Challenger(const GameDef& game, const Trainer& trainer,
             std::unique_ptr<Adversary> adversary, RandomSource& rng)
      : g_(game),
        trainer_(trainer),
        adv_(std::move(adversary)),
        ds_(rng.Derive("dataset", 0)),
        sec_(rng.Derive("secret", 0)),
        ch_(rng.Derive("challenge", 0)),
        tr_(rng.Derive("trainer", 0)),
        ar_(rng.Derive("adversary", 0)) {
    rec_.game = game.variant;
  }

  absl::StatusOr<TrialRecord> Run() {
    PRIVGAMES_RETURN_IF_ERROR(Dispatch());
    return std::move(rec_);
  }

 private:
  absl::Status Dispatch() {
    switch (g_.variant) {
      case GameVariant::kMiSampled: return MiSampled();
      case GameVariant::kMi:
      case GameVariant::kMiSkew:
      case GameVariant::kMiAdv: return Mi();
      case GameVariant::kMiInformed: return MiInformed();
      case GameVariant::kMiBb: return MiBb();
      case GameVariant::kMiDiff:
      case GameVariant::kMiPois: return MiUniverse();
      case GameVariant::kMiUser: return MiUser();
      case GameVariant::kMiSubj: return MiSubj();
      case GameVariant::kMiSq: return MiSq();
      case GameVariant::kAi:
      case GameVariant::kInv: return Ai();
      case GameVariant::kAiInformed: return AiInformed();
      case GameVariant::kRcFixed:
      case GameVariant::kRcRan: return Rc();
      case GameVariant::kRcUntarg: return RcUntarg();
      case GameVariant::kRcTarg: return RcTarg();
      case GameVariant::kPi:
      case GameVariant::kPiGen: return Pi();
      case GameVariant::kDpd:
      case GameVariant::kSmi: return Dpd();
      case GameVariant::kMm:
      case GameVariant::kMmG0: return Mm();
      case GameVariant::kMmG1: return MmG1();
    }
    return absl::InternalError("unhandled variant");
  }

  Observation Base() const {
    Observation obs;
    obs.game = &g_;
    obs.trainer = &trainer_;
    return obs;
  }

  ChooseContext Context() const { return ChooseContext{&g_, &trainer_}; }

  absl::StatusOr<GuessResult> Ask(const Observation& obs) { return adv_->Guess(obs, ar_); }

  absl::StatusOr<int> AskBit(const Observation& obs) {
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult guess, Ask(obs));
    if (!guess.bit || (*guess.bit != 0 && *guess.bit != 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("adversary ", adv_->kind(), " returned no bit in ",
                       GameVariantName(g_.variant)));
    }
    return *guess.bit;
  }

  void FinishBit(int b, int bhat) {
    rec_.secret_bit = b;
    rec_.guess_bit = bhat;
    rec_.win = b == bhat ? 1 : 0;
  }

  absl::StatusOr<Model> Train(const Dataset& data) { return trainer_.Train(data, tr_); }

  static void AddPresent(Dataset& data, const Example& z) {
    if (!z.absent()) data.push_back(z);
  }

  const DataDistribution& Dist() const { return *g_.dist; }

  absl::Status MiSampled() {
    Dataset S = SampleDataset(Dist(), g_.n, ds_);
    const int b = sec_.Bit(0.5);
    Example z = b == 0 ? S[ch_.UniformIndex(S.size())] : SampleExample(Dist(), ch_);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Observation obs = Base();
    obs.model = &theta;
    obs.z = z;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = z;
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status Mi() {
    Dataset S = SampleDataset(Dist(), g_.n - 1, ds_);
    const int b = sec_.Bit(g_.variant == GameVariant::kMiSkew ? g_.p : 0.5);
    Example z0;
    if (g_.variant == GameVariant::kMiAdv) {
      PRIVGAMES_ASSIGN_OR_RETURN(ChooseResult chosen, adv_->Choose(Context(), ar_));
      if (chosen.z0.absent()) {
        return absl::InvalidArgumentError("MI_ADV choose phase returned no challenge");
      }
      z0 = std::move(chosen.z0);
    } else {
      z0 = SampleExample(Dist(), ch_);
    }
    Example z1 = SampleExample(Dist(), ch_);
    S.push_back(b == 0 ? z0 : z1);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Observation obs = Base();
    obs.model = &theta;
    obs.z = z0;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = z0;
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status MiInformed() {
    const int b = sec_.Bit(0.5);
    Dataset S = SampleDataset(Dist(), g_.n - 1, ds_);
    Example z0 = SampleExample(Dist(), ch_);
    Example z1 = SampleExample(Dist(), ch_);
    S.push_back(b == 0 ? z0 : z1);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Observation obs = Base();
    obs.model = &theta;
    obs.z = z0;
    obs.z1 = z1;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = b == 0 ? z0 : z1;
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status MiBb() {
    Dataset S = SampleDataset(Dist(), g_.n, ds_);
    const int b = sec_.Bit(0.5);
    Example z;
    if (b == 0) {
      z = S[ch_.UniformIndex(S.size())];
    } else {
      PRIVGAMES_ASSIGN_OR_RETURN(z, SampleOutside(Dist(), S, ch_));
    }
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Oracle oracle(std::move(theta), g_.budget);
    Observation obs = Base();
    obs.oracle = &oracle;
    obs.z = z;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = z;
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status MiUniverse() {
    Dataset S = SampleDataset(Dist(), g_.n, ds_);
    PRIVGAMES_ASSIGN_OR_RETURN(Example z, SampleUniverseOutside(g_.universe, S, ch_));
    Dataset poison;
    if (g_.variant == GameVariant::kMiPois) {
      PRIVGAMES_ASSIGN_OR_RETURN(ChooseResult chosen, adv_->Choose(Context(), ar_));
      if (chosen.S.size() != g_.n_pois) {
        return absl::InvalidArgumentError(absl::StrCat(
            "MI_POIS choose phase returned ", chosen.S.size(), " poison points, expected ",
            g_.n_pois));
      }
      poison = std::move(chosen.S);
    }
    Dataset train = S;
    AddPresent(train, z);
    train.insert(train.end(), poison.begin(), poison.end());
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(train));
    Oracle oracle(std::move(theta), g_.budget);
    Observation obs = Base();
    obs.oracle = &oracle;
    if (g_.variant == GameVariant::kMiPois) obs.known_S = &poison;
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult guess, Ask(obs));
    const Example zhat = guess.value.value_or(Example::Absent());
    rec_.secret_value = z;
    rec_.guess_value = zhat;
    rec_.win = zhat == z ? 1 : 0;
    if (g_.universe.size() == 2) {
      rec_.secret_bit = z == g_.universe[0] ? 0 : 1;
      if (zhat == g_.universe[0]) rec_.guess_bit = 0;
      if (zhat == g_.universe[1]) rec_.guess_bit = 1;
    }
    return absl::OkStatus();
  }

  const DataDistribution& DrawComponent() {
    const MetaDistribution& meta = *g_.meta;
    return meta.support()[ds_.Choose(meta.probs(), meta.cumulative())];
  }

  absl::Status MiUser() {
    const int b = sec_.Bit(0.5);
    std::vector<const DataDistribution*> users;
    for (size_t i = 0; i < g_.m; ++i) users.push_back(&DrawComponent());
    Dataset train;
    for (size_t i = 0; i + 1 < g_.m; ++i) {
      Dataset Si = SampleDataset(*users[i], g_.n, ds_);
      train.insert(train.end(), Si.begin(), Si.end());
    }
    const Dataset& sstar = *g_.fixed_Sstar;
    if (b == 0) {
      train.insert(train.end(), sstar.begin(), sstar.end());
    } else {
      Dataset Sm = SampleDataset(*users.back(), g_.n, ds_);
      train.insert(train.end(), Sm.begin(), Sm.end());
    }
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(train));
    Oracle oracle(std::move(theta), g_.budget);
    Observation obs = Base();
    obs.oracle = &oracle;
    obs.known_S = &sstar;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status MiSubj() {
    const int b = sec_.Bit(0.5);
    std::vector<const DataDistribution*> subjects;
    for (size_t i = 0; i < g_.m; ++i) subjects.push_back(&DrawComponent());
    Dataset train;
    for (size_t i = 0; i + 1 < g_.m; ++i) {
      Dataset Si = SampleDataset(*subjects[i], g_.n, ds_);
      train.insert(train.end(), Si.begin(), Si.end());
    }
    Dataset Sm = SampleDataset(b == 0 ? *g_.dist_alt : *subjects.back(), g_.n, ds_);
    train.insert(train.end(), Sm.begin(), Sm.end());
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(train));
    Observation obs = Base();
    obs.model = &theta;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status MiSq() {
    PRIVGAMES_ASSIGN_OR_RETURN(ChooseResult chosen, adv_->Choose(Context(), ar_));
    const size_t total = 2 * g_.n;
    if (chosen.points.size() != total) {
      return absl::InvalidArgumentError(absl::StrCat(
          "MI_SQ choose phase returned ", chosen.points.size(), " points, expected ", total));
    }
    // B uniform over 0/1 vectors with exactly n ones, drawn sequentially.
    std::vector<int> B(total);
    size_t ones_left = g_.n;
    for (size_t i = 0; i < total; ++i) {
      const double p_one = static_cast<double>(ones_left) / static_cast<double>(total - i);
      B[i] = sec_.Bit(1.0 - p_one);
      ones_left -= static_cast<size_t>(B[i]);
    }
    Dataset S;
    for (size_t i = 0; i < total; ++i) {
      if (B[i] == 0) AddPresent(S, chosen.points[i]);
    }
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    const size_t j = ch_.UniformIndex(total);
    PRIVGAMES_ASSIGN_OR_RETURN(double output, Query(theta, chosen.points[j]));
    Observation obs = Base();
    obs.sq_points = &chosen.points;
    obs.sq_j = j;
    obs.sq_output = output;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = chosen.points[j];
    FinishBit(B[j], bhat);
    return absl::OkStatus();
  }

  void FinishAttribute(int b, const Example& target, const std::optional<Example>& guess) {
    const Example ahat = guess.value_or(Example::Absent());
    rec_.secret_bit = b;
    rec_.secret_value = target;
    rec_.guess_value = ahat;
    rec_.win = SameProjection(ahat, target, g_.pi_proj) ? 1 : 0;
  }

  absl::Status Ai() {
    Dataset S = SampleDataset(Dist(), g_.n, ds_);
    const int b = sec_.Bit(0.5);
    Example z = (b == 0 && g_.variant == GameVariant::kAi) ? S[ch_.UniformIndex(S.size())]
                                                          : SampleExample(Dist(), ch_);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Observation obs = Base();
    obs.model = &theta;
    obs.phi_view = Project(z, g_.phi);
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult guess, Ask(obs));
    FinishAttribute(b, z, guess.value);
    return absl::OkStatus();
  }

  absl::Status AiInformed() {
    Dataset S = SampleDataset(Dist(), g_.n - 1, ds_);
    Example z0 = SampleExample(Dist(), ch_);
    Example z1 = SampleExample(Dist(), ch_);
    const int b = sec_.Bit(0.5);
    Dataset train = S;
    train.push_back(b == 0 ? z0 : z1);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(train));
    Observation obs = Base();
    obs.model = &theta;
    obs.known_S = &S;
    obs.phi_view = Project(z0, g_.phi);
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult guess, Ask(obs));
    FinishAttribute(b, z0, guess.value);
    return absl::OkStatus();
  }

  void FinishReconstruction(const Example& z, const Example& zhat) {
    rec_.secret_value = z;
    rec_.guess_value = zhat;
    rec_.loss_value = Loss(g_.loss, z, zhat);
    rec_.win = *rec_.loss_value <= g_.eta ? 1 : 0;
  }

  absl::Status Rc() {
    Dataset S = g_.variant == GameVariant::kRcFixed ? *g_.fixed_S
                                                    : SampleDataset(Dist(), g_.n - 1, ds_);
    Example z = SampleExample(*g_.rc_prior(), sec_);
    Dataset train = S;
    train.push_back(z);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(train));
    Observation obs = Base();
    obs.model = &theta;
    obs.known_S = &S;
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult guess, Ask(obs));
    FinishReconstruction(z, guess.value.value_or(Example::Absent()));
    return absl::OkStatus();
  }

  absl::Status RcUntarg() {
    Dataset S = SampleDataset(Dist(), g_.n, ds_);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Oracle oracle(std::move(theta), g_.budget);
    Observation obs = Base();
    obs.oracle = &oracle;
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult guess, Ask(obs));
    std::vector<Example> guessed;
    absl::flat_hash_set<Example> seen;
    for (const Example& x : guess.set) {
      if (seen.insert(x).second) guessed.push_back(x);
    }
    absl::flat_hash_set<Example> members(S.begin(), S.end());
    size_t hits = 0;
    for (const Example& x : guessed) hits += members.contains(x) ? 1 : 0;
    const double precision =
        guessed.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(guessed.size());
    rec_.loss_value = 1.0 - precision;
    rec_.win = *rec_.loss_value <= g_.eta ? 1 : 0;
    rec_.guessed_set = std::move(guessed);
    return absl::OkStatus();
  }

  absl::Status RcTarg() {
    Dataset S = SampleDataset(Dist(), g_.n, ds_);
    const CanaryFormat& fmt = *g_.canary;
    const uint64_t r = sec_.UniformIndex(fmt.SpaceSize());
    const Example canary = fmt.Fill(r);
    for (size_t i = 0; i < g_.m; ++i) S.push_back(canary);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Oracle oracle(std::move(theta), g_.budget);
    Observation obs = Base();
    obs.oracle = &oracle;
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult guess, Ask(obs));
    const Example top = guess.ranking.empty() ? guess.value.value_or(Example::Absent())
                                              : guess.ranking.front();
    size_t rank = guess.ranking.size();
    for (size_t i = 0; i < guess.ranking.size(); ++i) {
      if (guess.ranking[i] == canary) {
        rank = i;
        break;
      }
    }
    rec_.secret_value = canary;
    rec_.guess_value = top;
    rec_.loss_value = Loss(LossKind::kDiscrete, canary, top);
    rec_.win = top == canary ? 1 : 0;
    rec_.secret_rank = rank;
    return absl::OkStatus();
  }

  absl::Status Pi() {
    const int b = sec_.Bit(0.5);
    Dataset S = SampleDataset(b == 0 ? *g_.dist : *g_.dist_alt, g_.n, ds_);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Observation obs = Base();
    obs.model = &theta;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status Dpd() {
    Dataset S;
    Example z0, z1;
    if (g_.variant == GameVariant::kDpd) {
      PRIVGAMES_ASSIGN_OR_RETURN(ChooseResult chosen, adv_->Choose(Context(), ar_));
      if (chosen.S.size() != g_.n - 1) {
        return absl::InvalidArgumentError(absl::StrCat(
            "DPD choose phase returned |S| = ", chosen.S.size(), ", expected n-1 = ", g_.n - 1));
      }
      if (chosen.z0.absent() || chosen.z1.absent()) {
        return absl::InvalidArgumentError("DPD choose phase returned an absent challenge");
      }
      S = std::move(chosen.S);
      z0 = std::move(chosen.z0);
      z1 = std::move(chosen.z1);
    } else {
      S = *g_.fixed_S;
      z0 = *g_.fixed_z0;
      z1 = *g_.fixed_z1;
    }
    const int b = sec_.Bit(0.5);
    Dataset train = S;
    train.push_back(b == 0 ? z0 : z1);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(train));
    Observation obs = Base();
    obs.model = &theta;
    obs.known_S = &S;
    obs.z = z0;
    obs.z1 = z1;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = b == 0 ? z0 : z1;
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  // k uniform on [K], k' uniform on [K] \ {k}; both from the dataset stream.
  std::pair<size_t, size_t> DrawPair() {
    const size_t K = g_.meta->size();
    const size_t k = ds_.UniformIndex(K);
    size_t kp = ds_.UniformIndex(K - 1);
    if (kp >= k) ++kp;
    return {k, kp};
  }

  absl::Status Mm() {
    const auto [k, kp] = DrawPair();
    const auto comps = g_.meta->support();
    Dataset S = SampleDataset(comps[k], g_.n, ds_);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    const int b = sec_.Bit(0.5);
    Example z;
    if (b == 0) {
      z = g_.variant == GameVariant::kMm ? S[ch_.UniformIndex(S.size())]
                                         : SampleExample(comps[k], ch_);
    } else {
      z = SampleExample(comps[kp], ch_);
    }
    Observation obs = Base();
    obs.model = &theta;
    obs.z = z;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = z;
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  absl::Status MmG1() {
    const auto [k, kp] = DrawPair();
    const auto comps = g_.meta->support();
    Example z = SampleExample(comps[k], ch_);
    const int b = sec_.Bit(0.5);
    Dataset S = SampleDataset(comps[b == 0 ? k : kp], g_.n, ds_);
    PRIVGAMES_ASSIGN_OR_RETURN(Model theta, Train(S));
    Observation obs = Base();
    obs.model = &theta;
    obs.z = z;
    PRIVGAMES_ASSIGN_OR_RETURN(int bhat, AskBit(obs));
    rec_.secret_value = z;
    FinishBit(b, bhat);
    return absl::OkStatus();
  }

  const GameDef& g_;
  const Trainer& trainer_;
  std::unique_ptr<Adversary> adv_;
  RandomSource ds_;
  RandomSource sec_;
  RandomSource ch_;
  RandomSource tr_;
  RandomSource ar_;
  TrialRecord rec_;
};

absl::StatusOr<TrialRecord> RunTrialUnchecked(const GameDef& game, const Trainer& trainer,
                                              const Adversary& prototype, RandomSource& rng) {
  Challenger challenger(game, trainer, prototype.Fresh(), rng);
  PRIVGAMES_ASSIGN_OR_RETURN(TrialRecord rec, challenger.Run());
  if (!rng.enumerating()) rec.seed_path = rng.stream().path();
  return rec;
}

}  // namespace

absl::string_view GameVariantName(GameVariant v) {
  for (const auto& [variant, name] : kVariantNames) {
    if (variant == v) return name;
  }
  return "?";
}

absl::StatusOr<GameVariant> ParseGameVariant(absl::string_view name) {
  for (const auto& [variant, vname] : kVariantNames) {
    if (vname == name) return variant;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown game variant '", name, "'"));
}

std::vector<GameVariant> AllGameVariants() {
  std::vector<GameVariant> out;
  for (const auto& entry : kVariantNames) out.push_back(entry.variant);
  return out;
}

bool IsBitGame(GameVariant v) {
  switch (v) {
    case GameVariant::kMiSampled:
    case GameVariant::kMi:
    case GameVariant::kMiSkew:
    case GameVariant::kMiAdv:
    case GameVariant::kMiBb:
    case GameVariant::kMiUser:
    case GameVariant::kMiSubj:
    case GameVariant::kMiSq:
    case GameVariant::kMiInformed:
    case GameVariant::kPi:
    case GameVariant::kPiGen:
    case GameVariant::kDpd:
    case GameVariant::kSmi:
    case GameVariant::kMm:
    case GameVariant::kMmG0:
    case GameVariant::kMmG1:
      return true;
    default:
      return false;
  }
}

bool IsBlackBoxGame(GameVariant v) {
  switch (v) {
    case GameVariant::kMiBb:
    case GameVariant::kMiDiff:
    case GameVariant::kMiPois:
    case GameVariant::kMiUser:
    case GameVariant::kMiSq:
    case GameVariant::kRcUntarg:
    case GameVariant::kRcTarg:
      return true;
    default:
      return false;
  }
}

bool IsReconstructionGame(GameVariant v) {
  return v == GameVariant::kRcFixed || v == GameVariant::kRcRan ||
         v == GameVariant::kRcUntarg || v == GameVariant::kRcTarg;
}

bool IsAttributeGame(GameVariant v) {
  return v == GameVariant::kAi || v == GameVariant::kAiInformed || v == GameVariant::kInv;
}

absl::StatusOr<LossKind> ParseLossKind(absl::string_view name) {
  if (name == "discrete") return LossKind::kDiscrete;
  if (name == "l1") return LossKind::kL1;
  return absl::InvalidArgumentError(absl::StrCat("unknown loss '", name, "'"));
}

absl::string_view LossKindName(LossKind k) {
  return k == LossKind::kDiscrete ? "discrete" : "l1";
}

double Loss(LossKind kind, const Example& z, const Example& zhat) {
  const bool comparable = !z.absent() && !zhat.absent() && z.arity() == zhat.arity() &&
                          z.label().has_value() == zhat.label().has_value();
  if (kind == LossKind::kDiscrete) return comparable && z == zhat ? 0.0 : 1.0;
  if (!comparable) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (size_t i = 0; i < z.arity(); ++i) d += std::abs(z.attr(i) - zhat.attr(i));
  if (z.label()) d += std::abs(*z.label() - *zhat.label());
  return d;
}

bool SameProjection(const Example& a, const Example& b, const std::vector<size_t>& idx) {
  if (a.absent() || b.absent() || a.arity() != b.arity()) return false;
  for (size_t i : idx) {
    if (i >= a.arity() || a.attr(i) != b.attr(i)) return false;
  }
  return true;
}

uint64_t CanaryFormat::SpaceSize() const {
  uint64_t size = 1;
  for (size_t i = 0; i < holes.size(); ++i) size *= static_cast<uint64_t>(radix);
  return size;
}

Example CanaryFormat::Fill(uint64_t r) const {
  Example out = tmpl;
  for (size_t i = holes.size(); i-- > 0;) {
    out = out.WithAttr(holes[i], static_cast<AttrValue>(r % static_cast<uint64_t>(radix)));
    r /= static_cast<uint64_t>(radix);
  }
  return out;
}

absl::Status Validate(const GameDef& g) {
  if (g.n < 1) return absl::InvalidArgumentError("game.n must be >= 1");
  switch (g.variant) {
    case GameVariant::kMiSkew:
      if (!(g.p >= 0.0 && g.p <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrCat("game.p=", g.p, " outside [0,1]"));
      }
      [[fallthrough]];
    case GameVariant::kMiSampled:
    case GameVariant::kMi:
    case GameVariant::kMiAdv:
    case GameVariant::kMiBb:
    case GameVariant::kMiInformed:
    case GameVariant::kRcRan:
    case GameVariant::kRcUntarg:
      if (!g.dist) return Missing(g, "dist");
      break;
    case GameVariant::kMiDiff:
    case GameVariant::kMiPois:
      if (!g.dist) return Missing(g, "dist");
      if (g.universe.empty()) return Missing(g, "universe");
      break;
    case GameVariant::kMiUser:
      if (!g.meta) return Missing(g, "meta");
      if (!g.fixed_Sstar) return Missing(g, "Sstar");
      if (g.m < 1) return absl::InvalidArgumentError("game.m must be >= 1");
      break;
    case GameVariant::kMiSubj:
      if (!g.meta) return Missing(g, "meta");
      if (!g.dist_alt) return Missing(g, "dist_alt");
      if (g.m < 1) return absl::InvalidArgumentError("game.m must be >= 1");
      break;
    case GameVariant::kMiSq:
    case GameVariant::kDpd:
      break;
    case GameVariant::kAi:
    case GameVariant::kInv:
    case GameVariant::kAiInformed:
      return CheckProjection(g);
    case GameVariant::kRcFixed:
      if (!g.prior) return Missing(g, "prior");
      [[fallthrough]];
    case GameVariant::kSmi:
      if (!g.fixed_S) return Missing(g, "S");
      if (g.fixed_S->size() != g.n - 1) {
        return absl::InvalidArgumentError(absl::StrCat(
            "game.S has ", g.fixed_S->size(), " points but |S| = n-1 = ", g.n - 1));
      }
      if (g.variant == GameVariant::kSmi && (!g.fixed_z0 || !g.fixed_z1)) {
        return Missing(g, "z0 and game.z1");
      }
      break;
    case GameVariant::kRcTarg:
      if (!g.dist) return Missing(g, "dist");
      if (!g.canary) return Missing(g, "canary");
      if (g.canary->radix < 1) return absl::InvalidArgumentError("canary radix must be >= 1");
      for (size_t h : g.canary->holes) {
        if (h >= g.canary->tmpl.arity()) {
          return absl::InvalidArgumentError(absl::StrCat("canary hole ", h, " outside template"));
        }
      }
      break;
    case GameVariant::kPi:
    case GameVariant::kPiGen:
      if (!g.dist) return Missing(g, "dist");
      if (!g.dist_alt) return Missing(g, "dist_alt");
      break;
    case GameVariant::kMm:
    case GameVariant::kMmG0:
    case GameVariant::kMmG1:
      if (!g.meta) return Missing(g, "meta");
      if (g.meta->size() < 2) {
        return absl::InvalidArgumentError("mixture games need K >= 2 components");
      }
      if (!g.meta->IsUniform()) {
        return absl::InvalidArgumentError("mixture components are drawn uniformly");
      }
      break;
  }
  if (g.variant == GameVariant::kRcRan && !g.rc_prior()) return Missing(g, "prior");
  return absl::OkStatus();
}

absl::StatusOr<ChooseResult> Adversary::Choose(const ChooseContext& ctx, RandomSource&) {
  return absl::FailedPreconditionError(absl::StrCat(
      "adversary ", kind(), " has no choose phase for ", GameVariantName(ctx.game->variant)));
}

absl::Status CheckCompatible(const GameDef& game, const Adversary& adversary) {
  if (IsBlackBoxGame(game.variant) && adversary.access() == Access::kWhiteBox) {
    return absl::FailedPreconditionError(absl::StrCat(
        "capability mismatch: white-box adversary ", adversary.kind(),
        " cannot play black-box game ", GameVariantName(game.variant)));
  }
  if (!adversary.Supports(game.variant)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "adversary ", adversary.kind(), " does not support ", GameVariantName(game.variant)));
  }
  return absl::OkStatus();
}

absl::StatusOr<TrialRecord> RunTrial(const GameDef& game, const Trainer& trainer,
                                     const Adversary& prototype, RandomSource rng) {
  PRIVGAMES_RETURN_IF_ERROR(Validate(game));
  PRIVGAMES_RETURN_IF_ERROR(CheckCompatible(game, prototype));
  return RunTrialUnchecked(game, trainer, prototype, rng);
}

absl::StatusOr<TrialBatch> RunTrials(const GameDef& game, const Trainer& trainer,
                                     const Adversary& prototype, uint64_t trials,
                                     const RngStream& master, int workers) {
  PRIVGAMES_RETURN_IF_ERROR(Validate(game));
  PRIVGAMES_RETURN_IF_ERROR(CheckCompatible(game, prototype));
  std::vector<std::optional<TrialRecord>> slots(trials);
  std::vector<absl::Status> errors(trials);
  std::atomic<uint64_t> next{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    for (uint64_t i = next.fetch_add(1); i < trials && !failed.load(std::memory_order_relaxed);
         i = next.fetch_add(1)) {
      RandomSource rng(master.Derive("trial", i));
      absl::StatusOr<TrialRecord> rec = RunTrialUnchecked(game, trainer, prototype, rng);
      if (rec.ok()) {
        rec->trial_index = i;
        slots[i] = std::move(*rec);
      } else {
        errors[i] = rec.status();
        if (!absl::IsResourceExhausted(rec.status())) failed.store(true);
      }
    }
  };

  const uint64_t pool = std::clamp<uint64_t>(workers < 1 ? 1 : workers, 1, std::max<uint64_t>(trials, 1));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (uint64_t t = 0; t < pool; ++t) threads.emplace_back(work);
    for (std::thread& th : threads) th.join();
  }

  TrialBatch batch;
  batch.records.reserve(trials);
  for (uint64_t i = 0; i < trials; ++i) {
    if (!errors[i].ok()) {
      if (!absl::IsResourceExhausted(errors[i])) return errors[i];
      ++batch.degenerate;
    } else if (slots[i]) {
      batch.records.push_back(std::move(*slots[i]));
    }
  }
  return batch;
}

absl::Status EnumerateGame(const GameDef& game, const Trainer& trainer,
                           const Adversary& prototype,
                           const std::function<void(const TrialRecord*, double)>& on_outcome,
                           uint64_t max_atoms) {
  PRIVGAMES_RETURN_IF_ERROR(Validate(game));
  PRIVGAMES_RETURN_IF_ERROR(CheckCompatible(game, prototype));
  Enumerator enumerator(max_atoms);
  std::optional<TrialRecord> last;
  return enumerator.ForEachAtom(
      [&](RandomSource& rng) -> absl::Status {
        absl::StatusOr<TrialRecord> rec = RunTrialUnchecked(game, trainer, prototype, rng);
        if (rec.ok()) {
          last = std::move(*rec);
          return absl::OkStatus();
        }
        if (absl::IsResourceExhausted(rec.status())) {
          last.reset();
          return absl::OkStatus();
        }
        return rec.status();
      },
      [&](double weight) { on_outcome(last ? &*last : nullptr, weight); });
}

}  // namespace privgames
